#include "rpca/bruteforce.hpp"
#include "rpca/errors.hpp"
#include "rpca/mdr.hpp"
#include "rpca/rng.hpp"

#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

using namespace rpca;

TEST_CASE("default factor rank grows like sqrt(2n)") {
    CHECK(default_factor_rank(2) == 3);  // floor((1 + 5) / 2)
    CHECK(default_factor_rank(10) == 5); // floor((1 + sqrt(89)) / 2)
    CHECK(default_factor_rank(100) > default_factor_rank(10));
}

TEST_CASE("factored objective value on identity data") {
    // X = I: || N(R) ||_F^2 = n for any factor with unit rows
    RandomSource rng(41);
    Eigen::MatrixXd X = Eigen::MatrixXd::Identity(4, 4);
    Eigen::MatrixXd R = rng.gaussian_matrix(4, 5);
    auto [value, grad] = bm_objective(R, X);
    CHECK(value == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(grad.norm() < 1e-10); // constant objective
}

TEST_CASE("factored objective is invariant along row rays") {
    RandomSource rng(42);
    Eigen::MatrixXd X = rng.gaussian_matrix(6, 3);
    Eigen::MatrixXd R = rng.gaussian_matrix(6, 4);
    auto [value, grad] = bm_objective(R, X);
    Eigen::MatrixXd S = R;
    S.row(2) *= 7.0;
    auto [value2, grad2] = bm_objective(S, X);
    CHECK(value == doctest::Approx(value2).epsilon(1e-12));
    // each gradient row is orthogonal to the corresponding factor row
    for (Eigen::Index i = 0; i < R.rows(); ++i)
        CHECK(std::abs(grad.row(i).dot(R.row(i))) <
              1e-10 * std::max(1.0, grad.row(i).norm() * R.row(i).norm()));
    (void)grad2;
}

TEST_CASE("factored gradient matches central finite differences") {
    RandomSource rng(43);
    Eigen::MatrixXd X = rng.gaussian_matrix(6, 3);
    Eigen::MatrixXd R = rng.gaussian_matrix(6, 4);
    auto [value, grad] = bm_objective(R, X);
    (void)value;
    const double h = 1e-6;
    Eigen::MatrixXd fd(R.rows(), R.cols());
    for (Eigen::Index i = 0; i < R.rows(); ++i)
        for (Eigen::Index j = 0; j < R.cols(); ++j) {
            Eigen::MatrixXd Rp = R, Rm = R;
            Rp(i, j) += h;
            Rm(i, j) -= h;
            fd(i, j) =
                (bm_objective(Rp, X).first - bm_objective(Rm, X).first) / (2.0 * h);
        }
    CHECK((fd - grad).norm() <= 1e-5 * std::max(1.0, grad.norm()));
}

TEST_CASE("relaxation value on structured instances") {
    RandomSource rng(44);
    CgParams params;

    // X = I_n: every unit-row factor is optimal with value n
    Eigen::MatrixXd I3 = Eigen::MatrixXd::Identity(3, 3);
    auto [factor, alpha] = solve_sdp_bm(I3, params, rng.substream("id"));
    CHECK(alpha == doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));
    for (Eigen::Index i = 0; i < factor.R.rows(); ++i)
        CHECK(factor.R.row(i).norm() == doctest::Approx(1.0).epsilon(1e-12));

    // X = column of ones, n = 2: aligned rows give || X' R ||_F = 2
    Eigen::MatrixXd ones(2, 1);
    ones << 1, 1;
    auto [factor2, alpha2] = solve_sdp_bm(ones, params, rng.substream("ones"));
    CHECK(alpha2 == doctest::Approx(2.0).epsilon(1e-7));
    (void)factor2;
}

TEST_CASE("relaxation lands in the oracle sandwich") {
    RandomSource rng(45);
    CgParams params;
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::MatrixXd X = rng.gaussian_matrix(7, 3);
        auto [factor, alpha] = solve_sdp_bm(X, params, rng.substream(trial));
        (void)factor;
        double lower = norm_inf_to_1_bruteforce(X * X.transpose());
        CHECK(alpha * alpha >= (1.0 - 1e-6) * lower);
        CHECK(alpha * alpha <= (1.0 + 1e-6) * (M_PI / 2.0) * lower);
    }
}

TEST_CASE("rounding a rank-one factorization recovers the direction") {
    RandomSource rng(46);
    Eigen::VectorXd u = rng.gaussian_vector(6);
    Eigen::VectorXd w = rng.gaussian_vector(3).normalized();
    Eigen::MatrixXd X = u * w.transpose();
    CgParams params;
    MdrResult res = mdr_top_component(X, 8, params, rng.substream("solve"));
    CHECK(std::abs(res.v_star.dot(w)) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(res.ratio == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("rounded value never falls below the sign-vector bound") {
    RandomSource rng(47);
    Eigen::MatrixXd X = rng.gaussian_matrix(8, 4);
    CgParams params;
    auto [factor, alpha] = solve_sdp_bm(X, params, rng.substream("bm"));
    (void)alpha;
    RandomSource trial_rng = rng.substream("trials");
    for (int k = 0; k < 50; ++k) {
        RoundingTrial trial = round_once(factor.R, X, trial_rng);
        CHECK(trial.value >= (X.transpose() * trial.y).norm() - 1e-10);
        CHECK(trial.value ==
              doctest::Approx(l1_of_projection(X, trial.v)).epsilon(1e-12));
        CHECK(trial.v.norm() == doctest::Approx(1.0).epsilon(1e-12));
        for (Eigen::Index i = 0; i < trial.y.size(); ++i)
            CHECK(std::abs(trial.y(i)) == 1.0);
    }
}

TEST_CASE("top component on a strongly anisotropic instance") {
    // X = diag(10, 1): both (10, +-1)/sqrt(101) reach the optimal l1 value
    // sqrt(101), so only the componentwise magnitudes are determined
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(2, 2);
    X(0, 0) = 10.0;
    X(1, 1) = 1.0;
    RandomSource rng(48);
    MdrResult res = mdr_top_component(X, 16, CgParams{}, rng);
    double value = l1_of_projection(X, res.v_star);
    CHECK(value == doctest::Approx(std::sqrt(101.0)).epsilon(1e-9));
    CHECK(std::abs(res.v_star(0)) == doctest::Approx(10.0 / std::sqrt(101.0)).epsilon(1e-9));
    CHECK(std::abs(res.v_star(1)) == doctest::Approx(1.0 / std::sqrt(101.0)).epsilon(1e-9));
}

TEST_CASE("identity data needs one trial for a perfect ratio") {
    Eigen::MatrixXd X = Eigen::MatrixXd::Identity(2, 2);
    RandomSource rng(49);
    MdrResult res = mdr_top_component(X, 1, CgParams{}, rng);
    CHECK(res.ratio == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(res.alpha_star == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("reported value is the max over the trial log") {
    RandomSource rng(50);
    Eigen::MatrixXd X = rng.gaussian_matrix(9, 4);
    MdrResult res = mdr_top_component(X, 20, CgParams{}, rng);
    REQUIRE(res.trial_values.size() == 20);
    double best = *std::max_element(res.trial_values.begin(), res.trial_values.end());
    CHECK(l1_of_projection(X, res.v_star) == doctest::Approx(best).epsilon(1e-12));
    CHECK(res.ratio == doctest::Approx(best / res.alpha_star).epsilon(1e-12));
}

TEST_CASE("pursuit components are orthonormal and dimension-checked") {
    RandomSource rng(51);
    Eigen::MatrixXd X = rng.gaussian_matrix(10, 4);
    ComponentSet set = mdr_components(X, 3, 8, CgParams{}, rng);
    REQUIRE(set.V.cols() == 3);
    CHECK((set.V.transpose() * set.V - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-8);
    CHECK_THROWS_AS(mdr_components(X, 5, 8, CgParams{}, rng), InvalidArgumentError);
    CHECK_THROWS_AS(mdr_components(X, 0, 8, CgParams{}, rng), InvalidArgumentError);
}

TEST_CASE("pursuit keeps per-step diagnostics") {
    RandomSource rng(52);
    Eigen::MatrixXd X = rng.gaussian_matrix(12, 5);
    MdrPursuit pursuit = mdr_pursuit(X, 3, 10, CgParams{}, rng);
    REQUIRE(pursuit.ratios.size() == 3);
    REQUIRE(pursuit.alpha_stars.size() == 3);
    for (double r : pursuit.ratios) CHECK(r > 0.0);
    for (double a : pursuit.alpha_stars) CHECK(a > 0.0);
}

TEST_CASE("same seed, same output; rotated data, rotated output") {
    RandomSource rng(53);
    Eigen::MatrixXd X = rng.gaussian_matrix(8, 4);

    MdrResult a = mdr_top_component(X, 10, CgParams{}, RandomSource(7));
    MdrResult b = mdr_top_component(X, 10, CgParams{}, RandomSource(7));
    CHECK((a.v_star - b.v_star).norm() == 0.0);
    CHECK(a.alpha_star == b.alpha_star);

    // right-rotating the data only rotates the recovered direction
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(rng.gaussian_matrix(4, 4));
    Eigen::MatrixXd Q = qr.householderQ();
    MdrResult c = mdr_top_component(X * Q, 10, CgParams{}, RandomSource(7));
    CHECK((c.v_star - Q.transpose() * a.v_star).norm() < 1e-6);
    CHECK(c.alpha_star == doctest::Approx(a.alpha_star).epsilon(1e-9));
}

TEST_CASE("degenerate inputs are rejected") {
    RandomSource rng(54);
    CHECK_THROWS_AS(solve_sdp_bm(Eigen::MatrixXd::Ones(1, 3), CgParams{}, rng),
                    InvalidArgumentError);
    Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(4, 3);
    CHECK_THROWS_AS(mdr_top_component(Z, 4, CgParams{}, rng), Error);
}
