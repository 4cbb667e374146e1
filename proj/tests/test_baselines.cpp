#include "rpca/baselines.hpp"
#include "rpca/errors.hpp"
#include "rpca/linalg.hpp"
#include "rpca/rng.hpp"

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

using namespace rpca;

namespace {

Eigen::MatrixXd random_orthogonal(Eigen::Index p, RandomSource& rng) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(rng.gaussian_matrix(p, p));
    return qr.householderQ();
}

} // namespace

TEST_CASE("pca on a diagonal matrix picks the dominant axis") {
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(2, 2);
    X(0, 0) = 3.0;
    X(1, 1) = 1.0;
    ComponentSet set = pca_components(X, 1);
    CHECK(set.V(0, 0) == doctest::Approx(1.0).epsilon(1e-12)); // sign convention
    CHECK(std::abs(set.V(1, 0)) < 1e-12);
    CHECK(set.method_tag == "pca");
}

TEST_CASE("pca rejects impossible component counts") {
    RandomSource rng(81);
    Eigen::VectorXd u = rng.gaussian_vector(6);
    Eigen::VectorXd w = rng.gaussian_vector(3).normalized();
    Eigen::MatrixXd X = u * w.transpose(); // rank 1
    CHECK_THROWS_AS(pca_components(X, 2), RankDeficientError);
}

TEST_CASE("spherical pca equals pca when rows are already unit") {
    RandomSource rng(82);
    Eigen::MatrixXd X = rng.gaussian_matrix(15, 4);
    for (Eigen::Index i = 0; i < X.rows(); ++i) X.row(i).normalize();
    ComponentSet sph = sph_components(X, 2);
    ComponentSet pca = pca_components(X, 2);
    CHECK((sph.V - pca.V).norm() < 1e-10);
}

TEST_CASE("spherical pca ignores row scaling") {
    RandomSource rng(83);
    Eigen::MatrixXd X = rng.gaussian_matrix(15, 4);
    Eigen::VectorXd scales(15);
    for (Eigen::Index i = 0; i < 15; ++i) scales(i) = 0.1 + 10.0 * rng.uniform();
    ComponentSet a = sph_components(X, 2);
    ComponentSet b = sph_components(scales.asDiagonal() * X, 2);
    CHECK((a.V - b.V).norm() < 1e-10);
}

TEST_CASE("spherical pca drops zero rows instead of failing") {
    RandomSource rng(84);
    Eigen::MatrixXd X = rng.gaussian_matrix(10, 3);
    Eigen::MatrixXd padded(11, 3);
    padded.topRows(10) = X;
    padded.row(10).setZero();
    ComponentSet a = sph_components(X, 2);
    ComponentSet b = sph_components(padded, 2);
    CHECK((a.V - b.V).norm() < 1e-12);
    CHECK_THROWS_AS(sph_components(Eigen::MatrixXd::Zero(4, 3), 1), InvalidInputError);
}

TEST_CASE("entrywise shrinkage") {
    Eigen::MatrixXd A(2, 2);
    A << 3.0, -0.5, 1.0, -2.0;
    Eigen::MatrixXd S = shrink_entries(A, 1.0);
    CHECK(S(0, 0) == doctest::Approx(2.0));
    CHECK(S(0, 1) == doctest::Approx(0.0));
    CHECK(S(1, 0) == doctest::Approx(0.0));
    CHECK(S(1, 1) == doctest::Approx(-1.0));
    CHECK((shrink_entries(A, 0.0) - A).norm() == 0.0);
}

TEST_CASE("entrywise shrinkage is the l1 proximal map") {
    RandomSource rng(85);
    Eigen::MatrixXd A = rng.gaussian_matrix(3, 2);
    double nu = 0.7;
    Eigen::MatrixXd S = shrink_entries(A, nu);
    double obj = nu * S.cwiseAbs().sum() + 0.5 * (S - A).squaredNorm();
    for (int c = 0; c < 200; ++c) {
        Eigen::MatrixXd Z = S + 0.5 * rng.uniform() * rng.gaussian_matrix(3, 2);
        CHECK(obj <= nu * Z.cwiseAbs().sum() + 0.5 * (Z - A).squaredNorm() + 1e-10);
    }
}

TEST_CASE("large lambda leaves nothing in the sparse part") {
    RandomSource rng(86);
    Eigen::MatrixXd X = rng.gaussian_matrix(12, 5);
    Nl1Result res = nl1_solve(X, 1.0);
    CHECK(res.S.norm() <= 1e-6 * X.norm());
    CHECK((X - res.L - res.S).norm() <= 1e-7 * X.norm());
}

TEST_CASE("small lambda leaves nothing in the low-rank part") {
    RandomSource rng(87);
    Eigen::MatrixXd X = rng.gaussian_matrix(12, 5);
    double lambda = 0.5 / std::sqrt(12.0 * 5.0);
    Nl1Result res = nl1_solve(X, lambda);
    CHECK(res.L.norm() <= 1e-6 * X.norm());
}

TEST_CASE("nl1 separates a planted low-rank plus sparse mixture") {
    RandomSource rng(88);
    Eigen::MatrixXd L0 = rng.gaussian_matrix(50, 1) * rng.gaussian_matrix(1, 20);
    Eigen::MatrixXd S0 = Eigen::MatrixXd::Zero(50, 20);
    for (int k = 0; k < 15; ++k)
        S0(rng.uniform_index(50), rng.uniform_index(20)) = 16.0 * (rng.uniform() - 0.5);
    Eigen::MatrixXd X = L0 + S0;
    Nl1Result res = nl1_solve(X, 1.0 / std::sqrt(50.0));
    CHECK((res.L - L0).norm() <= 5e-2 * L0.norm());
}

TEST_CASE("nl1 components come from the low-rank factor") {
    RandomSource rng(89);
    Eigen::MatrixXd X = rng.gaussian_matrix(12, 5);
    ComponentSet set = nl1_components(X, 1.0, 2);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinV);
    for (int t = 0; t < 2; ++t)
        CHECK(std::abs(set.V.col(t).dot(svd.matrixV().col(t))) ==
              doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(
        nl1_components(X, 0.5 / std::sqrt(60.0), 1), // low-rank part vanishes
        RankDeficientError);
}

TEST_CASE("nl1 duality bound certifies converged solves") {
    RandomSource rng(90);
    Eigen::MatrixXd X = rng.gaussian_matrix(15, 8);
    double lambda = 1.0 / std::sqrt(15.0);
    Nl1Result res = nl1_solve(X, lambda);
    DualityGap gap = nl1_duality_gap(X, res.L, res.S, lambda);
    CHECK(gap.dual <= gap.primal + 1e-10);
    CHECK(gap.gap >= -1e-12);
    CHECK(gap.gap <= 1e-4);
}

TEST_CASE("nl1 is not equivariant under right rotation") {
    // planted entrywise-sparse corruption is destroyed by a rotation, so the
    // recovered low-rank parts genuinely differ
    RandomSource rng(91);
    Eigen::MatrixXd L0 = rng.gaussian_matrix(30, 1) * rng.gaussian_matrix(1, 8);
    Eigen::MatrixXd X = L0;
    for (int k = 0; k < 12; ++k)
        X(rng.uniform_index(30), rng.uniform_index(8)) += 20.0 * (rng.uniform() - 0.5);
    Eigen::MatrixXd Q = random_orthogonal(8, rng);
    double lambda = 1.0 / std::sqrt(30.0);
    Nl1Result base = nl1_solve(X, lambda);
    Nl1Result rotated = nl1_solve(X * Q.transpose(), lambda);
    double deviation = (rotated.L - base.L * Q.transpose()).norm();
    CHECK(deviation > 1e-3 * X.norm());
}
