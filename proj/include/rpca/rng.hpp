#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace rpca {

// Deterministic random source. A single user seed fans out into named
// substreams so that concurrent consumers (solver restarts, rounding trials,
// experiment methods) draw identical numbers regardless of schedule.
//
// The engine is std::mt19937_64 (fully specified by the standard); gaussians
// use an explicit Box-Muller transform rather than std::normal_distribution,
// whose algorithm is implementation-defined and would break cross-platform
// reproducibility.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed)
        : seed_(seed), engine_(splitmix64(seed)) {}

    std::uint64_t seed() const { return seed_; }

    // child stream keyed by a label; independent of draw order on the parent
    RandomSource substream(std::string_view label) const {
        return RandomSource(splitmix64(seed_ ^ fnv1a(label)));
    }

    RandomSource substream(std::uint64_t index) const {
        return RandomSource(splitmix64(seed_ ^ splitmix64(index + 0x9e3779b97f4a7c15ULL)));
    }

    std::uint64_t next_u64() { return engine_(); }

    // uniform on [0, 1)
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // standard normal via Box-Muller; second variate of each pair is cached
    double gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        // u1 in (0, 1] so the log is finite
        double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
        double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * M_PI * u2;
        cached_ = r * std::sin(theta);
        have_cached_ = true;
        return r * std::cos(theta);
    }

    Eigen::VectorXd gaussian_vector(Eigen::Index n) {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = gaussian();
        return v;
    }

    // row-major fill so a matrix equals its rows drawn one at a time
    Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
        Eigen::MatrixXd m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = gaussian();
        return m;
    }

    // uniform integer in [0, n)
    std::uint64_t uniform_index(std::uint64_t n) {
        // rejection sampling to avoid modulo bias
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    static std::uint64_t fnv1a(std::string_view s) {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (char c : s) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ULL;
        }
        return h;
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

} // namespace rpca
