#pragma once

#include <Eigen/Dense>
#include <string>

namespace rpca {

struct ComponentSet {
    Eigen::MatrixXd V; // p x T, orthonormal columns
    int T = 0;
    std::string method_tag;
};

// wraps V applying the sign convention: each column is flipped so its
// largest-magnitude entry is positive (components are defined up to sign)
ComponentSet make_component_set(Eigen::MatrixXd V, std::string method_tag);

} // namespace rpca
