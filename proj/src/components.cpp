#include "rpca/components.hpp"

using Eigen::Index;

namespace rpca {

ComponentSet make_component_set(Eigen::MatrixXd V, std::string method_tag) {
    for (Index j = 0; j < V.cols(); ++j) {
        Index argmax = 0;
        V.col(j).cwiseAbs().maxCoeff(&argmax);
        if (V(argmax, j) < 0.0) V.col(j) = -V.col(j);
    }
    ComponentSet set;
    set.T = static_cast<int>(V.cols());
    set.V = std::move(V);
    set.method_tag = std::move(method_tag);
    return set;
}

} // namespace rpca
