#ifndef MRISEG_CLUSTER_MODEL_HPP
#define MRISEG_CLUSTER_MODEL_HPP

#include <cstdint>
#include <vector>

namespace mriseg {

/// Echo of the configuration that produced a ClusterModel.
struct ClusterParams {
    std::size_t clusters = 0;
    double fuzzifier = 0.0;  // 0 for hard clustering
    std::uint64_t seed = 0;
    double tol = 0.0;
    int max_iter = 0;
};

/// Converged centroids plus run facts.
struct ClusterModel {
    std::vector<double> centroids;
    double objective = 0.0;
    int iterations = 0;
    ClusterParams params;
};

}  // namespace mriseg

#endif
