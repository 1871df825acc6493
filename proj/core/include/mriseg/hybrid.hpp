#ifndef MRISEG_HYBRID_HPP
#define MRISEG_HYBRID_HPP

#include "mriseg/fcm.hpp"
#include "mriseg/kmeans.hpp"

namespace mriseg {

/// Two-stage scheme: K-Means supplies initial centroids, then FCM refines
/// with neighborhood-smoothed memberships.
struct HybridConfig {
    KMeansConfig kmeans;
    FcmConfig fcm;
    double spatial_weight = 0.3;  // alpha in [0,1]; 0 disables regularization
    int window = 1;               // neighborhood radius in pixels
    bool regularize_each_iteration = true;  // false: one pass after convergence
};

void validate_params(const HybridConfig& config);

/// Blends each membership with its (2*window+1)^2 neighborhood mean
/// (edge-replicated) and renormalizes rows. alpha = 0 returns the input
/// unchanged.
MembershipMatrix spatial_regularize(const MembershipMatrix& memberships, int width, int height,
                                    double alpha, int window);

struct HybridResult {
    ClusterModel model;
    MembershipMatrix memberships;
    LabelMap labels;
};

HybridResult hybrid_run(const GrayImage& img, const HybridConfig& config,
                        const FcmObserver& observer = {});

}  // namespace mriseg

#endif
