#ifndef MRISEG_FCM_HPP
#define MRISEG_FCM_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mriseg/cluster_model.hpp"
#include "mriseg/image.hpp"

namespace mriseg {

enum class FcmInit {
    RandomMemberships,   // seeded random row-stochastic matrix
    CentroidsFromKMeans, // seed FCM with a converged K-Means model
    GivenCentroids,      // caller supplies initial_centroids
};

struct FcmConfig {
    std::size_t c = 4;
    double m = 2.0;  // fuzzifier, strictly > 1
    int max_iter = 100;
    double tol = 1e-5;  // convergence threshold on max membership change
    std::uint64_t seed = 0;
    FcmInit init = FcmInit::RandomMemberships;
    std::vector<double> initial_centroids;  // used by GivenCentroids
};

void validate_params(const FcmConfig& config);

/// N x c row-stochastic matrix of fuzzy memberships.
class MembershipMatrix {
public:
    MembershipMatrix(std::size_t n, std::size_t c, std::vector<double> values);

    static MembershipMatrix uniform(std::size_t n, std::size_t c);

    std::size_t rows() const { return n_; }
    std::size_t clusters() const { return c_; }

    double at(std::size_t i, std::size_t j) const { return values_[i * c_ + j]; }
    double& at(std::size_t i, std::size_t j) { return values_[i * c_ + j]; }

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    /// Largest entry-wise |difference| against another matrix of equal shape.
    double max_abs_diff(const MembershipMatrix& other) const;

    /// Every row sums to 1 within tol and every entry lies in [0,1].
    bool is_row_stochastic(double tol = 1e-9) const;

    bool operator==(const MembershipMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::size_t c_ = 0;
    std::vector<double> values_;
};

/// Membership update for fixed centroids. A pixel coinciding with one or
/// more centroids splits membership 1 equally among the coincident clusters.
MembershipMatrix fcm_memberships(const GrayImage& img, std::span<const double> centroids,
                                 double m);

/// Centroid update: membership-weighted means with weights u^m.
std::vector<double> fcm_centroids(const GrayImage& img, const MembershipMatrix& memberships,
                                  double m);

/// J_m = sum_i sum_j u_ij^m ||x_i - mu_j||^2.
double fcm_objective(const GrayImage& img, const MembershipMatrix& memberships,
                     std::span<const double> centroids, double m);

/// Snapshot passed to the observer after each alternation.
struct FcmIteration {
    int iteration = 0;
    const MembershipMatrix& memberships;
    std::span<const double> centroids;
    double objective = 0.0;
    double delta = 0.0;  // max membership change this iteration
};

using FcmObserver = std::function<void(const FcmIteration&)>;

struct FcmResult {
    ClusterModel model;
    MembershipMatrix memberships;
};

/// Alternates membership and centroid updates until the largest membership
/// change drops below tol or max_iter is reached.
FcmResult fcm_run(const GrayImage& img, const FcmConfig& config,
                  const FcmObserver& observer = {});

/// Per-row argmax; ties go to the lowest cluster index.
LabelMap defuzzify(const MembershipMatrix& memberships, int width, int height);

namespace detail {

/// Applied to the membership matrix after each membership update; the
/// hybrid module injects its spatial regularizer here.
using MembershipTransform = std::function<void(MembershipMatrix&)>;

FcmResult fcm_alternate(const GrayImage& img, MembershipMatrix initial, double m, double tol,
                        int max_iter, const MembershipTransform& transform,
                        const FcmObserver& observer, const ClusterParams& echo);

}  // namespace detail

}  // namespace mriseg

#endif
