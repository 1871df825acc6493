#ifndef MRISEG_KMEANS_HPP
#define MRISEG_KMEANS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mriseg/cluster_model.hpp"
#include "mriseg/image.hpp"

namespace mriseg {

enum class KMeansInit {
    RandomPixels,  // k distinct pixel values drawn with the seeded RNG
    PlusPlus,      // distance-squared-weighted seeding
};

struct KMeansConfig {
    std::size_t k = 3;
    int max_iter = 100;
    double tol = 1e-5;  // convergence threshold on max centroid shift
    std::uint64_t seed = 0;
    KMeansInit init = KMeansInit::RandomPixels;
    int restarts = 1;  // independent runs, best final objective kept
};

/// Image-independent invariant checks; k <= pixel count is verified at run
/// time against the actual image.
void validate_params(const KMeansConfig& config);

/// Snapshot passed to the observer after each assign/update round.
struct KMeansIteration {
    int restart = 0;
    int iteration = 0;
    std::span<const double> centroids;
    double objective = 0.0;
};

using KMeansObserver = std::function<void(const KMeansIteration&)>;

struct KMeansResult {
    ClusterModel model;
    LabelMap labels;
};

/// Initial centroids for one run; deterministic given the seed.
std::vector<double> kmeans_init(const GrayImage& img, const KMeansConfig& config);

/// Nearest-centroid hard assignment; ties go to the lowest index.
LabelMap kmeans_assign(const GrayImage& img, std::span<const double> centroids);

/// Per-cluster mean intensities. An empty cluster is reseeded to the pixel
/// farthest from its previous centroid, which is why the previous centroids
/// are required.
std::vector<double> kmeans_update(const GrayImage& img, const LabelMap& labels,
                                  std::span<const double> previous);

/// Sum of squared distances from each pixel to its assigned centroid.
double kmeans_objective(const GrayImage& img, const LabelMap& labels,
                        std::span<const double> centroids);

/// Lloyd iteration to convergence; with restarts > 1, the run with the
/// lowest final objective wins.
KMeansResult kmeans_run(const GrayImage& img, const KMeansConfig& config,
                        const KMeansObserver& observer = {});

}  // namespace mriseg

#endif
