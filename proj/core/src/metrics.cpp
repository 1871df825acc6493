#include "mriseg/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mriseg/kmeans.hpp"

namespace mriseg {

double dice(const BinaryMask& prediction, const BinaryMask& truth) {
    if (prediction.width() != truth.width() || prediction.height() != truth.height()) {
        throw std::invalid_argument("dice: mask dimensions differ");
    }
    std::size_t intersection = 0;
    const auto a = prediction.raw();
    const auto b = truth.raw();
    for (std::size_t i = 0; i < a.size(); ++i) {
        intersection += (a[i] & b[i]);
    }
    const std::size_t total = prediction.count() + truth.count();
    if (total == 0) {
        return 1.0;  // nothing predicted, nothing present
    }
    return 2.0 * static_cast<double>(intersection) / static_cast<double>(total);
}

std::pair<std::size_t, double> match_tumor_cluster(const LabelMap& labels,
                                                   const BinaryMask& truth) {
    if (labels.width() != truth.width() || labels.height() != truth.height()) {
        throw std::invalid_argument("match_tumor_cluster: dimensions differ");
    }
    std::size_t best_cluster = 0;
    double best_dice = -1.0;
    for (std::size_t j = 0; j < labels.num_clusters(); ++j) {
        const double d = dice(mask_from_labels(labels, j), truth);
        if (d > best_dice) {
            best_dice = d;
            best_cluster = j;
        }
    }
    return {best_cluster, best_dice};
}

double compactness(const GrayImage& img, const LabelMap& labels,
                   std::span<const double> centroids) {
    return kmeans_objective(img, labels, centroids) / static_cast<double>(img.size());
}

double separation(std::span<const double> centroids) {
    if (centroids.size() < 2) {
        throw std::invalid_argument("separation: need at least two centroids");
    }
    double best = std::numeric_limits<double>::max();
    for (std::size_t i = 0; i < centroids.size(); ++i) {
        for (std::size_t j = i + 1; j < centroids.size(); ++j) {
            best = std::min(best, std::abs(centroids[i] - centroids[j]));
        }
    }
    return best;
}

}  // namespace mriseg
