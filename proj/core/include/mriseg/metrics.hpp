#ifndef MRISEG_METRICS_HPP
#define MRISEG_METRICS_HPP

#include <cstddef>
#include <span>
#include <utility>

#include "mriseg/image.hpp"

namespace mriseg {

/// Per-run evaluation summary.
struct EvalReport {
    double dice = 0.0;
    std::size_t matched_cluster = 0;
    double compactness = 0.0;  // mean intra-cluster squared deviation
    double separation = 0.0;   // min pairwise centroid distance
    double wall_time_s = 0.0;
    int iterations = 0;
};

/// Dice similarity coefficient 2|S∩G| / (|S|+|G|); two empty masks score 1.
double dice(const BinaryMask& prediction, const BinaryMask& truth);

/// Cluster whose mask best overlaps the ground truth, with its dice;
/// ties go to the lowest index.
std::pair<std::size_t, double> match_tumor_cluster(const LabelMap& labels,
                                                   const BinaryMask& truth);

/// Mean squared distance from each pixel to its assigned centroid (J/N).
double compactness(const GrayImage& img, const LabelMap& labels,
                   std::span<const double> centroids);

/// Minimum pairwise distance between centroids; needs at least two.
double separation(std::span<const double> centroids);

}  // namespace mriseg

#endif
