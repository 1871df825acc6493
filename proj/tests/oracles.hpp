#ifndef MRISEG_TESTS_ORACLES_HPP
#define MRISEG_TESTS_ORACLES_HPP

// Independent reference implementations used to cross-check the library.
// Everything here is deliberately written as plain loops against the
// definitions, not in terms of the code under test.

#include <cstdint>
#include <span>
#include <vector>

#include "mriseg/fcm.hpp"
#include "mriseg/image.hpp"
#include "mriseg/preprocess.hpp"

namespace oracles {

/// Direct 2-D convolution with edge replication.
mriseg::GrayImage direct_convolve(const mriseg::GrayImage& img, const mriseg::Kernel2d& kernel);

/// Plain global histogram equalization over the given bin count, anchored
/// at the first occupied bin; a constant image is returned unchanged.
mriseg::GrayImage global_equalization(const mriseg::GrayImage& img, int bins);

/// J = sum_i sum_j r_ij ||x_i - mu_j||^2 as a literal double loop.
double kmeans_objective_brute(std::span<const double> pixels, std::span<const int> labels,
                              std::span<const double> centroids);

/// J_m = sum_i sum_j u_ij^m ||x_i - mu_j||^2 as a literal double loop.
double fcm_objective_brute(std::span<const double> pixels, const mriseg::MembershipMatrix& u,
                           std::span<const double> centroids, double m);

/// Best two-cluster objective over every nonempty bipartition (exhaustive;
/// pixels.size() must stay small).
double optimal_two_partition_objective(std::span<const double> pixels);

/// Value of the pixel farthest from the given point (first such pixel in
/// scan order on ties).
double farthest_pixel_value(std::span<const double> pixels, double from);

/// True pixels with no true 8-neighbor, i.e. connected components of size 1.
int count_isolated_pixels(const mriseg::BinaryMask& mask);

/// Pixels whose center satisfies the ellipse interior inequality.
std::size_t ellipse_interior_count(int width, int height, double cx, double cy, double a,
                                   double b);

/// Deterministic random helpers for property tests.
mriseg::GrayImage random_image(int width, int height, std::uint64_t seed);
mriseg::BinaryMask random_mask(int width, int height, std::uint64_t seed);
mriseg::MembershipMatrix random_row_stochastic(std::size_t n, std::size_t c, std::uint64_t seed);

}  // namespace oracles

#endif
