#ifndef MRISEG_PREPROCESS_HPP
#define MRISEG_PREPROCESS_HPP

#include <vector>

#include "mriseg/image.hpp"

namespace mriseg {

struct GaussianParams {
    double sigma = 1.0;  // smoothing extent in pixels, > 0
    int radius = 3;      // kernel half-width, >= 1

    /// radius = ceil(3*sigma), capturing >99.7% of the kernel mass.
    static GaussianParams with_sigma(double sigma);
};

struct ClaheParams {
    int tiles_x = 8;
    int tiles_y = 8;
    double clip_limit = 2.0;  // relative clip factor, >= 1
    int bins = 256;           // histogram bins, >= 2
};

/// Square (2*radius+1)^2 kernel, row-major over offsets in [-radius, radius].
struct Kernel2d {
    int radius = 0;
    std::vector<double> weights;

    int size() const { return 2 * radius + 1; }
    double at(int dy, int dx) const {
        return weights[static_cast<std::size_t>(dy + radius) * size() + (dx + radius)];
    }
};

/// Unnormalized Gaussian G(x,y) = exp(-(x^2+y^2)/(2 sigma^2)) / (2 pi sigma^2).
double gaussian(double x, double y, double sigma);

/// Gaussian kernel of the given radius, renormalized to sum to 1.
Kernel2d gaussian_kernel(const GaussianParams& params);

/// 2-D convolution with the normalized Gaussian kernel; borders replicate
/// the edge pixel, output clamped to [0,1].
GrayImage gaussian_filter(const GrayImage& img, const GaussianParams& params);

/// Contrast-limited adaptive histogram equalization: per-tile clipped
/// equalization maps blended by bilinear interpolation of the four
/// surrounding tile mappings. A tile with no contrast maps identically,
/// so a constant image is returned unchanged.
GrayImage clahe(const GrayImage& img, const ClaheParams& params);

}  // namespace mriseg

#endif
