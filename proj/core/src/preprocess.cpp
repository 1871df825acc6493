#include "mriseg/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mriseg {

namespace {

void validate(const GaussianParams& p) {
    if (!(p.sigma > 0.0)) {
        throw std::invalid_argument("GaussianParams: sigma must be positive");
    }
    if (p.radius < 1) {
        throw std::invalid_argument("GaussianParams: radius must be at least 1");
    }
}

std::vector<double> gaussian_weights_1d(const GaussianParams& p) {
    std::vector<double> w(static_cast<std::size_t>(2 * p.radius + 1));
    double total = 0.0;
    for (int t = -p.radius; t <= p.radius; ++t) {
        const double g = std::exp(-(static_cast<double>(t) * t) / (2.0 * p.sigma * p.sigma));
        w[static_cast<std::size_t>(t + p.radius)] = g;
        total += g;
    }
    for (double& v : w) v /= total;
    return w;
}

int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

}  // namespace

GaussianParams GaussianParams::with_sigma(double sigma) {
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("GaussianParams: sigma must be positive");
    }
    return GaussianParams{sigma, std::max(1, static_cast<int>(std::ceil(3.0 * sigma)))};
}

double gaussian(double x, double y, double sigma) {
    const double s2 = sigma * sigma;
    return std::exp(-(x * x + y * y) / (2.0 * s2)) / (2.0 * std::numbers::pi * s2);
}

Kernel2d gaussian_kernel(const GaussianParams& params) {
    validate(params);
    const int n = 2 * params.radius + 1;
    Kernel2d kernel{params.radius, std::vector<double>(static_cast<std::size_t>(n) * n)};
    double total = 0.0;
    for (int dy = -params.radius; dy <= params.radius; ++dy) {
        for (int dx = -params.radius; dx <= params.radius; ++dx) {
            const double g = gaussian(dx, dy, params.sigma);
            kernel.weights[static_cast<std::size_t>(dy + params.radius) * n +
                           (dx + params.radius)] = g;
            total += g;
        }
    }
    for (double& w : kernel.weights) w /= total;
    return kernel;
}

GrayImage gaussian_filter(const GrayImage& img, const GaussianParams& params) {
    validate(params);
    const int w = img.width();
    const int h = img.height();
    const std::vector<double> weights = gaussian_weights_1d(params);
    const int r = params.radius;

    // Separable passes with edge replication; identical to convolving with
    // the product kernel because row and column clamping are independent.
    std::vector<double> horiz(img.size());
    for (int row = 0; row < h; ++row) {
        for (int col = 0; col < w; ++col) {
            double acc = 0.0;
            for (int t = -r; t <= r; ++t) {
                acc += weights[static_cast<std::size_t>(t + r)] *
                       img.at(row, clamp_index(col + t, w));
            }
            horiz[static_cast<std::size_t>(row) * w + col] = acc;
        }
    }
    std::vector<double> out(img.size());
    for (int row = 0; row < h; ++row) {
        for (int col = 0; col < w; ++col) {
            double acc = 0.0;
            for (int t = -r; t <= r; ++t) {
                acc += weights[static_cast<std::size_t>(t + r)] *
                       horiz[static_cast<std::size_t>(clamp_index(row + t, h)) * w + col];
            }
            out[static_cast<std::size_t>(row) * w + col] = std::clamp(acc, 0.0, 1.0);
        }
    }
    return GrayImage(w, h, std::move(out));
}

namespace {

struct TileMap {
    bool identity = false;        // tile had no contrast
    std::vector<double> mapping;  // per-bin equalized value when not identity

    double apply(double value, int bin) const { return identity ? value : mapping[bin]; }
};

int value_bin(double v, int bins) {
    const int b = static_cast<int>(v * bins);
    return std::clamp(b, 0, bins - 1);
}

TileMap build_tile_map(const GrayImage& img, int x0, int x1, int y0, int y1,
                       const ClaheParams& p) {
    const std::size_t tile_pixels =
        static_cast<std::size_t>(x1 - x0) * static_cast<std::size_t>(y1 - y0);
    std::vector<double> hist(static_cast<std::size_t>(p.bins), 0.0);
    double lo = 1.0, hi = 0.0;
    for (int row = y0; row < y1; ++row) {
        for (int col = x0; col < x1; ++col) {
            const double v = img.at(row, col);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            hist[static_cast<std::size_t>(value_bin(v, p.bins))] += 1.0;
        }
    }
    if (lo == hi) {
        return TileMap{true, {}};
    }

    // Clip at clip_limit * (tile_pixels / bins) and redistribute the excess
    // uniformly; total mass is preserved.
    const double clip = p.clip_limit * static_cast<double>(tile_pixels) / p.bins;
    double excess = 0.0;
    for (double& c : hist) {
        if (c > clip) {
            excess += c - clip;
            c = clip;
        }
    }
    const double share = excess / p.bins;
    for (double& c : hist) c += share;

    // Equalization map anchored at the first occupied bin so the minimum
    // value maps to 0 and the maximum to 1.
    TileMap map;
    map.mapping.resize(static_cast<std::size_t>(p.bins));
    double cum = 0.0;
    double cum_min = -1.0;
    const double total = static_cast<double>(tile_pixels);
    for (int b = 0; b < p.bins; ++b) {
        cum += hist[static_cast<std::size_t>(b)];
        if (cum_min < 0.0 && cum > 0.0) cum_min = cum;
        map.mapping[static_cast<std::size_t>(b)] = cum;
    }
    const double denom = total - cum_min;
    if (!(denom > 0.0)) {
        return TileMap{true, {}};
    }
    for (double& m : map.mapping) {
        m = std::clamp((m - cum_min) / denom, 0.0, 1.0);
    }
    return map;
}

}  // namespace

GrayImage clahe(const GrayImage& img, const ClaheParams& p) {
    if (p.tiles_x < 1 || p.tiles_y < 1) {
        throw std::invalid_argument("ClaheParams: tile counts must be at least 1");
    }
    if (p.clip_limit < 1.0) {
        throw std::invalid_argument("ClaheParams: clip_limit must be at least 1.0");
    }
    if (p.bins < 2) {
        throw std::invalid_argument("ClaheParams: need at least 2 bins");
    }
    if (img.width() < p.tiles_x || img.height() < p.tiles_y) {
        throw std::invalid_argument("ClaheParams: tile grid " + std::to_string(p.tiles_x) + "x" +
                                    std::to_string(p.tiles_y) + " exceeds image " +
                                    std::to_string(img.width()) + "x" +
                                    std::to_string(img.height()));
    }

    const int w = img.width();
    const int h = img.height();
    auto tile_start_x = [&](int t) { return t * w / p.tiles_x; };
    auto tile_start_y = [&](int t) { return t * h / p.tiles_y; };

    std::vector<TileMap> maps;
    maps.reserve(static_cast<std::size_t>(p.tiles_x) * p.tiles_y);
    std::vector<double> centers_x(static_cast<std::size_t>(p.tiles_x));
    std::vector<double> centers_y(static_cast<std::size_t>(p.tiles_y));
    for (int ty = 0; ty < p.tiles_y; ++ty) {
        const int y0 = tile_start_y(ty), y1 = tile_start_y(ty + 1);
        centers_y[static_cast<std::size_t>(ty)] = (y0 + y1 - 1) / 2.0;
        for (int tx = 0; tx < p.tiles_x; ++tx) {
            const int x0 = tile_start_x(tx), x1 = tile_start_x(tx + 1);
            centers_x[static_cast<std::size_t>(tx)] = (x0 + x1 - 1) / 2.0;
            maps.push_back(build_tile_map(img, x0, x1, y0, y1, p));
        }
    }

    // Bracketing tile indices and interpolation weight along one axis.
    auto locate = [](const std::vector<double>& centers, int coord, int& a, int& b, double& t) {
        const double x = static_cast<double>(coord);
        if (x <= centers.front()) {
            a = b = 0;
            t = 0.0;
            return;
        }
        if (x >= centers.back()) {
            a = b = static_cast<int>(centers.size()) - 1;
            t = 0.0;
            return;
        }
        int i = 0;
        while (centers[static_cast<std::size_t>(i + 1)] < x) ++i;
        a = i;
        b = i + 1;
        t = (x - centers[static_cast<std::size_t>(a)]) /
            (centers[static_cast<std::size_t>(b)] - centers[static_cast<std::size_t>(a)]);
    };

    std::vector<double> out(img.size());
    for (int row = 0; row < h; ++row) {
        int ty0, ty1;
        double wy;
        locate(centers_y, row, ty0, ty1, wy);
        for (int col = 0; col < w; ++col) {
            int tx0, tx1;
            double wx;
            locate(centers_x, col, tx0, tx1, wx);
            const double v = img.at(row, col);
            const int bin = value_bin(v, p.bins);
            const auto& m00 = maps[static_cast<std::size_t>(ty0) * p.tiles_x + tx0];
            const auto& m01 = maps[static_cast<std::size_t>(ty0) * p.tiles_x + tx1];
            const auto& m10 = maps[static_cast<std::size_t>(ty1) * p.tiles_x + tx0];
            const auto& m11 = maps[static_cast<std::size_t>(ty1) * p.tiles_x + tx1];
            const double f00 = m00.apply(v, bin);
            const double f01 = m01.apply(v, bin);
            const double f10 = m10.apply(v, bin);
            const double f11 = m11.apply(v, bin);
            double value;
            if (f00 == f01 && f00 == f10 && f00 == f11) {
                value = f00;  // agreement is exact, no blending error
            } else {
                value = (1.0 - wy) * ((1.0 - wx) * f00 + wx * f01) +
                        wy * ((1.0 - wx) * f10 + wx * f11);
            }
            out[static_cast<std::size_t>(row) * w + col] = std::clamp(value, 0.0, 1.0);
        }
    }
    return GrayImage(w, h, std::move(out));
}

}  // namespace mriseg
