#include "mriseg/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mriseg/preprocess.hpp"
#include "mriseg/rng.hpp"

namespace mriseg {

namespace {

constexpr double kBrainRadiusFraction = 0.42;

void validate(const PhantomSpec& s) {
    if (s.width < 8 || s.height < 8) {
        throw std::invalid_argument("PhantomSpec: image must be at least 8x8");
    }
    const double means[3] = {s.tumor_intensity, s.tissue_intensity, s.background_intensity};
    for (double v : means) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::invalid_argument("PhantomSpec: intensities must lie in [0,1]");
        }
    }
    if (means[0] == means[1] || means[0] == means[2] || means[1] == means[2]) {
        throw std::invalid_argument("PhantomSpec: the three intensities must be pairwise distinct");
    }
    if (!(s.tumor.semi_x >= 1.0 && s.tumor.semi_y >= 1.0)) {
        throw std::invalid_argument("PhantomSpec: tumor semi-axes must be at least 1 pixel");
    }
    if (s.boundary_blur < 0.0 || s.noise_std < 0.0) {
        throw std::invalid_argument("PhantomSpec: blur and noise must be nonnegative");
    }
    // Conservative containment: center offset plus the larger semi-axis
    // must stay inside the brain disk.
    const double cx = s.width / 2.0;
    const double cy = s.height / 2.0;
    const double off = std::hypot(s.tumor.center_x - cx, s.tumor.center_y - cy);
    if (off + std::max(s.tumor.semi_x, s.tumor.semi_y) > brain_radius(s)) {
        throw std::invalid_argument("PhantomSpec: tumor ellipse does not fit in the brain region");
    }
}

}  // namespace

std::string to_string(Difficulty d) {
    switch (d) {
        case Difficulty::Sharp: return "sharp";
        case Difficulty::Blurred: return "blurred";
        case Difficulty::NoisyBlurred: return "noisy-blurred";
    }
    return "unknown";
}

Difficulty difficulty_from_string(const std::string& name) {
    if (name == "sharp") return Difficulty::Sharp;
    if (name == "blurred") return Difficulty::Blurred;
    if (name == "noisy-blurred") return Difficulty::NoisyBlurred;
    throw std::invalid_argument("unknown difficulty '" + name +
                                "' (expected sharp|blurred|noisy-blurred)");
}

double brain_radius(const PhantomSpec& spec) {
    return kBrainRadiusFraction * std::min(spec.width, spec.height);
}

Phantom generate_phantom(const PhantomSpec& spec) {
    validate(spec);
    const int w = spec.width;
    const int h = spec.height;
    const double cx = w / 2.0;
    const double cy = h / 2.0;
    const double radius = brain_radius(spec);
    const double radius2 = radius * radius;

    std::vector<double> ideal(static_cast<std::size_t>(w) * h);
    std::vector<std::uint8_t> truth(ideal.size());
    for (int row = 0; row < h; ++row) {
        for (int col = 0; col < w; ++col) {
            const std::size_t i = static_cast<std::size_t>(row) * w + col;
            const double x = col;
            const double y = row;
            if (spec.tumor.contains(x, y)) {
                ideal[i] = spec.tumor_intensity;
                truth[i] = 1;
            } else {
                const double dx = x - cx;
                const double dy = y - cy;
                ideal[i] = dx * dx + dy * dy <= radius2 ? spec.tissue_intensity
                                                        : spec.background_intensity;
            }
        }
    }

    GrayImage image(w, h, std::move(ideal));
    if (spec.boundary_blur > 0.0) {
        image = gaussian_filter(image, GaussianParams::with_sigma(spec.boundary_blur));
    }
    if (spec.noise_std > 0.0) {
        Rng rng(spec.seed);
        for (double& v : image.pixels()) {
            v = std::clamp(v + rng.normal(0.0, spec.noise_std), 0.0, 1.0);
        }
    }
    return Phantom{std::move(image), BinaryMask(w, h, std::move(truth)), spec};
}

std::vector<Phantom> phantom_suite(int count, Difficulty difficulty, std::uint64_t seed) {
    if (count < 1) {
        throw std::invalid_argument("phantom_suite: count must be at least 1");
    }
    std::vector<Phantom> suite;
    suite.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const std::uint64_t member_seed = Rng::mix(seed, static_cast<std::uint64_t>(i));
        Rng rng(member_seed);

        PhantomSpec spec;
        spec.seed = member_seed;
        const double cx = spec.width / 2.0;
        const double cy = spec.height / 2.0;
        const double reach = brain_radius(spec) / 3.0;
        spec.tumor.center_x = cx + rng.uniform(-reach, reach);
        spec.tumor.center_y = cy + rng.uniform(-reach, reach);
        spec.tumor.semi_x = rng.uniform(6.0, 12.0);
        spec.tumor.semi_y = rng.uniform(6.0, 12.0);

        switch (difficulty) {
            case Difficulty::Sharp:
                spec.boundary_blur = 0.0;
                spec.noise_std = 0.02;
                break;
            case Difficulty::Blurred:
                spec.boundary_blur = rng.uniform(1.5, 3.0);
                spec.noise_std = 0.05;
                break;
            case Difficulty::NoisyBlurred:
                spec.boundary_blur = rng.uniform(2.0, 4.0);
                spec.noise_std = 0.10;
                break;
        }
        suite.push_back(generate_phantom(spec));
    }
    return suite;
}

}  // namespace mriseg
