#ifndef MRISEG_PHANTOM_HPP
#define MRISEG_PHANTOM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mriseg/image.hpp"

namespace mriseg {

/// Axis-aligned ellipse in pixel coordinates.
struct Ellipse {
    double center_x = 0.0;
    double center_y = 0.0;
    double semi_x = 1.0;
    double semi_y = 1.0;

    bool contains(double x, double y) const {
        const double dx = (x - center_x) / semi_x;
        const double dy = (y - center_y) / semi_y;
        return dx * dx + dy * dy <= 1.0;
    }
};

/// Synthetic slice description: background / circular brain disk / tumor
/// ellipse painted at three distinct mean intensities, then degraded by
/// boundary blur and additive Gaussian noise.
struct PhantomSpec {
    int width = 96;
    int height = 96;
    Ellipse tumor{48.0, 48.0, 10.0, 8.0};
    double tumor_intensity = 0.85;
    double tissue_intensity = 0.45;
    double background_intensity = 0.05;
    double boundary_blur = 0.0;  // sigma_b in pixels, >= 0
    double noise_std = 0.0;      // intensity units, >= 0
    std::uint64_t seed = 0;
};

enum class Difficulty { Sharp, Blurred, NoisyBlurred };

std::string to_string(Difficulty d);
Difficulty difficulty_from_string(const std::string& name);

struct Phantom {
    GrayImage image;
    BinaryMask truth;  // tumor indicator before any degradation
    PhantomSpec spec;
};

/// Radius of the circular brain region the tumor must fit inside.
double brain_radius(const PhantomSpec& spec);

Phantom generate_phantom(const PhantomSpec& spec);

/// count phantoms with per-difficulty blur/noise ranges; each member draws
/// its own seed from the suite seed. Sharp: sigma_b 0, noise 0.02; blurred:
/// sigma_b in [1.5,3], noise 0.05; noisy-blurred: sigma_b in [2,4], noise 0.10.
std::vector<Phantom> phantom_suite(int count, Difficulty difficulty, std::uint64_t seed);

}  // namespace mriseg

#endif
