#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "mriseg/hybrid.hpp"
#include "mriseg/metrics.hpp"
#include "mriseg/phantom.hpp"
#include "mriseg/rng.hpp"
#include "oracles.hpp"

using namespace mriseg;

namespace {

double channel_total_variation(const MembershipMatrix& u, int width, int height, std::size_t j) {
    auto value = [&](int r, int c) {
        return u.at(static_cast<std::size_t>(r) * static_cast<std::size_t>(width) + c, j);
    };
    double tv = 0.0;
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c + 1 < width; ++c) tv += std::abs(value(r, c + 1) - value(r, c));
    }
    for (int r = 0; r + 1 < height; ++r) {
        for (int c = 0; c < width; ++c) tv += std::abs(value(r + 1, c) - value(r, c));
    }
    return tv;
}

}  // namespace

TEST_SUITE("hybrid") {

TEST_CASE("alpha 0 returns the memberships bit-identically") {
    const MembershipMatrix u = oracles::random_row_stochastic(24, 3, 5);
    CHECK(spatial_regularize(u, 6, 4, 0.0, 1) == u);
}

TEST_CASE("a spatially constant matrix is a fixed point") {
    const std::size_t n = 30;
    std::vector<double> values;
    for (std::size_t i = 0; i < n; ++i) {
        values.insert(values.end(), {0.2, 0.5, 0.3});
    }
    const MembershipMatrix u(n, 3, values);
    for (double alpha : {0.3, 1.0}) {
        const MembershipMatrix smoothed = spatial_regularize(u, 6, 5, alpha, 1);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(smoothed.at(i, 0) == doctest::Approx(0.2).epsilon(1e-12));
            CHECK(smoothed.at(i, 1) == doctest::Approx(0.5).epsilon(1e-12));
            CHECK(smoothed.at(i, 2) == doctest::Approx(0.3).epsilon(1e-12));
        }
    }
}

TEST_CASE("a single-pixel spike spreads to a ninth of its excess") {
    const int w = 5, h = 5;
    const double e = 0.2;
    std::vector<double> values;
    for (int i = 0; i < w * h; ++i) values.insert(values.end(), {0.5, 0.5});
    const std::size_t center = 2 * 5 + 2;
    values[center * 2] = 0.5 + e;
    values[center * 2 + 1] = 0.5 - e;
    const MembershipMatrix u(static_cast<std::size_t>(w * h), 2, values);

    const MembershipMatrix smoothed = spatial_regularize(u, w, h, 1.0, 1);
    CHECK(smoothed.at(center, 0) == doctest::Approx(0.5 + e / 9.0).epsilon(1e-12));
    CHECK(smoothed.at(center, 1) == doctest::Approx(0.5 - e / 9.0).epsilon(1e-12));
    // A corner far from the spike is untouched.
    CHECK(smoothed.at(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("regularization preserves row-stochasticity") {
    Rng pick(77);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const int w = 4 + static_cast<int>(pick.next_below(5));
        const int h = 4 + static_cast<int>(pick.next_below(5));
        const std::size_t c = 2 + pick.next_below(3);
        const MembershipMatrix u =
            oracles::random_row_stochastic(static_cast<std::size_t>(w * h), c, seed);
        const double alpha = 0.05 + 0.95 * (static_cast<double>(seed) / 100.0);
        const MembershipMatrix smoothed = spatial_regularize(u, w, h, alpha, 1);
        CHECK(smoothed.is_row_stochastic(1e-9));
    }
}

TEST_CASE("regularization never raises a channel's total variation") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const int w = 7, h = 6;
        const std::size_t c = 3;
        const MembershipMatrix u =
            oracles::random_row_stochastic(static_cast<std::size_t>(w * h), c, seed + 500);
        Rng rng(seed);
        const double alpha = 0.1 + 0.9 * rng.uniform();
        const int window = 1 + static_cast<int>(rng.next_below(2));
        const MembershipMatrix smoothed = spatial_regularize(u, w, h, alpha, window);
        for (std::size_t j = 0; j < c; ++j) {
            CHECK(channel_total_variation(smoothed, w, h, j) <=
                  channel_total_variation(u, w, h, j) + 1e-9);
        }
    }
}

TEST_CASE("hybrid with alpha 0 is bit-identical to kmeans-seeded fcm") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        PhantomSpec spec;
        spec.boundary_blur = 2.0;
        spec.noise_std = 0.05;
        spec.seed = seed;
        const Phantom phantom = generate_phantom(spec);

        FcmConfig fcm_cfg;
        fcm_cfg.c = 3;
        fcm_cfg.seed = seed;
        fcm_cfg.init = FcmInit::CentroidsFromKMeans;
        const FcmResult plain = fcm_run(phantom.image, fcm_cfg);

        HybridConfig hy;
        hy.kmeans.k = 3;
        hy.kmeans.seed = seed;
        hy.fcm = fcm_cfg;
        hy.spatial_weight = 0.0;
        const HybridResult hybrid = hybrid_run(phantom.image, hy);

        CHECK(hybrid.model.centroids == plain.model.centroids);
        CHECK(hybrid.model.objective == plain.model.objective);
        CHECK(hybrid.model.iterations == plain.model.iterations);
        CHECK(hybrid.memberships == plain.memberships);
        CHECK(hybrid.labels ==
              defuzzify(plain.memberships, phantom.image.width(), phantom.image.height()));
    }
}

TEST_CASE("hybrid smoothing removes isolated tumor speckles") {
    // Noise strong enough to speckle the label map, segmentation still
    // workable; both pipelines share the K-Means seeding so the only
    // difference is the spatial regularizer.
    int fcm_isolated = 0;
    int hybrid_isolated = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        PhantomSpec spec;
        spec.tumor = Ellipse{44.0 + static_cast<double>(seed % 3), 46.0, 14.0, 12.0};
        spec.boundary_blur = 1.0;
        spec.noise_std = 0.08;
        spec.seed = seed * 91 + 5;
        const Phantom phantom = generate_phantom(spec);

        FcmConfig fcm_cfg;
        fcm_cfg.c = 3;
        fcm_cfg.seed = seed;
        fcm_cfg.init = FcmInit::CentroidsFromKMeans;
        const FcmResult plain = fcm_run(phantom.image, fcm_cfg);
        const LabelMap plain_labels =
            defuzzify(plain.memberships, phantom.image.width(), phantom.image.height());
        const auto [plain_cluster, plain_dice] = match_tumor_cluster(plain_labels, phantom.truth);
        fcm_isolated +=
            oracles::count_isolated_pixels(mask_from_labels(plain_labels, plain_cluster));

        HybridConfig hy;
        hy.kmeans.k = 3;
        hy.kmeans.seed = seed;
        hy.fcm = fcm_cfg;
        hy.spatial_weight = 0.3;
        hy.window = 1;
        const HybridResult hybrid = hybrid_run(phantom.image, hy);
        const auto [cluster, d] = match_tumor_cluster(hybrid.labels, phantom.truth);
        hybrid_isolated +=
            oracles::count_isolated_pixels(mask_from_labels(hybrid.labels, cluster));
    }
    CHECK(hybrid_isolated < fcm_isolated);
}

TEST_CASE("kmeans seeding converges in no more iterations on average") {
    int seeded_total = 0;
    int random_total = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Phantom phantom = phantom_suite(1, Difficulty::Blurred, seed * 17 + 3).front();

        FcmConfig random_cfg;
        random_cfg.c = 3;
        random_cfg.seed = seed;
        random_total += fcm_run(phantom.image, random_cfg).model.iterations;

        FcmConfig seeded_cfg = random_cfg;
        seeded_cfg.init = FcmInit::CentroidsFromKMeans;
        seeded_total += fcm_run(phantom.image, seeded_cfg).model.iterations;
    }
    CHECK(seeded_total <= random_total);
}

TEST_CASE("hybrid validates its configuration") {
    const GrayImage img = oracles::random_image(6, 6, 1);
    HybridConfig cfg;
    cfg.kmeans.k = 3;
    cfg.fcm.c = 4;
    CHECK_THROWS_AS(hybrid_run(img, cfg), std::invalid_argument);
    cfg.fcm.c = 3;
    cfg.spatial_weight = 1.5;
    CHECK_THROWS_AS(hybrid_run(img, cfg), std::invalid_argument);
    cfg.spatial_weight = 0.3;
    cfg.window = 0;
    CHECK_THROWS_AS(hybrid_run(img, cfg), std::invalid_argument);
}

TEST_CASE("post-convergence regularization mode applies one smoothing pass") {
    const Phantom phantom = phantom_suite(1, Difficulty::NoisyBlurred, 9).front();
    HybridConfig each;
    each.kmeans.k = 3;
    each.kmeans.seed = 2;
    each.fcm.c = 3;
    each.fcm.seed = 2;
    each.spatial_weight = 0.3;

    HybridConfig once = each;
    once.regularize_each_iteration = false;

    const HybridResult a = hybrid_run(phantom.image, each);
    const HybridResult b = hybrid_run(phantom.image, once);
    CHECK(a.memberships.is_row_stochastic(1e-9));
    CHECK(b.memberships.is_row_stochastic(1e-9));
    // The one-pass variant matches plain fcm until the final smoothing.
    FcmConfig plain_cfg = once.fcm;
    plain_cfg.init = FcmInit::CentroidsFromKMeans;
    const FcmResult plain = fcm_run(phantom.image, plain_cfg);
    CHECK(b.model.objective == plain.model.objective);
}

}  // TEST_SUITE
