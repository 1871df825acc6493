#include <doctest.h>

#include <set>
#include <stdexcept>

#include "mriseg/bench.hpp"
#include "mriseg/kmeans.hpp"
#include "mriseg/metrics.hpp"
#include "mriseg/phantom.hpp"
#include "oracles.hpp"

using namespace mriseg;

TEST_SUITE("phantom") {

TEST_CASE("a clean phantom is piecewise constant and trivially separable") {
    PhantomSpec spec;  // no blur, no noise
    const Phantom phantom = generate_phantom(spec);

    std::set<double> values(phantom.image.pixels().begin(), phantom.image.pixels().end());
    CHECK(values == std::set<double>{0.05, 0.45, 0.85});

    KMeansConfig cfg;
    cfg.k = 3;
    cfg.seed = 11;
    const KMeansResult result = kmeans_run(phantom.image, cfg);
    const auto [cluster, d] = match_tumor_cluster(result.labels, phantom.truth);
    CHECK(d == 1.0);
}

TEST_CASE("the same spec and seed reproduce the phantom exactly") {
    PhantomSpec spec;
    spec.boundary_blur = 2.0;
    spec.noise_std = 0.05;
    spec.seed = 123;
    const Phantom a = generate_phantom(spec);
    const Phantom b = generate_phantom(spec);
    CHECK(a.image.pixels().size() == b.image.pixels().size());
    for (std::size_t i = 0; i < a.image.size(); ++i) {
        CHECK(a.image.pixels()[i] == b.image.pixels()[i]);
    }
    CHECK(a.truth == b.truth);
}

TEST_CASE("the mask is the discrete ellipse interior") {
    PhantomSpec spec;
    spec.tumor = Ellipse{45.0, 50.0, 11.0, 7.5};
    const Phantom phantom = generate_phantom(spec);
    CHECK(phantom.truth.count() ==
          oracles::ellipse_interior_count(spec.width, spec.height, 45.0, 50.0, 11.0, 7.5));
}

TEST_CASE("ground truth ignores blur and noise") {
    PhantomSpec clean;
    PhantomSpec degraded = clean;
    degraded.boundary_blur = 3.0;
    degraded.noise_std = 0.1;
    degraded.seed = 77;
    CHECK(generate_phantom(clean).truth == generate_phantom(degraded).truth);
}

TEST_CASE("all intensities stay inside the unit interval") {
    PhantomSpec spec;
    spec.boundary_blur = 4.0;
    spec.noise_std = 0.2;
    spec.seed = 3;
    const Phantom phantom = generate_phantom(spec);
    CHECK(phantom.image.min() >= 0.0);
    CHECK(phantom.image.max() <= 1.0);
}

TEST_CASE("spec validation") {
    PhantomSpec spec;
    spec.tumor.center_x = 5.0;  // ellipse pokes out of the brain disk
    CHECK_THROWS_AS(generate_phantom(spec), std::invalid_argument);

    spec = PhantomSpec{};
    spec.tissue_intensity = spec.tumor_intensity;
    CHECK_THROWS_AS(generate_phantom(spec), std::invalid_argument);

    spec = PhantomSpec{};
    spec.noise_std = -0.1;
    CHECK_THROWS_AS(generate_phantom(spec), std::invalid_argument);
}

TEST_CASE("suites are deterministic with distinct members") {
    const auto suite = phantom_suite(20, Difficulty::Blurred, 42);
    REQUIRE(suite.size() == 20);
    std::set<std::uint64_t> seeds;
    for (const auto& p : suite) {
        seeds.insert(p.spec.seed);
        CHECK(p.image.min() >= 0.0);
        CHECK(p.image.max() <= 1.0);
        CHECK(p.spec.boundary_blur >= 1.5);
        CHECK(p.spec.boundary_blur <= 3.0);
        CHECK(p.spec.noise_std == 0.05);
    }
    CHECK(seeds.size() == 20);

    const auto again = phantom_suite(20, Difficulty::Blurred, 42);
    for (std::size_t i = 0; i < suite.size(); ++i) {
        CHECK(suite[i].truth == again[i].truth);
    }
    CHECK_THROWS_AS(phantom_suite(0, Difficulty::Sharp, 1), std::invalid_argument);
}

TEST_CASE("sharp suites are easy for kmeans") {
    // Restarts stand in for the paper's averaging over multiple random
    // initializations; a single unlucky seeding can merge two levels.
    const auto suite = phantom_suite(10, Difficulty::Sharp, 7);
    double total = 0.0;
    for (const auto& p : suite) {
        KMeansConfig cfg;
        cfg.k = 3;
        cfg.seed = p.spec.seed;
        cfg.restarts = 5;
        const KMeansResult result = kmeans_run(p.image, cfg);
        total += match_tumor_cluster(result.labels, p.truth).second;
    }
    CHECK(total / 10.0 >= 0.95);
}

TEST_CASE("blurred suites favor fcm over kmeans") {
    // The acceptance-critical comparison: the full pipeline (preprocessing
    // included) over a blurred suite must come out soft-clustering ahead.
    std::vector<SuiteImage> suite;
    int i = 0;
    for (auto& p : phantom_suite(10, Difficulty::Blurred, 19)) {
        suite.push_back(SuiteImage{"p" + std::to_string(i++), std::move(p.image),
                                   std::move(p.truth)});
    }
    KMeansConfig km;
    km.k = 3;
    km.seed = 19;
    FcmConfig fc;
    fc.c = 4;
    fc.seed = 19;
    const std::vector<AlgoConfig> algos{km, fc};
    const Comparison cmp = run_comparison(suite, algos, PreprocessOptions{});
    double kmeans_mean = 0.0, fcm_mean = 0.0;
    for (const auto& s : cmp.per_algorithm) {
        (s.algorithm == "kmeans" ? kmeans_mean : fcm_mean) = s.dice.mean;
    }
    CHECK(fcm_mean > kmeans_mean);
}

}  // TEST_SUITE
