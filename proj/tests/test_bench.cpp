#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <fstream>
#include <regex>

#include "mriseg/bench.hpp"
#include "mriseg/phantom.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

using namespace mriseg;
using testutil::TempDir;

namespace {

std::vector<SuiteImage> make_suite(int count, Difficulty difficulty, std::uint64_t seed) {
    std::vector<SuiteImage> suite;
    int i = 0;
    for (auto& p : phantom_suite(count, difficulty, seed)) {
        suite.push_back(SuiteImage{"p" + std::to_string(i++), std::move(p.image),
                                   std::move(p.truth)});
    }
    return suite;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_SUITE("bench") {

TEST_CASE("one sharp phantom yields two near-perfect records") {
    const auto suite = make_suite(1, Difficulty::Sharp, 8);
    KMeansConfig km;
    km.k = 3;
    km.seed = 1;
    FcmConfig fc;
    fc.c = 4;
    fc.seed = 1;
    const std::vector<AlgoConfig> algos{km, fc};
    const Comparison cmp = run_comparison(suite, algos, PreprocessOptions{false});
    REQUIRE(cmp.records.size() == 2);
    CHECK(cmp.failures.empty());
    for (const auto& r : cmp.records) {
        CHECK(r.report.dice >= 0.95);
    }
    CHECK(cmp.per_algorithm.size() == 2);
    CHECK(cmp.speed_ratio.has_value());
}

TEST_CASE("aggregates are recomputable from the per-image records") {
    const auto suite = make_suite(5, Difficulty::Blurred, 13);
    KMeansConfig km;
    km.k = 3;
    km.seed = 2;
    FcmConfig fc;
    fc.c = 4;
    fc.seed = 2;
    const std::vector<AlgoConfig> algos{km, fc};
    const Comparison cmp = run_comparison(suite, algos, PreprocessOptions{false});

    for (const auto& stats : cmp.per_algorithm) {
        std::vector<double> dices, times;
        for (const auto& r : cmp.records) {
            if (r.algorithm != stats.algorithm) continue;
            dices.push_back(r.report.dice);
            times.push_back(r.report.wall_time_s);
        }
        const SummaryStats dice_check = summarize(dices);
        CHECK(stats.dice.mean == doctest::Approx(dice_check.mean).epsilon(1e-12));
        CHECK(stats.dice.median == doctest::Approx(dice_check.median).epsilon(1e-12));
        CHECK(stats.dice.stddev == doctest::Approx(dice_check.stddev).epsilon(1e-12));
        const SummaryStats time_check = summarize(times);
        CHECK(stats.wall_time_s.mean == doctest::Approx(time_check.mean).epsilon(1e-12));
    }
}

TEST_CASE("segmentation outputs are bit-stable across runs") {
    const auto suite = make_suite(3, Difficulty::Blurred, 21);
    KMeansConfig km;
    km.k = 3;
    km.seed = 5;
    FcmConfig fc;
    fc.c = 4;
    fc.seed = 5;
    const std::vector<AlgoConfig> algos{km, fc};
    const Comparison a = run_comparison(suite, algos, PreprocessOptions{});
    const Comparison b = run_comparison(suite, algos, PreprocessOptions{});
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].report.dice == b.records[i].report.dice);
        CHECK(a.records[i].report.compactness == b.records[i].report.compactness);
        CHECK(a.records[i].report.separation == b.records[i].report.separation);
        CHECK(a.records[i].report.iterations == b.records[i].report.iterations);
        CHECK(a.labels[i] == b.labels[i]);
    }
}

TEST_CASE("summarize handles medians and spread") {
    const std::vector<double> odd{3.0, 1.0, 2.0};
    const SummaryStats s = summarize(odd);
    CHECK(s.mean == doctest::Approx(2.0));
    CHECK(s.median == doctest::Approx(2.0));
    CHECK(s.stddev == doctest::Approx(1.0));
    const std::vector<double> even{1.0, 2.0, 3.0, 4.0};
    CHECK(summarize(even).median == doctest::Approx(2.5));
    CHECK(summarize(std::vector<double>{5.0}).stddev == 0.0);
}

TEST_CASE("the k sweep produces one comparison per setting") {
    const auto suite = make_suite(2, Difficulty::Sharp, 30);
    SweepSpec spec;
    spec.param = SweepParam::K;
    spec.lo = 2.0;
    spec.hi = 6.0;
    spec.step = 1.0;
    spec.kmeans.seed = 3;
    const auto points = parameter_sweep(suite, spec, PreprocessOptions{false});
    REQUIRE(points.size() == 5);
    for (std::size_t i = 0; i < points.size(); ++i) {
        CHECK(points[i].value == doctest::Approx(2.0 + static_cast<double>(i)));
        CHECK(points[i].comparison.records.size() == 2);
        CHECK(points[i].comparison.per_algorithm.front().algorithm == "kmeans");
    }
}

TEST_CASE("the m sweep covers the fuzzifier range") {
    const auto suite = make_suite(1, Difficulty::Sharp, 31);
    SweepSpec spec;
    spec.param = SweepParam::M;
    spec.lo = 1.5;
    spec.hi = 4.0;
    spec.step = 0.5;
    spec.fcm.seed = 3;
    const auto points = parameter_sweep(suite, spec, PreprocessOptions{false});
    REQUIRE(points.size() == 6);
    CHECK(points.front().value == doctest::Approx(1.5));
    CHECK(points.back().value == doctest::Approx(4.0));
    CHECK(points.front().comparison.per_algorithm.front().algorithm == "fcm");
}

TEST_CASE("sweep validation rejects out-of-range parameters") {
    const auto suite = make_suite(1, Difficulty::Sharp, 32);
    SweepSpec spec;
    spec.param = SweepParam::M;
    spec.lo = 0.5;
    spec.hi = 1.0;
    CHECK_THROWS_AS(parameter_sweep(suite, spec, PreprocessOptions{false}),
                    std::invalid_argument);
    spec.param = SweepParam::K;
    spec.lo = 2.0;
    spec.hi = 1.0;
    CHECK_THROWS_AS(parameter_sweep(suite, spec, PreprocessOptions{false}),
                    std::invalid_argument);
}

TEST_CASE("charts carry one bar per algorithm with proportional heights") {
    const auto suite = make_suite(2, Difficulty::Sharp, 33);
    KMeansConfig km;
    km.k = 3;
    km.seed = 1;
    FcmConfig fc;
    fc.c = 4;
    fc.seed = 1;
    const std::vector<AlgoConfig> algos{km, fc};
    const Comparison cmp = run_comparison(suite, algos, PreprocessOptions{false});

    TempDir dir("charts");
    emit_charts(cmp, dir.path());
    const std::string dsc_svg = slurp(dir / "dsc_comparison.svg");
    const std::string runtime_svg = slurp(dir / "runtime_comparison.svg");

    const std::regex bar(R"(<rect x=\"[0-9.]+\" y=\"[0-9.]+\" width=\"[0-9.]+\" height=\"([0-9.]+)\")");
    auto heights = [&](const std::string& svg) {
        std::vector<double> out;
        for (auto it = std::sregex_iterator(svg.begin(), svg.end(), bar);
             it != std::sregex_iterator(); ++it) {
            out.push_back(std::stod((*it)[1]));
        }
        return out;
    };
    const auto dsc_heights = heights(dsc_svg);
    const auto time_heights = heights(runtime_svg);
    REQUIRE(dsc_heights.size() == 2);
    REQUIRE(time_heights.size() == 2);

    const double expected_ratio = cmp.per_algorithm[1].dice.mean / cmp.per_algorithm[0].dice.mean;
    CHECK(dsc_heights[1] / dsc_heights[0] == doctest::Approx(expected_ratio).epsilon(1e-2));

    // The CSV mirrors the aggregates exactly.
    const std::string csv = slurp(dir / "comparison.csv");
    char expect[64];
    std::snprintf(expect, sizeof(expect), "%.17g", cmp.per_algorithm[0].dice.mean);
    CHECK(csv.find(expect) != std::string::npos);
    std::snprintf(expect, sizeof(expect), "%.17g", cmp.per_algorithm[1].wall_time_s.mean);
    CHECK(csv.find(expect) != std::string::npos);

    const std::string table = comparison_table(cmp);
    CHECK(table.find("kmeans") != std::string::npos);
    CHECK(table.find("fcm") != std::string::npos);
}

TEST_CASE("empty suites are rejected") {
    KMeansConfig km;
    const std::vector<AlgoConfig> algos{km};
    CHECK_THROWS_AS(run_comparison({}, algos, PreprocessOptions{false}), std::invalid_argument);
}

TEST_CASE("per-image failures are excluded from aggregates and surfaced") {
    // A 2x2 image cannot host 5 clusters; the phantom can.
    auto suite = make_suite(1, Difficulty::Sharp, 40);
    suite.push_back(SuiteImage{"tiny", GrayImage(2, 2, {0.1, 0.2, 0.3, 0.4}),
                               BinaryMask::filled(2, 2, false)});
    KMeansConfig km;
    km.k = 5;
    km.seed = 1;
    const std::vector<AlgoConfig> algos{km};
    const Comparison cmp = run_comparison(suite, algos, PreprocessOptions{false});
    CHECK(cmp.records.size() == 1);
    CHECK(cmp.records.front().input == "p0");
    REQUIRE(cmp.failures.size() == 1);
    CHECK(cmp.failures.front().find("tiny") != std::string::npos);

    // Preprocessing failures count as per-image failures too: the default
    // 8x8 tile grid does not fit a 2x2 image.
    const Comparison pre = run_comparison(suite, algos, PreprocessOptions{});
    CHECK(pre.records.size() == 1);
    REQUIRE(pre.failures.size() == 1);
    CHECK(pre.failures.front().find("tiny/preprocess") != std::string::npos);
}

}  // TEST_SUITE
