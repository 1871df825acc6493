#ifndef MRISEG_BENCH_HPP
#define MRISEG_BENCH_HPP

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mriseg/hybrid.hpp"
#include "mriseg/preprocess.hpp"
#include "mriseg/records.hpp"

namespace mriseg {

struct SuiteImage {
    std::string id;
    GrayImage image;
    BinaryMask truth;
};

using AlgoConfig = std::variant<KMeansConfig, FcmConfig, HybridConfig>;

/// "kmeans", "fcm" or "hybrid".
std::string algorithm_name(const AlgoConfig& config);

struct PreprocessOptions {
    bool enabled = true;
    GaussianParams gaussian = GaussianParams::with_sigma(1.0);
    ClaheParams clahe;
};

struct SummaryStats {
    double mean = 0.0;
    double median = 0.0;
    double stddev = 0.0;  // sample standard deviation, 0 for a single value
};

struct AlgorithmStats {
    std::string algorithm;
    SummaryStats dice;
    SummaryStats wall_time_s;
    double mean_iterations = 0.0;
};

struct Comparison {
    std::vector<AlgorithmStats> per_algorithm;
    std::vector<RunRecord> records;
    std::vector<LabelMap> labels;  // parallel to records
    std::vector<std::string> failures;
    std::optional<double> speed_ratio;  // mean FCM time / mean K-Means time
};

SummaryStats summarize(std::span<const double> values);

/// Runs every algorithm over every suite image: optional preprocessing,
/// timed clustering (the clustering call only), best-cluster dice against
/// the ground truth, compactness and separation. Per-image failures are
/// recorded and excluded from the aggregates.
Comparison run_comparison(std::span<const SuiteImage> suite,
                          std::span<const AlgoConfig> algorithms,
                          const PreprocessOptions& preprocess = {});

enum class SweepParam { K, M };

struct SweepSpec {
    SweepParam param = SweepParam::K;
    double lo = 2.0;
    double hi = 6.0;
    double step = 1.0;
    KMeansConfig kmeans;  // base config for K sweeps; k is overridden
    FcmConfig fcm;        // base config for M sweeps; m is overridden
};

struct SweepPoint {
    double value = 0.0;
    Comparison comparison;
};

/// One comparison per swept setting; K sweeps K-Means cluster counts,
/// M sweeps the FCM fuzzifier.
std::vector<SweepPoint> parameter_sweep(std::span<const SuiteImage> suite, const SweepSpec& spec,
                                        const PreprocessOptions& preprocess);

/// Writes dsc_comparison.svg, runtime_comparison.svg and comparison.csv
/// into the directory.
void emit_charts(const Comparison& comparison, const std::filesystem::path& out_dir);

/// Aggregate CSV underlying the charts.
std::string comparison_csv(const Comparison& comparison);

/// Fixed-width text table, one row per algorithm.
std::string comparison_table(const Comparison& comparison);

}  // namespace mriseg

#endif
