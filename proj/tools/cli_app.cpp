#include "cli_app.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mriseg/bench.hpp"
#include "mriseg/image_io.hpp"
#include "mriseg/phantom.hpp"

namespace mriseg::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr const char* kVersion = "mriseg 0.1.0";

// ---------------------------------------------------------------------------
// Shared option bundles

struct PreprocessFlags {
    double sigma = 1.0;
    double clahe_clip = 2.0;
    int clahe_tiles = 8;
    bool no_preprocess = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--sigma", sigma, "Gaussian smoothing sigma in pixels")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--clahe-clip", clahe_clip, "CLAHE relative clip limit (>= 1)")
            ->capture_default_str();
        cmd->add_option("--clahe-tiles", clahe_tiles, "CLAHE tile grid size per axis")
            ->capture_default_str();
        cmd->add_flag("--no-preprocess", no_preprocess, "Skip Gaussian filtering and CLAHE");
    }

    PreprocessOptions options() const {
        PreprocessOptions opts;
        opts.enabled = !no_preprocess;
        opts.gaussian = GaussianParams::with_sigma(sigma);
        opts.clahe.clip_limit = clahe_clip;
        opts.clahe.tiles_x = clahe_tiles;
        opts.clahe.tiles_y = clahe_tiles;
        return opts;
    }
};

struct ClusterFlags {
    std::size_t k = 3;
    std::size_t c = 4;
    double m = 2.0;
    double alpha = 0.3;
    int window = 1;
    double tol = 1e-5;
    int max_iter = 100;
    int restarts = 1;
    std::uint64_t seed = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--k", k, "K-Means cluster count")->capture_default_str();
        cmd->add_option("--c", c, "FCM cluster count")->capture_default_str();
        cmd->add_option("--m", m, "FCM fuzzifier (> 1)")->capture_default_str();
        cmd->add_option("--alpha", alpha, "Hybrid spatial blend weight in [0,1]")
            ->capture_default_str();
        cmd->add_option("--window", window, "Hybrid neighborhood radius in pixels")
            ->capture_default_str();
        cmd->add_option("--tol", tol, "Convergence tolerance")->capture_default_str();
        cmd->add_option("--max-iter", max_iter, "Iteration cap")->capture_default_str();
        cmd->add_option("--restarts", restarts, "Independent K-Means runs, best kept")
            ->capture_default_str();
        cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
    }

    KMeansConfig kmeans() const {
        KMeansConfig cfg;
        cfg.k = k;
        cfg.max_iter = max_iter;
        cfg.tol = tol;
        cfg.seed = seed;
        cfg.restarts = restarts;
        return cfg;
    }

    FcmConfig fcm() const {
        FcmConfig cfg;
        cfg.c = c;
        cfg.m = m;
        cfg.max_iter = max_iter;
        cfg.tol = tol;
        cfg.seed = seed;
        return cfg;
    }

    HybridConfig hybrid() const {
        HybridConfig cfg;
        cfg.kmeans = kmeans();
        cfg.kmeans.k = k;
        cfg.fcm = fcm();
        cfg.fcm.init = FcmInit::CentroidsFromKMeans;
        cfg.spatial_weight = alpha;
        cfg.window = window;
        return cfg;
    }

    // Builds and validates the config up front, before any file is touched.
    AlgoConfig for_name(const std::string& name) const {
        if (name == "kmeans") {
            KMeansConfig cfg = kmeans();
            validate_params(cfg);
            return cfg;
        }
        if (name == "fcm") {
            FcmConfig cfg = fcm();
            validate_params(cfg);
            return cfg;
        }
        if (name == "hybrid") {
            if (k != c) {
                throw std::invalid_argument("hybrid requires --k equal to --c (got k=" +
                                            std::to_string(k) + ", c=" + std::to_string(c) + ")");
            }
            HybridConfig cfg = hybrid();
            validate_params(cfg);
            return cfg;
        }
        throw std::invalid_argument("unknown algorithm '" + name +
                                    "' (expected kmeans|fcm|hybrid)");
    }
};

std::string pad3(int n) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%03d", n);
    return buf;
}

// Expands `--config FILE` before parsing: each `key=value` line becomes a
// trailing `--key=value` token unless the flag already appears on the
// command line, so explicit flags always win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                       args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (path.empty()) return args;

    std::ifstream in(path);
    if (!in) {
        throw FileNotFoundError(path + ": cannot open config file");
    }
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw std::invalid_argument(path + ": config lines must look like key=value");
        }
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        const auto key_end = key.find_last_not_of(" \t");
        key = key.substr(0, key_end + 1);
        const auto value_start = value.find_first_not_of(" \t");
        value = value_start == std::string::npos ? "" : value.substr(value_start);

        const std::string flag = "--" + key;
        bool given = false;
        for (const auto& a : args) {
            if (a == flag || a.rfind(flag + "=", 0) == 0) {
                given = true;
                break;
            }
        }
        if (!given) args.push_back(flag + "=" + value);
    }
    return args;
}

ordered_json spec_to_json(const PhantomSpec& spec) {
    return ordered_json{{"width", spec.width},
                        {"height", spec.height},
                        {"tumor",
                         {{"center_x", spec.tumor.center_x},
                          {"center_y", spec.tumor.center_y},
                          {"semi_x", spec.tumor.semi_x},
                          {"semi_y", spec.tumor.semi_y}}},
                        {"tumor_intensity", spec.tumor_intensity},
                        {"tissue_intensity", spec.tissue_intensity},
                        {"background_intensity", spec.background_intensity},
                        {"boundary_blur", spec.boundary_blur},
                        {"noise_std", spec.noise_std},
                        {"seed", spec.seed}};
}

BinaryMask mask_from_image(const GrayImage& img) {
    std::vector<std::uint8_t> data(img.size());
    const auto pixels = img.pixels();
    for (std::size_t i = 0; i < pixels.size(); ++i) data[i] = pixels[i] > 0.5 ? 1 : 0;
    return BinaryMask(img.width(), img.height(), std::move(data));
}

std::vector<SuiteImage> load_suite_dir(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw FileNotFoundError(dir.string() + ": not a directory");
    }
    std::vector<fs::path> image_files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("image_", 0) == 0) image_files.push_back(entry.path());
    }
    std::sort(image_files.begin(), image_files.end());
    if (image_files.empty()) {
        throw FileNotFoundError(dir.string() + ": no image_* files found");
    }
    std::vector<SuiteImage> suite;
    for (const auto& img_path : image_files) {
        fs::path mask_path = img_path;
        mask_path.replace_filename("mask_" + img_path.filename().string().substr(6));
        GrayImage image = read_image(img_path);
        GrayImage mask_img = read_image(mask_path);
        suite.push_back(SuiteImage{img_path.stem().string(), std::move(image),
                                   mask_from_image(mask_img)});
    }
    return suite;
}

std::vector<SuiteImage> suite_from_phantoms(int count, Difficulty difficulty,
                                            std::uint64_t seed) {
    std::vector<SuiteImage> suite;
    int index = 0;
    for (auto& p : phantom_suite(count, difficulty, seed)) {
        suite.push_back(
            SuiteImage{"phantom_" + pad3(index++), std::move(p.image), std::move(p.truth)});
    }
    return suite;
}

ordered_json stats_to_json(const AlgorithmStats& s) {
    return ordered_json{{"algorithm", s.algorithm},
                        {"mean_dice", s.dice.mean},
                        {"median_dice", s.dice.median},
                        {"std_dice", s.dice.stddev},
                        {"mean_time_s", s.wall_time_s.mean},
                        {"median_time_s", s.wall_time_s.median},
                        {"std_time_s", s.wall_time_s.stddev},
                        {"mean_iterations", s.mean_iterations}};
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw WriteError(path.string() + ": cannot open for writing");
    }
    out << text;
    if (!out) {
        throw WriteError(path.string() + ": write failed");
    }
}

// ---------------------------------------------------------------------------
// phantom

struct PhantomArgs {
    int count = 20;
    std::string difficulty = "blurred";
    std::uint64_t seed = 0;
    std::string out_dir;
};

int run_phantom(const PhantomArgs& args) {
    const Difficulty difficulty = difficulty_from_string(args.difficulty);
    if (args.count < 1) {
        throw std::invalid_argument("--count must be at least 1");
    }
    const auto suite = phantom_suite(args.count, difficulty, args.seed);
    fs::create_directories(args.out_dir);

    ordered_json manifest;
    manifest["difficulty"] = args.difficulty;
    manifest["seed"] = args.seed;
    manifest["count"] = args.count;
    manifest["phantoms"] = ordered_json::array();
    for (std::size_t i = 0; i < suite.size(); ++i) {
        const std::string stem = pad3(static_cast<int>(i));
        const fs::path image_path = fs::path(args.out_dir) / ("image_" + stem + ".pgm");
        const fs::path mask_path = fs::path(args.out_dir) / ("mask_" + stem + ".pgm");
        write_image(suite[i].image, image_path);
        std::vector<double> mask_pixels(suite[i].truth.size());
        for (std::size_t p = 0; p < mask_pixels.size(); ++p) {
            mask_pixels[p] = suite[i].truth.raw()[p] ? 1.0 : 0.0;
        }
        write_image(GrayImage(suite[i].truth.width(), suite[i].truth.height(),
                              std::move(mask_pixels)),
                    mask_path);
        ordered_json entry = spec_to_json(suite[i].spec);
        entry["image"] = image_path.filename().string();
        entry["mask"] = mask_path.filename().string();
        manifest["phantoms"].push_back(entry);
    }
    write_text(fs::path(args.out_dir) / "manifest.json", manifest.dump(2) + "\n");
    std::cout << "wrote " << suite.size() << " phantom pairs to " << args.out_dir << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// segment

struct SegmentArgs {
    std::string input;
    std::string algo = "kmeans";
    std::string out;
    PreprocessFlags preprocess;
    ClusterFlags cluster;
};

int run_segment(const SegmentArgs& args) {
    const AlgoConfig config = args.cluster.for_name(args.algo);  // validates algo + k==c
    GrayImage image = read_image(args.input);
    if (!args.preprocess.no_preprocess) {
        const PreprocessOptions opts = args.preprocess.options();
        image = clahe(gaussian_filter(image, opts.gaussian), opts.clahe);
    }

    const auto t0 = std::chrono::steady_clock::now();
    ClusterModel model;
    LabelMap labels(1, 1, 1, {0});
    if (args.algo == "kmeans") {
        KMeansResult r = kmeans_run(image, std::get<KMeansConfig>(config));
        model = std::move(r.model);
        labels = std::move(r.labels);
    } else if (args.algo == "fcm") {
        FcmResult r = fcm_run(image, std::get<FcmConfig>(config));
        labels = defuzzify(r.memberships, image.width(), image.height());
        model = std::move(r.model);
    } else {
        HybridResult r = hybrid_run(image, std::get<HybridConfig>(config));
        model = std::move(r.model);
        labels = std::move(r.labels);
    }
    const auto t1 = std::chrono::steady_clock::now();

    write_labelmap(labels, args.out);

    ordered_json summary;
    summary["algorithm"] = args.algo;
    summary["input"] = args.input;
    summary["width"] = image.width();
    summary["height"] = image.height();
    summary["preprocessed"] = !args.preprocess.no_preprocess;
    summary["clusters"] = model.centroids.size();
    summary["centroids"] = model.centroids;
    summary["objective"] = model.objective;
    summary["iterations"] = model.iterations;
    summary["wall_time_s"] = std::chrono::duration<double>(t1 - t0).count();
    summary["seed"] = args.cluster.seed;
    summary["label_image"] = args.out;

    fs::path summary_path(args.out);
    summary_path.replace_extension(".json");
    write_text(summary_path, summary.dump(2) + "\n");
    std::cout << "wrote " << args.out << " and " << summary_path.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// benchmark

struct BenchmarkArgs {
    std::string suite_dir;
    int generate = 0;
    std::string difficulty = "blurred";
    std::string algos = "kmeans,fcm";
    bool serial = false;  // execution is always serial; kept for timing runs
    std::string out_dir;
    PreprocessFlags preprocess;
    ClusterFlags cluster;  // cluster.seed also seeds suite generation
};

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<SuiteImage> benchmark_suite(const BenchmarkArgs& args) {
    if (!args.suite_dir.empty()) {
        return load_suite_dir(args.suite_dir);
    }
    if (args.generate < 1) {
        throw std::invalid_argument("either --suite-dir or --generate N (N >= 1) is required");
    }
    return suite_from_phantoms(args.generate, difficulty_from_string(args.difficulty),
                               args.cluster.seed);
}

int run_benchmark(const BenchmarkArgs& args) {
    const std::vector<std::string> algo_names = split_csv(args.algos);
    if (algo_names.empty()) {
        throw std::invalid_argument("--algos must name at least one algorithm");
    }
    std::vector<AlgoConfig> configs;
    for (const auto& name : algo_names) {
        configs.push_back(args.cluster.for_name(name));
    }
    const std::vector<SuiteImage> suite = benchmark_suite(args);

    const Comparison cmp = run_comparison(suite, configs, args.preprocess.options());

    fs::create_directories(args.out_dir);
    write_records(cmp.records, fs::path(args.out_dir) / "records.csv", RecordFormat::Csv);
    write_records(cmp.records, fs::path(args.out_dir) / "records.json", RecordFormat::Json);
    emit_charts(cmp, args.out_dir);

    const fs::path labels_dir = fs::path(args.out_dir) / "labels";
    fs::create_directories(labels_dir);
    for (std::size_t i = 0; i < cmp.records.size(); ++i) {
        const auto& r = cmp.records[i];
        write_labelmap(cmp.labels[i], labels_dir / (r.input + "_" + r.algorithm + ".pgm"));
    }

    ordered_json summary;
    summary["suite_size"] = suite.size();
    summary["serial"] = args.serial;
    summary["preprocessed"] = !args.preprocess.no_preprocess;
    summary["per_algorithm"] = ordered_json::array();
    for (const auto& s : cmp.per_algorithm) summary["per_algorithm"].push_back(stats_to_json(s));
    if (cmp.speed_ratio) summary["speed_ratio_fcm_over_kmeans"] = *cmp.speed_ratio;
    summary["failures"] = cmp.failures;
    write_text(fs::path(args.out_dir) / "summary.json", summary.dump(2) + "\n");

    std::cout << comparison_table(cmp);
    return cmp.failures.empty() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
    std::string param;
    std::string range;
    double step = 0.0;  // 0: default per parameter
    BenchmarkArgs bench;
};

SweepSpec parse_sweep_spec(const SweepArgs& args) {
    SweepSpec spec;
    spec.kmeans = args.bench.cluster.kmeans();
    spec.fcm = args.bench.cluster.fcm();
    if (args.param == "k") {
        spec.param = SweepParam::K;
        spec.step = args.step > 0.0 ? args.step : 1.0;
    } else if (args.param == "m") {
        spec.param = SweepParam::M;
        spec.step = args.step > 0.0 ? args.step : 0.5;
    } else {
        throw std::invalid_argument("--param must be k or m");
    }
    const auto colon = args.range.find(':');
    if (colon == std::string::npos) {
        throw std::invalid_argument("--range must look like lo:hi");
    }
    try {
        spec.lo = std::stod(args.range.substr(0, colon));
        spec.hi = std::stod(args.range.substr(colon + 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("--range must hold numbers lo:hi");
    }
    return spec;
}

int run_sweep(const SweepArgs& args) {
    const SweepSpec spec = parse_sweep_spec(args);
    const std::vector<SuiteImage> suite = benchmark_suite(args.bench);
    const auto points = parameter_sweep(suite, spec, args.bench.preprocess.options());

    fs::create_directories(args.bench.out_dir);
    std::ostringstream csv;
    csv << "param,value,algorithm,mean_dice,median_dice,std_dice,mean_time_s,mean_iterations\n";
    ordered_json summary = ordered_json::array();
    for (const auto& point : points) {
        for (const auto& s : point.comparison.per_algorithm) {
            char buf[256];
            std::snprintf(buf, sizeof(buf), "%s,%.17g,%s,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                          args.param.c_str(), point.value, s.algorithm.c_str(), s.dice.mean,
                          s.dice.median, s.dice.stddev, s.wall_time_s.mean, s.mean_iterations);
            csv << buf;
            ordered_json entry = stats_to_json(s);
            entry["param"] = args.param;
            entry["value"] = point.value;
            summary.push_back(entry);
        }
        std::cout << args.param << " = " << point.value << "\n"
                  << comparison_table(point.comparison) << "\n";
    }
    write_text(fs::path(args.bench.out_dir) / "sweep.csv", csv.str());
    write_text(fs::path(args.bench.out_dir) / "sweep.json", summary.dump(2) + "\n");
    return 0;
}

// ---------------------------------------------------------------------------

void attach_benchmark_flags(CLI::App* cmd, BenchmarkArgs& args) {
    cmd->add_option("--suite-dir", args.suite_dir,
                    "Directory of image_*/mask_* pairs (as written by 'phantom')");
    cmd->add_option("--generate", args.generate, "Generate N phantoms instead of reading a suite");
    cmd->add_option("--difficulty", args.difficulty, "sharp|blurred|noisy-blurred")
        ->capture_default_str();
    cmd->add_option("--algos", args.algos, "Comma-separated subset of kmeans,fcm,hybrid")
        ->capture_default_str();
    cmd->add_flag("--serial", args.serial, "Single-threaded timing mode (execution is serial)");
    cmd->add_option("--out-dir", args.out_dir, "Report output directory")->required();
    args.preprocess.attach(cmd);
    args.cluster.attach(cmd);
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Clustering-based MRI tumor segmentation toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    PhantomArgs phantom_args;
    auto* phantom_cmd =
        app.add_subcommand("phantom", "Generate synthetic phantom image/mask pairs");
    phantom_cmd->set_version_flag("--version", kVersion);
    std::string phantom_config;
    phantom_cmd->add_option("--config", phantom_config,
                            "Flat key=value config file; explicit flags win");
    phantom_cmd->add_option("--count", phantom_args.count, "Number of phantoms")
        ->capture_default_str();
    phantom_cmd->add_option("--difficulty", phantom_args.difficulty, "sharp|blurred|noisy-blurred")
        ->capture_default_str();
    phantom_cmd->add_option("--seed", phantom_args.seed, "Suite seed")->capture_default_str();
    phantom_cmd->add_option("--out-dir", phantom_args.out_dir, "Output directory")->required();

    SegmentArgs segment_args;
    auto* segment_cmd = app.add_subcommand("segment", "Segment one image");
    segment_cmd->set_version_flag("--version", kVersion);
    std::string segment_config;
    segment_cmd->add_option("--config", segment_config,
                            "Flat key=value config file; explicit flags win");
    segment_cmd->add_option("--input", segment_args.input, "Input PGM/PNG image")->required();
    segment_cmd->add_option("--algo", segment_args.algo, "kmeans|fcm|hybrid")
        ->capture_default_str();
    segment_cmd->add_option("--out", segment_args.out, "Label image output path")->required();
    segment_args.preprocess.attach(segment_cmd);
    segment_args.cluster.attach(segment_cmd);

    BenchmarkArgs benchmark_args;
    auto* benchmark_cmd =
        app.add_subcommand("benchmark", "Compare algorithms over an image suite");
    benchmark_cmd->set_version_flag("--version", kVersion);
    std::string benchmark_config;
    benchmark_cmd->add_option("--config", benchmark_config,
                              "Flat key=value config file; explicit flags win");
    attach_benchmark_flags(benchmark_cmd, benchmark_args);

    SweepArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand("sweep", "Sweep k or the fuzzifier m over a range");
    sweep_cmd->set_version_flag("--version", kVersion);
    std::string sweep_config;
    sweep_cmd->add_option("--config", sweep_config,
                          "Flat key=value config file; explicit flags win");
    sweep_cmd->add_option("--param", sweep_args.param, "k or m")->required();
    sweep_cmd->add_option("--range", sweep_args.range, "lo:hi (inclusive)")->required();
    sweep_cmd->add_option("--step", sweep_args.step, "Step (default 1 for k, 0.5 for m)");
    attach_benchmark_flags(sweep_cmd, sweep_args.bench);

    std::vector<std::string> expanded;
    try {
        expanded = expand_config(args);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (phantom_cmd->parsed()) return run_phantom(phantom_args);
        if (segment_cmd->parsed()) return run_segment(segment_args);
        if (benchmark_cmd->parsed()) return run_benchmark(benchmark_args);
        if (sweep_cmd->parsed()) return run_sweep(sweep_args);
        std::cerr << app.help();
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace mriseg::cli
