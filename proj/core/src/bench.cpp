#include "mriseg/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mriseg/image_io.hpp"
#include "mriseg/metrics.hpp"

namespace mriseg {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct AlgoRun {
    ClusterModel model;
    LabelMap labels;
};

AlgoRun run_algorithm(const GrayImage& img, const AlgoConfig& config) {
    if (const auto* km = std::get_if<KMeansConfig>(&config)) {
        KMeansResult r = kmeans_run(img, *km);
        return AlgoRun{std::move(r.model), std::move(r.labels)};
    }
    if (const auto* fc = std::get_if<FcmConfig>(&config)) {
        FcmResult r = fcm_run(img, *fc);
        LabelMap labels = defuzzify(r.memberships, img.width(), img.height());
        return AlgoRun{std::move(r.model), std::move(labels)};
    }
    const auto& hy = std::get<HybridConfig>(config);
    HybridResult r = hybrid_run(img, hy);
    return AlgoRun{std::move(r.model), std::move(r.labels)};
}

std::string config_summary(const AlgoConfig& config) {
    std::ostringstream out;
    if (const auto* km = std::get_if<KMeansConfig>(&config)) {
        out << "k=" << km->k << " tol=" << km->tol << " max_iter=" << km->max_iter
            << " restarts=" << km->restarts << " seed=" << km->seed;
    } else if (const auto* fc = std::get_if<FcmConfig>(&config)) {
        out << "c=" << fc->c << " m=" << fc->m << " tol=" << fc->tol
            << " max_iter=" << fc->max_iter << " seed=" << fc->seed;
    } else {
        const auto& hy = std::get<HybridConfig>(config);
        out << "k=" << hy.kmeans.k << " m=" << hy.fcm.m << " alpha=" << hy.spatial_weight
            << " window=" << hy.window << " seed=" << hy.fcm.seed;
    }
    return out.str();
}

}  // namespace

std::string algorithm_name(const AlgoConfig& config) {
    if (std::holds_alternative<KMeansConfig>(config)) return "kmeans";
    if (std::holds_alternative<FcmConfig>(config)) return "fcm";
    return "hybrid";
}

SummaryStats summarize(std::span<const double> values) {
    SummaryStats s;
    if (values.empty()) return s;
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    for (double v : sorted) sum += v;
    s.mean = sum / static_cast<double>(sorted.size());
    const std::size_t n = sorted.size();
    s.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    if (n > 1) {
        double ss = 0.0;
        for (double v : sorted) {
            const double d = v - s.mean;
            ss += d * d;
        }
        s.stddev = std::sqrt(ss / static_cast<double>(n - 1));
    }
    return s;
}

Comparison run_comparison(std::span<const SuiteImage> suite,
                          std::span<const AlgoConfig> algorithms,
                          const PreprocessOptions& preprocess) {
    if (suite.empty()) {
        throw std::invalid_argument("run_comparison: empty suite");
    }
    if (algorithms.empty()) {
        throw std::invalid_argument("run_comparison: no algorithms");
    }

    Comparison cmp;
    const std::string stamp = utc_timestamp();
    for (const auto& item : suite) {
        GrayImage work = item.image;
        if (preprocess.enabled) {
            try {
                work = clahe(gaussian_filter(work, preprocess.gaussian), preprocess.clahe);
            } catch (const std::exception& e) {
                cmp.failures.push_back(item.id + "/preprocess: " + e.what());
                continue;
            }
        }
        for (const auto& config : algorithms) {
            const std::string name = algorithm_name(config);
            try {
                const auto t0 = std::chrono::steady_clock::now();
                AlgoRun run = run_algorithm(work, config);
                const auto t1 = std::chrono::steady_clock::now();

                EvalReport report;
                report.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
                report.iterations = run.model.iterations;
                const auto [cluster, d] = match_tumor_cluster(run.labels, item.truth);
                report.matched_cluster = cluster;
                report.dice = d;
                report.compactness = compactness(work, run.labels, run.model.centroids);
                report.separation =
                    run.model.centroids.size() >= 2 ? separation(run.model.centroids) : 0.0;

                cmp.records.push_back(RunRecord{name, item.id, report, config_summary(config), stamp});
                cmp.labels.push_back(std::move(run.labels));
            } catch (const std::exception& e) {
                cmp.failures.push_back(item.id + "/" + name + ": " + e.what());
            }
        }
    }

    for (const auto& config : algorithms) {
        const std::string name = algorithm_name(config);
        std::vector<double> dices, times, iters;
        for (const auto& r : cmp.records) {
            if (r.algorithm != name) continue;
            dices.push_back(r.report.dice);
            times.push_back(r.report.wall_time_s);
            iters.push_back(static_cast<double>(r.report.iterations));
        }
        if (dices.empty()) continue;
        AlgorithmStats stats;
        stats.algorithm = name;
        stats.dice = summarize(dices);
        stats.wall_time_s = summarize(times);
        stats.mean_iterations = summarize(iters).mean;
        cmp.per_algorithm.push_back(std::move(stats));
    }

    const auto find = [&](const std::string& name) -> const AlgorithmStats* {
        for (const auto& s : cmp.per_algorithm) {
            if (s.algorithm == name) return &s;
        }
        return nullptr;
    };
    const AlgorithmStats* km = find("kmeans");
    const AlgorithmStats* fc = find("fcm");
    if (km && fc && km->wall_time_s.mean > 0.0) {
        cmp.speed_ratio = fc->wall_time_s.mean / km->wall_time_s.mean;
    }
    return cmp;
}

std::vector<SweepPoint> parameter_sweep(std::span<const SuiteImage> suite, const SweepSpec& spec,
                                        const PreprocessOptions& preprocess) {
    if (!(spec.step > 0.0)) {
        throw std::invalid_argument("parameter_sweep: step must be positive");
    }
    if (spec.hi < spec.lo) {
        throw std::invalid_argument("parameter_sweep: empty range");
    }
    if (spec.param == SweepParam::K && spec.lo < 1.0) {
        throw std::invalid_argument("parameter_sweep: k must be at least 1");
    }
    if (spec.param == SweepParam::M && !(spec.lo > 1.0)) {
        throw std::invalid_argument("parameter_sweep: fuzzifier m must exceed 1");
    }

    const int settings = static_cast<int>(std::floor((spec.hi - spec.lo) / spec.step + 1e-9)) + 1;
    std::vector<SweepPoint> points;
    points.reserve(static_cast<std::size_t>(settings));
    for (int i = 0; i < settings; ++i) {
        const double value = spec.lo + i * spec.step;
        AlgoConfig config;
        if (spec.param == SweepParam::K) {
            KMeansConfig km = spec.kmeans;
            km.k = static_cast<std::size_t>(std::llround(value));
            config = km;
        } else {
            FcmConfig fc = spec.fcm;
            fc.m = value;
            config = fc;
        }
        const AlgoConfig configs[] = {config};
        points.push_back(SweepPoint{value, run_comparison(suite, configs, preprocess)});
    }
    return points;
}

std::string comparison_csv(const Comparison& cmp) {
    std::ostringstream out;
    out << "algorithm,mean_dice,median_dice,std_dice,mean_time_s,median_time_s,std_time_s,"
           "mean_iterations\n";
    for (const auto& s : cmp.per_algorithm) {
        out << s.algorithm << "," << fmt_double(s.dice.mean) << "," << fmt_double(s.dice.median)
            << "," << fmt_double(s.dice.stddev) << "," << fmt_double(s.wall_time_s.mean) << ","
            << fmt_double(s.wall_time_s.median) << "," << fmt_double(s.wall_time_s.stddev) << ","
            << fmt_double(s.mean_iterations) << "\n";
    }
    return out.str();
}

std::string comparison_table(const Comparison& cmp) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof(line), "%-10s %12s %12s %20s %12s\n", "Algorithm", "Mean DSC",
                  "Median DSC", "Mean time (s/image)", "Iterations");
    out << line;
    for (const auto& s : cmp.per_algorithm) {
        std::snprintf(line, sizeof(line), "%-10s %12.4f %12.4f %20.4f %12.1f\n",
                      s.algorithm.c_str(), s.dice.mean, s.dice.median, s.wall_time_s.mean,
                      s.mean_iterations);
        out << line;
    }
    if (cmp.speed_ratio) {
        std::snprintf(line, sizeof(line), "FCM / K-Means time ratio: %.2f\n", *cmp.speed_ratio);
        out << line;
    }
    if (!cmp.failures.empty()) {
        out << "Failures (" << cmp.failures.size() << "):\n";
        for (const auto& f : cmp.failures) out << "  " << f << "\n";
    }
    return out.str();
}

namespace {

void write_bar_chart(const std::filesystem::path& path, const std::string& title,
                     std::span<const std::string> names, std::span<const double> values,
                     const char* value_format) {
    const double width = 460.0, height = 300.0;
    const double margin_left = 60.0, margin_bottom = 48.0, margin_top = 44.0;
    const double plot_w = width - margin_left - 20.0;
    const double plot_h = height - margin_top - margin_bottom;
    double vmax = 0.0;
    for (double v : values) vmax = std::max(vmax, v);
    if (vmax <= 0.0) vmax = 1.0;
    const double scale = plot_h / (vmax * 1.15);

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw WriteError(path.string() + ": cannot open for writing");
    }
    char buf[256];
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "  <text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
    std::snprintf(buf, sizeof(buf),
                  "  <line x1=\"%.1f\" y1=\"%.2f\" x2=\"%.1f\" y2=\"%.2f\" stroke=\"black\"/>\n",
                  margin_left, margin_top + plot_h, margin_left + plot_w, margin_top + plot_h);
    out << buf;

    const char* fills[] = {"#4878a8", "#d1615d", "#6aa56e", "#b49b3e"};
    const double slot = plot_w / static_cast<double>(names.size());
    const double bar_w = slot * 0.55;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const double bar_h = values[i] * scale;
        const double x = margin_left + slot * (static_cast<double>(i) + 0.5) - bar_w / 2.0;
        const double y = margin_top + plot_h - bar_h;
        std::snprintf(buf, sizeof(buf),
                      "  <rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
                      "fill=\"%s\"/>\n",
                      x, y, bar_w, bar_h, fills[i % 4]);
        out << buf;
        std::snprintf(buf, sizeof(buf), value_format, values[i]);
        const std::string label = buf;
        std::snprintf(buf, sizeof(buf),
                      "  <text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\" "
                      "font-family=\"sans-serif\" font-size=\"13\">%s</text>\n",
                      x + bar_w / 2.0, y - 6.0, label.c_str());
        out << buf;
        std::snprintf(buf, sizeof(buf),
                      "  <text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\" "
                      "font-family=\"sans-serif\" font-size=\"13\">%s</text>\n",
                      x + bar_w / 2.0, margin_top + plot_h + 20.0, names[i].c_str());
        out << buf;
    }
    out << "</svg>\n";
    if (!out) {
        throw WriteError(path.string() + ": write failed");
    }
}

}  // namespace

void emit_charts(const Comparison& cmp, const std::filesystem::path& out_dir) {
    if (cmp.per_algorithm.empty()) {
        throw std::invalid_argument("emit_charts: comparison holds no aggregates");
    }
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> names;
    std::vector<double> dices, times;
    for (const auto& s : cmp.per_algorithm) {
        names.push_back(s.algorithm);
        dices.push_back(s.dice.mean);
        times.push_back(s.wall_time_s.mean);
    }
    write_bar_chart(out_dir / "dsc_comparison.svg", "DSC Comparison", names, dices, "%.4f");
    write_bar_chart(out_dir / "runtime_comparison.svg", "Runtime Comparison", names, times,
                    "%.4f s");

    std::ofstream csv(out_dir / "comparison.csv", std::ios::binary);
    if (!csv) {
        throw WriteError((out_dir / "comparison.csv").string() + ": cannot open for writing");
    }
    csv << comparison_csv(cmp);
}

}  // namespace mriseg
