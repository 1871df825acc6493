#include "mriseg/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mriseg/rng.hpp"

namespace mriseg {

void validate_params(const KMeansConfig& c) {
    if (c.k < 1) throw std::invalid_argument("KMeansConfig: k must be at least 1");
    if (c.max_iter < 1) throw std::invalid_argument("KMeansConfig: max_iter must be at least 1");
    if (c.tol < 0.0) throw std::invalid_argument("KMeansConfig: tol must be nonnegative");
    if (c.restarts < 1) throw std::invalid_argument("KMeansConfig: restarts must be at least 1");
}

namespace {

void validate(const GrayImage& img, const KMeansConfig& c) {
    validate_params(c);
    if (c.k > img.size()) {
        throw std::invalid_argument("KMeansConfig: k=" + std::to_string(c.k) +
                                    " exceeds pixel count " + std::to_string(img.size()));
    }
}

std::vector<double> init_random_pixels(const GrayImage& img, std::size_t k, Rng& rng) {
    std::vector<double> unique(img.pixels().begin(), img.pixels().end());
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

    if (unique.size() >= k) {
        // Partial Fisher-Yates over the sorted unique values.
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + rng.next_below(unique.size() - i);
            std::swap(unique[i], unique[j]);
        }
        unique.resize(k);
        return unique;
    }

    // Fewer distinct values than clusters: fall back to distinct pixel
    // indices; duplicate-valued centroids are repaired during updates.
    std::vector<std::size_t> indices(img.size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    std::vector<double> centroids(k);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.next_below(indices.size() - i);
        std::swap(indices[i], indices[j]);
        centroids[i] = img.pixels()[indices[i]];
    }
    return centroids;
}

std::vector<double> init_plus_plus(const GrayImage& img, std::size_t k, Rng& rng) {
    const auto pixels = img.pixels();
    std::vector<double> centroids;
    centroids.reserve(k);
    centroids.push_back(pixels[rng.next_below(pixels.size())]);

    std::vector<double> dist2(pixels.size());
    while (centroids.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < pixels.size(); ++i) {
            double best = std::numeric_limits<double>::max();
            for (double c : centroids) {
                const double d = pixels[i] - c;
                best = std::min(best, d * d);
            }
            dist2[i] = best;
            total += best;
        }
        if (total <= 0.0) {
            // All pixels coincide with existing centroids; draw uniformly.
            centroids.push_back(pixels[rng.next_below(pixels.size())]);
            continue;
        }
        const double target = rng.uniform() * total;
        double cum = 0.0;
        std::size_t chosen = pixels.size() - 1;
        for (std::size_t i = 0; i < pixels.size(); ++i) {
            cum += dist2[i];
            if (cum >= target) {
                chosen = i;
                break;
            }
        }
        centroids.push_back(pixels[chosen]);
    }
    return centroids;
}

std::vector<double> init_with_seed(const GrayImage& img, const KMeansConfig& config,
                                   std::uint64_t seed) {
    Rng rng(seed);
    return config.init == KMeansInit::RandomPixels ? init_random_pixels(img, config.k, rng)
                                                   : init_plus_plus(img, config.k, rng);
}

KMeansResult run_once(const GrayImage& img, const KMeansConfig& config, std::uint64_t seed,
                      int restart, const KMeansObserver& observer) {
    std::vector<double> centroids = init_with_seed(img, config, seed);
    LabelMap labels = kmeans_assign(img, centroids);
    double objective = kmeans_objective(img, labels, centroids);

    int iterations = 0;
    for (int iter = 1; iter <= config.max_iter; ++iter) {
        const std::vector<double> updated = kmeans_update(img, labels, centroids);
        double shift = 0.0;
        for (std::size_t j = 0; j < centroids.size(); ++j) {
            shift = std::max(shift, std::abs(updated[j] - centroids[j]));
        }
        centroids = updated;
        labels = kmeans_assign(img, centroids);
        objective = kmeans_objective(img, labels, centroids);
        iterations = iter;
        if (observer) observer({restart, iter, centroids, objective});
        if (shift < config.tol) break;
    }

    ClusterModel model;
    model.centroids = std::move(centroids);
    model.objective = objective;
    model.iterations = iterations;
    model.params = ClusterParams{config.k, 0.0, config.seed, config.tol, config.max_iter};
    return KMeansResult{std::move(model), std::move(labels)};
}

}  // namespace

std::vector<double> kmeans_init(const GrayImage& img, const KMeansConfig& config) {
    validate(img, config);
    return init_with_seed(img, config, config.seed);
}

LabelMap kmeans_assign(const GrayImage& img, std::span<const double> centroids) {
    if (centroids.empty()) {
        throw std::invalid_argument("kmeans_assign: centroid list is empty");
    }
    std::vector<int> labels(img.size());
    const auto pixels = img.pixels();
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        int best = 0;
        double best_d = std::numeric_limits<double>::max();
        for (std::size_t j = 0; j < centroids.size(); ++j) {
            const double d = pixels[i] - centroids[j];
            const double d2 = d * d;
            if (d2 < best_d) {
                best_d = d2;
                best = static_cast<int>(j);
            }
        }
        labels[i] = best;
    }
    return LabelMap(img.width(), img.height(), centroids.size(), std::move(labels));
}

std::vector<double> kmeans_update(const GrayImage& img, const LabelMap& labels,
                                  std::span<const double> previous) {
    const std::size_t k = previous.size();
    if (labels.num_clusters() != k) {
        throw std::invalid_argument("kmeans_update: label map does not match centroid count");
    }
    std::vector<double> sum(k, 0.0);
    std::vector<std::size_t> count(k, 0);
    const auto pixels = img.pixels();
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        const auto j = static_cast<std::size_t>(labels.at(i));
        sum[j] += pixels[i];
        count[j] += 1;
    }
    std::vector<double> centroids(k);
    for (std::size_t j = 0; j < k; ++j) {
        if (count[j] > 0) {
            centroids[j] = sum[j] / static_cast<double>(count[j]);
        } else {
            // Relocate to the pixel farthest from the previous position.
            double best_d = -1.0;
            double best_v = previous[j];
            for (double v : pixels) {
                const double d = std::abs(v - previous[j]);
                if (d > best_d) {
                    best_d = d;
                    best_v = v;
                }
            }
            centroids[j] = best_v;
        }
    }
    return centroids;
}

double kmeans_objective(const GrayImage& img, const LabelMap& labels,
                        std::span<const double> centroids) {
    if (labels.num_clusters() != centroids.size() || labels.size() != img.size()) {
        throw std::invalid_argument("kmeans_objective: inconsistent shapes");
    }
    double j_total = 0.0;
    const auto pixels = img.pixels();
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        const double d = pixels[i] - centroids[static_cast<std::size_t>(labels.at(i))];
        j_total += d * d;
    }
    return j_total;
}

KMeansResult kmeans_run(const GrayImage& img, const KMeansConfig& config,
                        const KMeansObserver& observer) {
    validate(img, config);
    KMeansResult best = run_once(img, config, config.seed, 0, observer);
    for (int r = 1; r < config.restarts; ++r) {
        const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(r) * 0x9E3779B97F4A7C15ULL;
        KMeansResult candidate = run_once(img, config, seed, r, observer);
        if (candidate.model.objective < best.model.objective) {
            best = std::move(candidate);
        }
    }
    return best;
}

}  // namespace mriseg
