#include "mriseg/fcm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mriseg/kmeans.hpp"
#include "mriseg/rng.hpp"

namespace mriseg {

void validate_params(const FcmConfig& c) {
    if (c.c < 1) throw std::invalid_argument("FcmConfig: c must be at least 1");
    if (!(c.m > 1.0)) throw std::invalid_argument("FcmConfig: fuzzifier m must exceed 1");
    if (c.max_iter < 1) throw std::invalid_argument("FcmConfig: max_iter must be at least 1");
    if (c.tol < 0.0) throw std::invalid_argument("FcmConfig: tol must be nonnegative");
}

namespace {

MembershipMatrix random_memberships(std::size_t n, std::size_t c, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> values(n * c);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < c; ++j) {
            const double v = 1.0 - rng.uniform();  // (0,1], keeps rows normalizable
            values[i * c + j] = v;
            sum += v;
        }
        for (std::size_t j = 0; j < c; ++j) values[i * c + j] /= sum;
    }
    return MembershipMatrix(n, c, std::move(values));
}

}  // namespace

MembershipMatrix::MembershipMatrix(std::size_t n, std::size_t c, std::vector<double> values)
    : n_(n), c_(c), values_(std::move(values)) {
    if (n_ < 1 || c_ < 1) {
        throw std::invalid_argument("MembershipMatrix: empty shape");
    }
    if (values_.size() != n_ * c_) {
        throw std::invalid_argument("MembershipMatrix: value count does not match shape");
    }
}

MembershipMatrix MembershipMatrix::uniform(std::size_t n, std::size_t c) {
    return MembershipMatrix(n, c, std::vector<double>(n * c, 1.0 / static_cast<double>(c)));
}

double MembershipMatrix::max_abs_diff(const MembershipMatrix& other) const {
    if (other.n_ != n_ || other.c_ != c_) {
        throw std::invalid_argument("MembershipMatrix: shape mismatch");
    }
    double d = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        d = std::max(d, std::abs(values_[i] - other.values_[i]));
    }
    return d;
}

bool MembershipMatrix::is_row_stochastic(double tol) const {
    for (std::size_t i = 0; i < n_; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < c_; ++j) {
            const double u = at(i, j);
            if (!(u >= 0.0 && u <= 1.0)) return false;
            sum += u;
        }
        if (std::abs(sum - 1.0) > tol) return false;
    }
    return true;
}

MembershipMatrix fcm_memberships(const GrayImage& img, std::span<const double> centroids,
                                 double m) {
    if (centroids.empty()) {
        throw std::invalid_argument("fcm_memberships: centroid list is empty");
    }
    if (!(m > 1.0)) {
        throw std::invalid_argument("fcm_memberships: fuzzifier m must exceed 1");
    }
    const std::size_t n = img.size();
    const std::size_t c = centroids.size();
    const double exponent = 2.0 / (m - 1.0);
    std::vector<double> values(n * c, 0.0);
    std::vector<double> dist(c);
    const auto pixels = img.pixels();
    for (std::size_t i = 0; i < n; ++i) {
        double d_min = std::numeric_limits<double>::max();
        for (std::size_t j = 0; j < c; ++j) {
            dist[j] = std::abs(pixels[i] - centroids[j]);
            d_min = std::min(d_min, dist[j]);
        }
        if (d_min == 0.0) {
            // Singularity: full membership split over coincident centroids.
            std::size_t coincident = 0;
            for (std::size_t j = 0; j < c; ++j) coincident += dist[j] == 0.0 ? 1 : 0;
            const double share = 1.0 / static_cast<double>(coincident);
            for (std::size_t j = 0; j < c; ++j) {
                values[i * c + j] = dist[j] == 0.0 ? share : 0.0;
            }
            continue;
        }
        // u_ij = (d_min/d_ij)^p / sum_k (d_min/d_ik)^p; every ratio is <= 1,
        // so the weights cannot overflow for small distances.
        double sum = 0.0;
        for (std::size_t j = 0; j < c; ++j) {
            const double w = std::pow(d_min / dist[j], exponent);
            values[i * c + j] = w;
            sum += w;
        }
        for (std::size_t j = 0; j < c; ++j) values[i * c + j] /= sum;
    }
    return MembershipMatrix(n, c, std::move(values));
}

std::vector<double> fcm_centroids(const GrayImage& img, const MembershipMatrix& memberships,
                                  double m) {
    if (memberships.rows() != img.size()) {
        throw std::invalid_argument("fcm_centroids: membership rows do not match pixel count");
    }
    const std::size_t c = memberships.clusters();
    std::vector<double> num(c, 0.0);
    std::vector<double> den(c, 0.0);
    const auto pixels = img.pixels();
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            const double um = std::pow(memberships.at(i, j), m);
            num[j] += um * pixels[i];
            den[j] += um;
        }
    }
    std::vector<double> centroids(c);
    for (std::size_t j = 0; j < c; ++j) {
        if (den[j] == 0.0) {
            throw std::logic_error("fcm_centroids: cluster " + std::to_string(j) +
                                   " has all-zero membership");
        }
        centroids[j] = num[j] / den[j];
    }
    return centroids;
}

double fcm_objective(const GrayImage& img, const MembershipMatrix& memberships,
                     std::span<const double> centroids, double m) {
    if (memberships.rows() != img.size() || memberships.clusters() != centroids.size()) {
        throw std::invalid_argument("fcm_objective: inconsistent shapes");
    }
    double j_total = 0.0;
    const auto pixels = img.pixels();
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        for (std::size_t j = 0; j < centroids.size(); ++j) {
            const double d = pixels[i] - centroids[j];
            j_total += std::pow(memberships.at(i, j), m) * d * d;
        }
    }
    return j_total;
}

namespace detail {

FcmResult fcm_alternate(const GrayImage& img, MembershipMatrix initial, double m, double tol,
                        int max_iter, const MembershipTransform& transform,
                        const FcmObserver& observer, const ClusterParams& echo) {
    MembershipMatrix memberships = std::move(initial);
    std::vector<double> centroids;
    double objective = 0.0;
    int iterations = 0;
    for (int iter = 1; iter <= max_iter; ++iter) {
        centroids = fcm_centroids(img, memberships, m);
        MembershipMatrix updated = fcm_memberships(img, centroids, m);
        if (transform) transform(updated);
        objective = fcm_objective(img, updated, centroids, m);
        const double delta = updated.max_abs_diff(memberships);
        memberships = std::move(updated);
        iterations = iter;
        if (observer) observer({iter, memberships, centroids, objective, delta});
        if (delta < tol) break;
    }
    ClusterModel model;
    model.centroids = std::move(centroids);
    model.objective = objective;
    model.iterations = iterations;
    model.params = echo;
    return FcmResult{std::move(model), std::move(memberships)};
}

}  // namespace detail

FcmResult fcm_run(const GrayImage& img, const FcmConfig& config, const FcmObserver& observer) {
    validate_params(config);
    const ClusterParams echo{config.c, config.m, config.seed, config.tol, config.max_iter};

    MembershipMatrix initial = [&]() -> MembershipMatrix {
        switch (config.init) {
            case FcmInit::RandomMemberships:
                return random_memberships(img.size(), config.c, config.seed);
            case FcmInit::CentroidsFromKMeans: {
                KMeansConfig km;
                km.k = config.c;
                km.seed = config.seed;
                const KMeansResult seeded = kmeans_run(img, km);
                return fcm_memberships(img, seeded.model.centroids, config.m);
            }
            case FcmInit::GivenCentroids:
                if (config.initial_centroids.size() != config.c) {
                    throw std::invalid_argument(
                        "FcmConfig: initial_centroids must hold exactly c values");
                }
                return fcm_memberships(img, config.initial_centroids, config.m);
        }
        throw std::invalid_argument("FcmConfig: unknown init mode");
    }();

    return detail::fcm_alternate(img, std::move(initial), config.m, config.tol, config.max_iter,
                                 {}, observer, echo);
}

LabelMap defuzzify(const MembershipMatrix& memberships, int width, int height) {
    if (memberships.rows() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw std::invalid_argument("defuzzify: membership rows do not match dimensions");
    }
    std::vector<int> labels(memberships.rows());
    for (std::size_t i = 0; i < memberships.rows(); ++i) {
        std::size_t best = 0;
        double best_u = memberships.at(i, 0);
        for (std::size_t j = 1; j < memberships.clusters(); ++j) {
            if (memberships.at(i, j) > best_u) {
                best_u = memberships.at(i, j);
                best = j;
            }
        }
        labels[i] = static_cast<int>(best);
    }
    return LabelMap(width, height, memberships.clusters(), std::move(labels));
}

}  // namespace mriseg
