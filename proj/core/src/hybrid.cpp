#include "mriseg/hybrid.hpp"

#include <algorithm>
#include <stdexcept>

namespace mriseg {

void validate_params(const HybridConfig& c) {
    validate_params(c.kmeans);
    validate_params(c.fcm);
    if (c.kmeans.k != c.fcm.c) {
        throw std::invalid_argument("HybridConfig: kmeans.k must equal fcm.c");
    }
    if (!(c.spatial_weight >= 0.0 && c.spatial_weight <= 1.0)) {
        throw std::invalid_argument("HybridConfig: spatial_weight must lie in [0,1]");
    }
    if (c.window < 1) {
        throw std::invalid_argument("HybridConfig: window must be at least 1");
    }
}

MembershipMatrix spatial_regularize(const MembershipMatrix& memberships, int width, int height,
                                    double alpha, int window) {
    if (memberships.rows() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw std::invalid_argument("spatial_regularize: membership rows do not match dimensions");
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("spatial_regularize: alpha must lie in [0,1]");
    }
    if (window < 1) {
        throw std::invalid_argument("spatial_regularize: window must be at least 1");
    }
    if (alpha == 0.0) {
        return memberships;  // exact identity, required by the hybrid reduction
    }

    const std::size_t c = memberships.clusters();
    const double inv_area = 1.0 / ((2.0 * window + 1.0) * (2.0 * window + 1.0));
    std::vector<double> values(memberships.rows() * c);
    for (int row = 0; row < height; ++row) {
        for (int col = 0; col < width; ++col) {
            const std::size_t i =
                static_cast<std::size_t>(row) * static_cast<std::size_t>(width) + col;
            double row_sum = 0.0;
            for (std::size_t j = 0; j < c; ++j) {
                double acc = 0.0;
                for (int dy = -window; dy <= window; ++dy) {
                    const int r = std::clamp(row + dy, 0, height - 1);
                    for (int dx = -window; dx <= window; ++dx) {
                        const int cc = std::clamp(col + dx, 0, width - 1);
                        acc += memberships.at(
                            static_cast<std::size_t>(r) * static_cast<std::size_t>(width) + cc, j);
                    }
                }
                const double blended =
                    (1.0 - alpha) * memberships.at(i, j) + alpha * acc * inv_area;
                values[i * c + j] = blended;
                row_sum += blended;
            }
            for (std::size_t j = 0; j < c; ++j) values[i * c + j] /= row_sum;
        }
    }
    return MembershipMatrix(memberships.rows(), c, std::move(values));
}

HybridResult hybrid_run(const GrayImage& img, const HybridConfig& config,
                        const FcmObserver& observer) {
    validate_params(config);
    const KMeansResult seeded = kmeans_run(img, config.kmeans);
    MembershipMatrix initial = fcm_memberships(img, seeded.model.centroids, config.fcm.m);

    detail::MembershipTransform transform;
    if (config.regularize_each_iteration) {
        const double alpha = config.spatial_weight;
        const int window = config.window;
        const int w = img.width();
        const int h = img.height();
        transform = [alpha, window, w, h](MembershipMatrix& u) {
            u = spatial_regularize(u, w, h, alpha, window);
        };
    }

    const ClusterParams echo{config.fcm.c, config.fcm.m, config.fcm.seed, config.fcm.tol,
                             config.fcm.max_iter};
    FcmResult refined = detail::fcm_alternate(img, std::move(initial), config.fcm.m,
                                              config.fcm.tol, config.fcm.max_iter, transform,
                                              observer, echo);
    if (!config.regularize_each_iteration) {
        refined.memberships = spatial_regularize(refined.memberships, img.width(), img.height(),
                                                 config.spatial_weight, config.window);
    }
    LabelMap labels = defuzzify(refined.memberships, img.width(), img.height());
    return HybridResult{std::move(refined.model), std::move(refined.memberships),
                        std::move(labels)};
}

}  // namespace mriseg
