#include "mriseg/image.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mriseg {

namespace {

void check_dims(int width, int height, std::size_t data_size, const char* what) {
    if (width < 1 || height < 1) {
        throw std::invalid_argument(std::string(what) + ": dimensions must be at least 1x1");
    }
    const auto expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (data_size != expected) {
        throw std::invalid_argument(std::string(what) + ": data length " +
                                    std::to_string(data_size) + " does not match " +
                                    std::to_string(width) + "x" + std::to_string(height));
    }
}

}  // namespace

GrayImage::GrayImage(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width_, height_, data_.size(), "GrayImage");
    for (double v : data_) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::invalid_argument("GrayImage: intensity " + std::to_string(v) +
                                        " outside [0,1]");
        }
    }
}

GrayImage GrayImage::filled(int width, int height, double value) {
    return GrayImage(width, height,
                     std::vector<double>(static_cast<std::size_t>(width) * height, value));
}

double GrayImage::mean() const {
    double sum = 0.0;
    for (double v : data_) sum += v;
    return sum / static_cast<double>(data_.size());
}

double GrayImage::variance() const {
    const double mu = mean();
    double sum = 0.0;
    for (double v : data_) {
        const double d = v - mu;
        sum += d * d;
    }
    return sum / static_cast<double>(data_.size());
}

double GrayImage::min() const { return *std::min_element(data_.begin(), data_.end()); }

double GrayImage::max() const { return *std::max_element(data_.begin(), data_.end()); }

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width_, height_, data_.size(), "BinaryMask");
    for (auto& v : data_) v = v ? 1 : 0;
}

BinaryMask BinaryMask::filled(int width, int height, bool value) {
    return BinaryMask(width, height,
                      std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height,
                                                value ? 1 : 0));
}

std::size_t BinaryMask::count() const {
    std::size_t n = 0;
    for (auto v : data_) n += v;
    return n;
}

LabelMap::LabelMap(int width, int height, std::size_t num_clusters, std::vector<int> labels)
    : width_(width), height_(height), num_clusters_(num_clusters), labels_(std::move(labels)) {
    check_dims(width_, height_, labels_.size(), "LabelMap");
    if (num_clusters_ < 1) {
        throw std::invalid_argument("LabelMap: need at least one cluster");
    }
    for (int l : labels_) {
        if (l < 0 || static_cast<std::size_t>(l) >= num_clusters_) {
            throw std::invalid_argument("LabelMap: label " + std::to_string(l) +
                                        " outside [0," + std::to_string(num_clusters_) + ")");
        }
    }
}

GrayImage normalize(const RawImage& raw) {
    if (raw.width < 1 || raw.height < 1 || raw.data.empty()) {
        throw std::invalid_argument("normalize: empty raster");
    }
    if (raw.bit_depth != 8 && raw.bit_depth != 16) {
        throw std::invalid_argument("normalize: bit depth must be 8 or 16, got " +
                                    std::to_string(raw.bit_depth));
    }
    const auto expected =
        static_cast<std::size_t>(raw.width) * static_cast<std::size_t>(raw.height);
    if (raw.data.size() != expected) {
        throw std::invalid_argument("normalize: raster size mismatch");
    }
    const double full_scale = raw.bit_depth == 8 ? 255.0 : 65535.0;
    std::vector<double> out(raw.data.size());
    for (std::size_t i = 0; i < raw.data.size(); ++i) {
        if (raw.bit_depth == 8 && raw.data[i] > 255) {
            throw std::invalid_argument("normalize: 8-bit sample exceeds 255");
        }
        out[i] = static_cast<double>(raw.data[i]) / full_scale;
    }
    return GrayImage(raw.width, raw.height, std::move(out));
}

BinaryMask mask_from_labels(const LabelMap& labels, std::size_t cluster) {
    if (cluster >= labels.num_clusters()) {
        throw std::out_of_range("mask_from_labels: cluster " + std::to_string(cluster) +
                                " out of range for " + std::to_string(labels.num_clusters()) +
                                " clusters");
    }
    std::vector<std::uint8_t> mask(labels.size());
    const auto lbls = labels.labels();
    for (std::size_t i = 0; i < lbls.size(); ++i) {
        mask[i] = static_cast<std::size_t>(lbls[i]) == cluster ? 1 : 0;
    }
    return BinaryMask(labels.width(), labels.height(), std::move(mask));
}

}  // namespace mriseg
