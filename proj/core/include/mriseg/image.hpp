#ifndef MRISEG_IMAGE_HPP
#define MRISEG_IMAGE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mriseg {

/// 2-D grayscale raster with row-major intensities normalized to [0,1].
class GrayImage {
public:
    GrayImage(int width, int height, std::vector<double> data);

    static GrayImage filled(int width, int height, double value);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return data_.size(); }

    double at(int row, int col) const { return data_[index(row, col)]; }
    double& at(int row, int col) { return data_[index(row, col)]; }

    std::span<const double> pixels() const { return data_; }
    std::span<double> pixels() { return data_; }

    double mean() const;
    double variance() const;  // population variance
    double min() const;
    double max() const;

private:
    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(col);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

/// Row-major boolean mask; same dimensions as the image it annotates.
class BinaryMask {
public:
    BinaryMask(int width, int height, std::vector<std::uint8_t> data);

    static BinaryMask filled(int width, int height, bool value);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return data_.size(); }

    bool at(int row, int col) const { return data_[index(row, col)] != 0; }
    void set(int row, int col, bool value) { data_[index(row, col)] = value ? 1 : 0; }

    /// Number of true pixels.
    std::size_t count() const;

    std::span<const std::uint8_t> raw() const { return data_; }

    bool operator==(const BinaryMask&) const = default;

private:
    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(col);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Per-pixel hard cluster assignment for a model with num_clusters clusters.
class LabelMap {
public:
    LabelMap(int width, int height, std::size_t num_clusters, std::vector<int> labels);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t num_clusters() const { return num_clusters_; }
    std::size_t size() const { return labels_.size(); }

    int at(int row, int col) const { return labels_[index(row, col)]; }
    int at(std::size_t i) const { return labels_[i]; }

    std::span<const int> labels() const { return labels_; }

    bool operator==(const LabelMap&) const = default;

private:
    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(col);
    }

    int width_ = 0;
    int height_ = 0;
    std::size_t num_clusters_ = 0;
    std::vector<int> labels_;
};

/// Integer raster as decoded from an 8- or 16-bit grayscale file.
struct RawImage {
    int width = 0;
    int height = 0;
    int bit_depth = 8;  // 8 or 16
    std::vector<std::uint16_t> data;
};

/// Scales raw integer samples into [0,1] by dividing by 2^bit_depth - 1.
GrayImage normalize(const RawImage& raw);

/// True exactly where the label equals the requested cluster.
BinaryMask mask_from_labels(const LabelMap& labels, std::size_t cluster);

}  // namespace mriseg

#endif
