#ifndef MRISEG_IMAGE_IO_HPP
#define MRISEG_IMAGE_IO_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>

#include "mriseg/image.hpp"

namespace mriseg {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The path does not exist or cannot be opened.
class FileNotFoundError : public IoError {
public:
    using IoError::IoError;
};

/// Recognized format with a broken header or truncated payload.
class MalformedInputError : public IoError {
public:
    using IoError::IoError;
};

/// Not a binary PGM or an 8/16-bit grayscale PNG.
class UnsupportedFormatError : public IoError {
public:
    using IoError::IoError;
};

/// Failure writing to the target path.
class WriteError : public IoError {
public:
    using IoError::IoError;
};

enum class BitDepth : int { Eight = 8, Sixteen = 16 };

/// Decodes a binary PGM (P5, maxval 255 or 65535) or an 8/16-bit grayscale
/// PNG and normalizes it to [0,1]. The format is detected from the file's
/// magic bytes, not its extension.
GrayImage read_image(const std::filesystem::path& path);

/// Quantizes to the requested depth and writes PGM or PNG depending on the
/// path extension (.pgm default).
void write_image(const GrayImage& img, const std::filesystem::path& path,
                 BitDepth depth = BitDepth::Eight);

/// Writes labels as an 8-bit image with evenly spaced gray levels,
/// level_j = round(255*j/(k-1)) (255 when k == 1). A custom palette of k
/// gray levels may be supplied instead.
void write_labelmap(const LabelMap& labels, const std::filesystem::path& path,
                    std::span<const std::uint8_t> palette = {});

}  // namespace mriseg

#endif
