#include "mriseg/image_io.hpp"

#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

namespace mriseg {

namespace {

RawImage read_pgm(std::istream& in, const std::filesystem::path& path) {
    // Header: "P5" <ws> width <ws> height <ws> maxval <single ws> raster.
    // '#' starts a comment running to end of line.
    auto next_token = [&in]() -> std::string {
        std::string tok;
        int ch;
        while ((ch = in.get()) != EOF) {
            if (ch == '#') {
                while ((ch = in.get()) != EOF && ch != '\n') {
                }
                continue;
            }
            if (std::isspace(ch)) {
                if (!tok.empty()) break;
                continue;
            }
            tok.push_back(static_cast<char>(ch));
        }
        return tok;
    };

    const std::string magic = next_token();
    if (magic != "P5") {
        throw UnsupportedFormatError(path.string() + ": not a binary PGM (magic '" + magic + "')");
    }
    long width = 0, height = 0, maxval = 0;
    try {
        width = std::stol(next_token());
        height = std::stol(next_token());
        maxval = std::stol(next_token());
    } catch (const std::exception&) {
        throw MalformedInputError(path.string() + ": unparsable PGM header");
    }
    if (width < 1 || height < 1) {
        throw MalformedInputError(path.string() + ": bad PGM dimensions");
    }
    if (maxval != 255 && maxval != 65535) {
        throw UnsupportedFormatError(path.string() + ": PGM maxval " + std::to_string(maxval) +
                                     " (only 255 and 65535 are supported)");
    }

    RawImage raw;
    raw.width = static_cast<int>(width);
    raw.height = static_cast<int>(height);
    raw.bit_depth = maxval == 255 ? 8 : 16;
    const std::size_t pixels = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    const std::size_t bytes = pixels * (raw.bit_depth / 8);
    std::vector<char> buffer(bytes);
    in.read(buffer.data(), static_cast<std::streamsize>(bytes));
    if (static_cast<std::size_t>(in.gcount()) != bytes) {
        throw MalformedInputError(path.string() + ": truncated PGM raster");
    }
    raw.data.resize(pixels);
    if (raw.bit_depth == 8) {
        for (std::size_t i = 0; i < pixels; ++i) {
            raw.data[i] = static_cast<std::uint8_t>(buffer[i]);
        }
    } else {
        // PGM 16-bit samples are big-endian.
        for (std::size_t i = 0; i < pixels; ++i) {
            const auto hi = static_cast<std::uint8_t>(buffer[2 * i]);
            const auto lo = static_cast<std::uint8_t>(buffer[2 * i + 1]);
            raw.data[i] = static_cast<std::uint16_t>((hi << 8) | lo);
        }
    }
    return raw;
}

struct PngReadCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* file = nullptr;
    ~PngReadCloser() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (file) std::fclose(file);
    }
};

RawImage read_png(const std::filesystem::path& path) {
    PngReadCloser ctx;
    ctx.file = std::fopen(path.string().c_str(), "rb");
    if (!ctx.file) {
        throw FileNotFoundError(path.string() + ": cannot open");
    }
    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) throw IoError("libpng: read struct allocation failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw IoError("libpng: info struct allocation failed");
    if (setjmp(png_jmpbuf(ctx.png))) {
        throw MalformedInputError(path.string() + ": PNG decode failed");
    }
    png_init_io(ctx.png, ctx.file);
    png_read_info(ctx.png, ctx.info);

    const png_byte color_type = png_get_color_type(ctx.png, ctx.info);
    const png_byte bit_depth = png_get_bit_depth(ctx.png, ctx.info);
    if (color_type != PNG_COLOR_TYPE_GRAY) {
        throw UnsupportedFormatError(path.string() + ": only grayscale PNG is supported");
    }
    if (bit_depth != 8 && bit_depth != 16) {
        throw UnsupportedFormatError(path.string() + ": PNG bit depth " +
                                     std::to_string(bit_depth) + " (only 8 and 16 are supported)");
    }

    RawImage raw;
    raw.width = static_cast<int>(png_get_image_width(ctx.png, ctx.info));
    raw.height = static_cast<int>(png_get_image_height(ctx.png, ctx.info));
    raw.bit_depth = bit_depth;
    const std::size_t row_bytes = png_get_rowbytes(ctx.png, ctx.info);
    std::vector<std::uint8_t> row(row_bytes);
    raw.data.resize(static_cast<std::size_t>(raw.width) * raw.height);
    for (int y = 0; y < raw.height; ++y) {
        png_read_row(ctx.png, row.data(), nullptr);
        for (int x = 0; x < raw.width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * raw.width + x;
            if (bit_depth == 8) {
                raw.data[i] = row[static_cast<std::size_t>(x)];
            } else {
                // PNG 16-bit samples are big-endian.
                raw.data[i] = static_cast<std::uint16_t>(
                    (row[static_cast<std::size_t>(2 * x)] << 8) | row[static_cast<std::size_t>(2 * x + 1)]);
            }
        }
    }
    return raw;
}

void write_pgm(const RawImage& raw, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw WriteError(path.string() + ": cannot open for writing");
    }
    out << "P5\n" << raw.width << " " << raw.height << "\n"
        << (raw.bit_depth == 8 ? 255 : 65535) << "\n";
    for (std::uint16_t v : raw.data) {
        if (raw.bit_depth == 8) {
            out.put(static_cast<char>(v & 0xFF));
        } else {
            out.put(static_cast<char>((v >> 8) & 0xFF));
            out.put(static_cast<char>(v & 0xFF));
        }
    }
    if (!out) {
        throw WriteError(path.string() + ": write failed");
    }
}

struct PngWriteCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* file = nullptr;
    ~PngWriteCloser() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        if (file) std::fclose(file);
    }
};

void write_png(const RawImage& raw, const std::filesystem::path& path) {
    PngWriteCloser ctx;
    ctx.file = std::fopen(path.string().c_str(), "wb");
    if (!ctx.file) {
        throw WriteError(path.string() + ": cannot open for writing");
    }
    ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) throw IoError("libpng: write struct allocation failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw IoError("libpng: info struct allocation failed");
    if (setjmp(png_jmpbuf(ctx.png))) {
        throw WriteError(path.string() + ": PNG encode failed");
    }
    png_init_io(ctx.png, ctx.file);
    png_set_IHDR(ctx.png, ctx.info, static_cast<png_uint_32>(raw.width),
                 static_cast<png_uint_32>(raw.height), raw.bit_depth, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);

    const int bytes_per_sample = raw.bit_depth / 8;
    std::vector<std::uint8_t> row(static_cast<std::size_t>(raw.width) * bytes_per_sample);
    for (int y = 0; y < raw.height; ++y) {
        for (int x = 0; x < raw.width; ++x) {
            const std::uint16_t v = raw.data[static_cast<std::size_t>(y) * raw.width + x];
            if (raw.bit_depth == 8) {
                row[static_cast<std::size_t>(x)] = static_cast<std::uint8_t>(v);
            } else {
                row[static_cast<std::size_t>(2 * x)] = static_cast<std::uint8_t>(v >> 8);
                row[static_cast<std::size_t>(2 * x + 1)] = static_cast<std::uint8_t>(v & 0xFF);
            }
        }
        png_write_row(ctx.png, row.data());
    }
    png_write_end(ctx.png, ctx.info);
}

bool wants_png(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    for (auto& c : ext) c = static_cast<char>(std::tolower(c));
    return ext == ".png";
}

}  // namespace

GrayImage read_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FileNotFoundError(path.string() + ": cannot open");
    }
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (in.gcount() != 2) {
        throw MalformedInputError(path.string() + ": file too short");
    }
    in.seekg(0);
    if (magic[0] == 'P' && magic[1] == '5') {
        return normalize(read_pgm(in, path));
    }
    if (static_cast<unsigned char>(magic[0]) == 0x89 && magic[1] == 'P') {
        in.close();
        return normalize(read_png(path));
    }
    throw UnsupportedFormatError(path.string() + ": unrecognized format");
}

void write_image(const GrayImage& img, const std::filesystem::path& path, BitDepth depth) {
    RawImage raw;
    raw.width = img.width();
    raw.height = img.height();
    raw.bit_depth = static_cast<int>(depth);
    const double full_scale = depth == BitDepth::Eight ? 255.0 : 65535.0;
    raw.data.resize(img.size());
    const auto pixels = img.pixels();
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        raw.data[i] = static_cast<std::uint16_t>(std::lround(pixels[i] * full_scale));
    }
    if (wants_png(path)) {
        write_png(raw, path);
    } else {
        write_pgm(raw, path);
    }
}

void write_labelmap(const LabelMap& labels, const std::filesystem::path& path,
                    std::span<const std::uint8_t> palette) {
    const std::size_t k = labels.num_clusters();
    std::vector<std::uint8_t> levels;
    if (palette.empty()) {
        levels.resize(k);
        for (std::size_t j = 0; j < k; ++j) {
            levels[j] = k == 1 ? 255
                               : static_cast<std::uint8_t>(std::lround(
                                     255.0 * static_cast<double>(j) / static_cast<double>(k - 1)));
        }
    } else {
        if (palette.size() != k) {
            throw std::invalid_argument("write_labelmap: palette must hold one level per cluster");
        }
        levels.assign(palette.begin(), palette.end());
    }

    RawImage raw;
    raw.width = labels.width();
    raw.height = labels.height();
    raw.bit_depth = 8;
    raw.data.resize(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        raw.data[i] = levels[static_cast<std::size_t>(labels.at(i))];
    }
    if (wants_png(path)) {
        write_png(raw, path);
    } else {
        write_pgm(raw, path);
    }
}

}  // namespace mriseg
