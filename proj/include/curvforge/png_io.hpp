#pragma once

// PNG persistence for masks and gray images. Masks are stored as 8-bit gray
// with foreground 255; colour inputs are reduced to gray with Rec.601 luma
// weights (0.299, 0.587, 0.114).

#include <png.h>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "curvforge/errors.hpp"
#include "curvforge/image.hpp"

namespace curvforge {

namespace png_detail {

inline void append_bytes(png_structp png, png_bytep data, png_size_t length) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + length);
}

inline void no_flush(png_structp) {}

inline std::vector<std::uint8_t> encode_gray(int width, int height, std::span<const std::uint8_t> pixels) {
    std::vector<std::uint8_t> buffer;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png: cannot allocate writer");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png: cannot allocate writer info");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("png: encoding failed");
    }
    png_set_write_fn(png, &buffer, append_bytes, no_flush);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 6);
    png_write_info(png, info);
    for (int y = 0; y < height; ++y)
        png_write_row(png, const_cast<png_bytep>(pixels.data() + static_cast<std::size_t>(y) * width));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return buffer;
}

}  // namespace png_detail

/// Writes `bytes` to a sibling temporary file and renames it over `path`, so
/// readers never observe a partial file.
inline void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw IoError("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

inline void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

inline std::vector<std::uint8_t> encode_png(const GrayImage& img) {
    return png_detail::encode_gray(img.width(), img.height(), img.data());
}

inline std::vector<std::uint8_t> encode_png(const Mask& m) {
    std::vector<std::uint8_t> pixels(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) pixels[i] = m.data()[i] ? 255 : 0;
    return png_detail::encode_gray(m.width(), m.height(), pixels);
}

template <typename Raster>
void save_png(const std::filesystem::path& path, const Raster& img) {
    write_file_atomic(path, encode_png(img));
}

inline GrayImage load_gray_png(const std::filesystem::path& path) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str()))
        throw IoError("cannot read PNG " + path.string() + ": " + image.message);
    const bool colour = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    image.format = colour ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
        png_image_free(&image);
        throw IoError("cannot decode PNG " + path.string() + ": " + image.message);
    }
    const int w = static_cast<int>(image.width), h = static_cast<int>(image.height);
    if (!colour) return GrayImage(w, h, std::move(buffer));
    GrayImage out(w, h);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const unsigned r = buffer[3 * i], g = buffer[3 * i + 1], b = buffer[3 * i + 2];
        out.data()[i] = static_cast<std::uint8_t>((299 * r + 587 * g + 114 * b + 500) / 1000);
    }
    return out;
}

/// Pixels >= 128 are foreground.
inline Mask load_mask_png(const std::filesystem::path& path) {
    const GrayImage g = load_gray_png(path);
    Mask m(g.width(), g.height());
    for (std::size_t i = 0; i < g.size(); ++i) m.data()[i] = g.data()[i] >= 128 ? 1 : 0;
    return m;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace curvforge
