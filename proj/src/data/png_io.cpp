#include "tacgap/data/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <memory>

#include "tacgap/errors.hpp"

namespace tacgap::data {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void fail(const std::filesystem::path& path, const char* what) {
    throw DataError(std::string(what) + ": " + path.string());
}

void write_png(const std::filesystem::path& path, int width, int height, int bit_depth,
               int color_type, const std::vector<png_bytep>& rows) {
    FilePtr fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) fail(path, "cannot open for writing");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        fail(path, "libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail(path, "png write error");
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    if (bit_depth == 16) png_set_swap(png);  // we keep host (little) endian in memory
    png_write_image(png, const_cast<png_bytepp>(rows.data()));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FilePtr fp;

    explicit PngReader(const std::filesystem::path& path) {
        fp = FilePtr(std::fopen(path.string().c_str(), "rb"));
        if (!fp) fail(path, "cannot open");
        png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        info = png ? png_create_info_struct(png) : nullptr;
        if (!png || !info) {
            png_destroy_read_struct(&png, &info, nullptr);
            fail(path, "libpng init failed");
        }
    }
    ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
};

}  // namespace

void write_rgb8_png(const std::filesystem::path& path, const RawImage& img) {
    if (img.channels != 3) throw DataError("write_rgb8_png expects 3 channels");
    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y)
        rows[y] = const_cast<png_bytep>(img.pixels.data() + static_cast<std::size_t>(y) * img.width * 3);
    write_png(path, img.width, img.height, 8, PNG_COLOR_TYPE_RGB, rows);
}

RawImage read_rgb8_png(const std::filesystem::path& path) {
    PngReader r(path);
    if (setjmp(png_jmpbuf(r.png))) fail(path, "png read error");
    png_init_io(r.png, r.fp.get());
    png_read_info(r.png, r.info);
    png_set_strip_16(r.png);
    png_set_palette_to_rgb(r.png);
    png_set_expand_gray_1_2_4_to_8(r.png);
    png_set_strip_alpha(r.png);
    if (png_get_color_type(r.png, r.info) == PNG_COLOR_TYPE_GRAY ||
        png_get_color_type(r.png, r.info) == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(r.png);
    png_read_update_info(r.png, r.info);

    RawImage img;
    img.width = static_cast<int>(png_get_image_width(r.png, r.info));
    img.height = static_cast<int>(png_get_image_height(r.png, r.info));
    img.channels = 3;
    img.pixels.resize(static_cast<std::size_t>(img.width) * img.height * 3);
    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y)
        rows[y] = img.pixels.data() + static_cast<std::size_t>(y) * img.width * 3;
    png_read_image(r.png, rows.data());
    png_read_end(r.png, nullptr);
    return img;
}

void write_gray16_png(const std::filesystem::path& path, const RawImage16& img) {
    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y)
        rows[y] = reinterpret_cast<png_bytep>(
            const_cast<std::uint16_t*>(img.pixels.data() + static_cast<std::size_t>(y) * img.width));
    write_png(path, img.width, img.height, 16, PNG_COLOR_TYPE_GRAY, rows);
}

RawImage16 read_gray16_png(const std::filesystem::path& path) {
    PngReader r(path);
    if (setjmp(png_jmpbuf(r.png))) fail(path, "png read error");
    png_init_io(r.png, r.fp.get());
    png_read_info(r.png, r.info);
    if (png_get_bit_depth(r.png, r.info) != 16 ||
        png_get_color_type(r.png, r.info) != PNG_COLOR_TYPE_GRAY)
        fail(path, "expected 16-bit grayscale png");
    png_set_swap(r.png);
    png_read_update_info(r.png, r.info);

    RawImage16 img;
    img.width = static_cast<int>(png_get_image_width(r.png, r.info));
    img.height = static_cast<int>(png_get_image_height(r.png, r.info));
    img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y)
        rows[y] = reinterpret_cast<png_bytep>(img.pixels.data() +
                                              static_cast<std::size_t>(y) * img.width);
    png_read_image(r.png, rows.data());
    png_read_end(r.png, nullptr);
    return img;
}

void write_gray8_png(const std::filesystem::path& path, int width, int height,
                     const std::vector<std::uint8_t>& pixels) {
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y)
        rows[y] = const_cast<png_bytep>(pixels.data() + static_cast<std::size_t>(y) * width);
    write_png(path, width, height, 8, PNG_COLOR_TYPE_GRAY, rows);
}

}  // namespace tacgap::data
