#ifndef TACGAP_DATA_PNG_IO_HPP
#define TACGAP_DATA_PNG_IO_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

namespace tacgap::data {

// 8-bit interleaved RGB image as read from / written to PNG.
struct RawImage {
    int width = 0;
    int height = 0;
    int channels = 3;
    std::vector<std::uint8_t> pixels;  // row-major, interleaved
};

// 16-bit single-channel raster (depth storage).
struct RawImage16 {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> pixels;
};

void write_rgb8_png(const std::filesystem::path& path, const RawImage& img);
RawImage read_rgb8_png(const std::filesystem::path& path);

void write_gray16_png(const std::filesystem::path& path, const RawImage16& img);
RawImage16 read_gray16_png(const std::filesystem::path& path);

void write_gray8_png(const std::filesystem::path& path, int width, int height,
                     const std::vector<std::uint8_t>& pixels);

}  // namespace tacgap::data

#endif
