#pragma once

#include <cstdint>
#include <filesystem>

#include "rshc/image.hpp"

namespace rshc {

// Loads a PPM (P6), PGM (P5) or PNG file as RGB. Grayscale sources are
// replicated across channels; 16-bit sources are narrowed to 8 bits.
RgbImage load_rgb(const std::filesystem::path& path);

// Loads a single-channel 8-bit image (PGM P5 maxval<=255, or 8-bit gray PNG).
Grid<std::uint8_t> load_gray8(const std::filesystem::path& path);

// Loads a single-channel image with up to 16 bits per sample.
Grid<std::uint16_t> load_gray16(const std::filesystem::path& path);

void save_ppm(const RgbImage& image, const std::filesystem::path& path);
void save_pgm8(const Grid<std::uint8_t>& image, const std::filesystem::path& path);
void save_pgm16(const Grid<std::uint16_t>& image, const std::filesystem::path& path);

void save_png_rgb(const RgbImage& image, const std::filesystem::path& path);
void save_png_gray8(const Grid<std::uint8_t>& image, const std::filesystem::path& path);
void save_png_gray16(const Grid<std::uint16_t>& image, const std::filesystem::path& path);

// True if the file starts with a recognized image magic (P5/P6/PNG).
bool is_supported_image(const std::filesystem::path& path);

}  // namespace rshc
