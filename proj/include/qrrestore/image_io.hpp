#pragma once

#include <filesystem>

#include "qrrestore/image.hpp"

namespace qrrestore {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary PGM (P5). 8- and 16-bit files are read; values map to [0, 1] by
/// dividing by maxval.
GrayImage read_pgm(const std::filesystem::path& path);
/// 8-bit P5. Values are clamped to [0, 1] and rounded half-up to [0, 255].
void write_pgm(const GrayImage& img, const std::filesystem::path& path);
/// 16-bit P5 (maxval 65535), used for kernels.
void write_pgm16(const GrayImage& img, const std::filesystem::path& path);

/// 8-bit grayscale PNG. Colour inputs are converted to gray on read.
GrayImage read_png(const std::filesystem::path& path);
void write_png(const GrayImage& img, const std::filesystem::path& path);

/// Dispatches on the extension (.png, else PGM).
GrayImage read_image(const std::filesystem::path& path);
void write_image(const GrayImage& img, const std::filesystem::path& path);

/// The byte written for a pixel value: clamp to [0, 1], round half-up.
unsigned char quantize_8bit(double v);

}  // namespace qrrestore
