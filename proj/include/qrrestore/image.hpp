#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrrestore {

/// Raised when image, region or kernel extents are inconsistent.
class DimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for out-of-range numeric parameters (negative sigma, density > 1, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Real-valued single-channel raster, row-major, double precision.
///
/// Pixel (x, y) lives at values()[y * width() + x]. Values are nominally in
/// [0, 1] but intermediate stages are free to leave that range.
class GrayImage {
 public:
  GrayImage() : GrayImage(1, 1) {}
  GrayImage(int width, int height, double fill = 0.0);
  GrayImage(int width, int height, std::vector<double> values);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return values_.size(); }

  double& operator()(int x, int y) { return values_[index(x, y)]; }
  double operator()(int x, int y) const { return values_[index(x, y)]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

  bool same_shape(const GrayImage& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  double min() const;
  double max() const;
  double sum() const;
  double mean() const { return sum() / static_cast<double>(size()); }
  bool all_finite() const;

  bool operator==(const GrayImage& other) const = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::vector<double> values_;
};

/// Axis-aligned rectangle in pixel coordinates.
struct Region {
  int x0 = 0;
  int y0 = 0;
  int w = 1;
  int h = 1;

  bool fits_in(const GrayImage& img) const {
    return w >= 1 && h >= 1 && x0 >= 0 && y0 >= 0 && x0 + w <= img.width() &&
           y0 + h <= img.height();
  }
  bool contains(int x, int y) const {
    return x >= x0 && x < x0 + w && y >= y0 && y < y0 + h;
  }
  bool operator==(const Region&) const = default;
};

/// Throws DimensionError unless r fits inside img.
void require_inside(const Region& r, const GrayImage& img, const char* what);

/// Square, odd-sized, non-negative convolution kernel with unit mass.
class Kernel {
 public:
  /// Normalizes `weights` to unit mass. Throws ParameterError for even sizes,
  /// negative or non-finite weights, and DimensionError for a size mismatch.
  Kernel(int size, std::vector<double> weights);

  static Kernel delta() { return Kernel(1, {1.0}); }
  static Kernel flat(int size);

  int size() const { return size_; }
  int radius() const { return size_ / 2; }
  double operator()(int i, int j) const {
    return weights_[static_cast<std::size_t>(j) * size_ + i];
  }
  std::span<const double> weights() const { return weights_; }

  /// View as an image (size x size) for I/O and norms.
  GrayImage as_image() const;

  bool operator==(const Kernel&) const = default;

 private:
  int size_;
  std::vector<double> weights_;
};

}  // namespace qrrestore
