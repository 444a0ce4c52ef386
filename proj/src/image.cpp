#include "qrrestore/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qrrestore {

GrayImage::GrayImage(int width, int height, double fill)
    : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw DimensionError("image extents must be >= 1, got " + std::to_string(width) + "x" +
                         std::to_string(height));
  }
  values_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

GrayImage::GrayImage(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (width < 1 || height < 1) {
    throw DimensionError("image extents must be >= 1");
  }
  if (values_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw DimensionError("pixel count does not match " + std::to_string(width) + "x" +
                         std::to_string(height));
  }
}

double GrayImage::min() const { return *std::min_element(values_.begin(), values_.end()); }

double GrayImage::max() const { return *std::max_element(values_.begin(), values_.end()); }

double GrayImage::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

bool GrayImage::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void require_inside(const Region& r, const GrayImage& img, const char* what) {
  if (!r.fits_in(img)) {
    throw DimensionError(std::string(what) + ": region (" + std::to_string(r.x0) + "," +
                         std::to_string(r.y0) + ") " + std::to_string(r.w) + "x" +
                         std::to_string(r.h) + " does not fit a " + std::to_string(img.width()) +
                         "x" + std::to_string(img.height()) + " image");
  }
}

Kernel::Kernel(int size, std::vector<double> weights) : size_(size), weights_(std::move(weights)) {
  if (size < 1 || size % 2 == 0) {
    throw ParameterError("kernel size must be odd and >= 1, got " + std::to_string(size));
  }
  if (weights_.size() != static_cast<std::size_t>(size) * static_cast<std::size_t>(size)) {
    throw DimensionError("kernel weight count does not match size");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) {
      throw ParameterError("kernel weights must be finite and non-negative");
    }
    total += w;
  }
  if (!(total > 0.0)) {
    throw ParameterError("degenerate kernel: zero mass");
  }
  for (double& w : weights_) w /= total;
}

Kernel Kernel::flat(int size) {
  return Kernel(size, std::vector<double>(static_cast<std::size_t>(size) * size, 1.0));
}

GrayImage Kernel::as_image() const { return GrayImage(size_, size_, weights_); }

}  // namespace qrrestore
