#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace qrrestore {

using Spectrum = std::vector<std::complex<double>>;

/// Real-to-complex 2-D DFT of a fixed W x H raster.
///
/// The half spectrum is stored row-major as H rows of (W/2 + 1) bins; bin
/// (k, l) holds horizontal frequency k and vertical frequency l. inverse()
/// includes the 1/(W H) factor so inverse(forward(x)) == x.
///
/// Plans are created under a global lock; execution is thread-safe, so one
/// instance may be shared across threads.
class Fft2d {
 public:
  Fft2d(int width, int height);
  ~Fft2d();
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;

  int width() const { return width_; }
  int height() const { return height_; }
  int bins_x() const { return width_ / 2 + 1; }
  std::size_t spectrum_size() const {
    return static_cast<std::size_t>(bins_x()) * static_cast<std::size_t>(height_);
  }

  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
  Spectrum forward(std::span<const double> in) const;
  void inverse(std::span<const std::complex<double>> in, std::span<double> out) const;

 private:
  struct Plans;
  int width_;
  int height_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace qrrestore
