#include "qrrestore/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <stdexcept>

#include "qrrestore/image.hpp"

namespace qrrestore {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct Fft2d::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

Fft2d::Fft2d(int width, int height)
    : width_(width), height_(height), plans_(std::make_unique<Plans>()) {
  if (width < 1 || height < 1) throw DimensionError("fft extents must be >= 1");
  const std::size_t n = static_cast<std::size_t>(width) * height;
  double* real = fftw_alloc_real(n);
  fftw_complex* cplx = fftw_alloc_complex(spectrum_size());
  {
    std::lock_guard lock(planner_mutex());
    // FFTW_UNALIGNED: execute is called later on std::vector storage.
    plans_->r2c = fftw_plan_dft_r2c_2d(height, width, real, cplx, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_->c2r = fftw_plan_dft_c2r_2d(height, width, cplx, real,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_DESTROY_INPUT);
  }
  fftw_free(real);
  fftw_free(cplx);
  if (plans_->r2c == nullptr || plans_->c2r == nullptr) {
    throw std::runtime_error("fftw planning failed");
  }
}

Fft2d::~Fft2d() {
  std::lock_guard lock(planner_mutex());
  if (plans_->r2c) fftw_destroy_plan(plans_->r2c);
  if (plans_->c2r) fftw_destroy_plan(plans_->c2r);
}

void Fft2d::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
  if (in.size() != static_cast<std::size_t>(width_) * height_ || out.size() != spectrum_size()) {
    throw DimensionError("fft forward: buffer size mismatch");
  }
  // r2c does not modify its input for out-of-place transforms.
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

Spectrum Fft2d::forward(std::span<const double> in) const {
  Spectrum out(spectrum_size());
  forward(in, out);
  return out;
}

void Fft2d::inverse(std::span<const std::complex<double>> in, std::span<double> out) const {
  const std::size_t n = static_cast<std::size_t>(width_) * height_;
  if (in.size() != spectrum_size() || out.size() != n) {
    throw DimensionError("fft inverse: buffer size mismatch");
  }
  Spectrum scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : out) v *= scale;
}

}  // namespace qrrestore
