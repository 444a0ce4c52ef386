#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qrrestore/fft.hpp"
#include "qrrestore/image.hpp"
#include "qrrestore/kernels.hpp"

namespace qrrestore {

using kernels::shrink;

struct DeconvConfig {
  /// Fidelity weight; std::nullopt means "estimate from the C1 residual".
  std::optional<double> lambda2;
  double split_fidelity = 100.0;  // weight of the d = grad u constraint
  int n_bregman = 2;
  int n_inner = 1;  // alternating u/d sweeps per Bregman iteration

  void validate() const;
};

/// 1 / var((phi * z - u1)|C1) with the population variance; 1e12 when the
/// variance falls below 1e-12. With `known` (image-sized), only C1 pixels
/// whose kernel window is fully known enter the variance.
double estimate_lambda2(const GrayImage& z, const GrayImage& u1, const Kernel& phi,
                        const Region& c1, const std::vector<bool>* known = nullptr);

inline constexpr double kLambda2Cap = 1e12;

/// Quadratic u-subproblem of the split Bregman scheme on a periodic grid:
///
///   argmin_u  (lambda2/2)|phi * u - f|^2 + (lambda/2) sum_c |v_c - D_c u|^2,
///
/// with D_x, D_y periodic forward differences. Its normal equations
///   (lambda2 K^T K + lambda D^T D) u = lambda2 K^T f + lambda D^T v
/// are diagonal in Fourier space.
class AtvSubproblem {
 public:
  AtvSubproblem(const GrayImage& f, const Kernel& phi, double lambda2, double split_fidelity);

  int width() const { return fft_.width(); }
  int height() const { return fft_.height(); }
  double lambda2() const { return lambda2_; }
  double split_fidelity() const { return lambda_; }

  /// vx, vy are d - b for each gradient component.
  GrayImage solve(const GrayImage& vx, const GrayImage& vy) const;

 private:
  Fft2d fft_;
  double lambda2_;
  double lambda_;
  Spectrum kernel_hat_;
  Spectrum data_term_;  // lambda2 conj(K^) f^
  std::vector<double> denom_;
};

/// Called after every u-update with (u, vx, vy) on the extended grid.
using UUpdateObserver =
    std::function<void(const AtvSubproblem&, const GrayImage& u, const GrayImage& vx,
                       const GrayImage& vy)>;

/// argmin_u |u_x| + |u_y| + (lambda2/2)|phi * u - u1|^2 via split Bregman.
///
/// u1 is mirror-extended to a periodic 2w x 2h grid; initial d = b = 0. Each
/// Bregman iteration runs n_inner sweeps of (u-update in Fourier space,
/// d = shrink(grad u + b, 1/lambda)) and then b += grad u - d. The top-left
/// w x h quadrant of the final u is returned. cfg.lambda2 must be set.
GrayImage atv_deconvolve(const GrayImage& u1, const Kernel& phi, const DeconvConfig& cfg,
                         const UUpdateObserver& observer = {});

}  // namespace qrrestore
