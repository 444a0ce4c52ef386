#pragma once

// Data-parallel inner loops shared by the numerical modules.
//
// Every kernel exists twice: `serial` is the straightforward reference used
// by the tests, `parallel` is the OpenMP version the library calls. The
// element-wise kernels produce bit-identical results; reductions may differ
// in summation order only.

#include <span>
#include <vector>

#include "qrrestore/image.hpp"

namespace qrrestore::kernels {

/// Scalar soft threshold sign(v) max(0, |v| - delta).
inline double shrink(double v, double delta) {
  const double m = (v < 0.0 ? -v : v) - delta;
  if (m <= 0.0) return 0.0;
  return v < 0.0 ? -m : m;
}

/// Split-variable state of one gradient component.
struct SplitField {
  std::span<const double> grad;  // current grad u
  std::span<double> d;
  std::span<double> b;
};

namespace serial {

/// One explicit Euler step of u_t = mu div(alpha grad u / sqrt(|grad u|^2 + eps^2))
/// with replicate-padding (no-flux) boundaries.
GrayImage flow_step(const GrayImage& u, const GrayImage& alpha, double mu, double dt, double eps);

/// sum alpha sqrt(|grad u|^2 + eps^2), forward Neumann differences.
double weighted_tv_energy(const GrayImage& u, const GrayImage& alpha, double eps);

/// d <- shrink(grad + b, delta), element-wise.
void update_split(SplitField f, double delta);

/// b <- b + grad - d, element-wise.
void update_bregman(SplitField f);

/// True convolution with zero padding outside the image ('conv' boundary).
GrayImage convolve_zero_pad(const GrayImage& img, const Kernel& k);

/// For each threshold t: sum over i of ((values[i] >= t ? 1 : 0) - target[i])^2.
std::vector<double> threshold_scores(std::span<const double> values,
                                     std::span<const double> target,
                                     std::span<const double> thresholds);

}  // namespace serial

namespace parallel {

GrayImage flow_step(const GrayImage& u, const GrayImage& alpha, double mu, double dt, double eps);
double weighted_tv_energy(const GrayImage& u, const GrayImage& alpha, double eps);
void update_split(SplitField f, double delta);
void update_bregman(SplitField f);
GrayImage convolve_zero_pad(const GrayImage& img, const Kernel& k);
std::vector<double> threshold_scores(std::span<const double> values,
                                     std::span<const double> target,
                                     std::span<const double> thresholds);

}  // namespace parallel

}  // namespace qrrestore::kernels
