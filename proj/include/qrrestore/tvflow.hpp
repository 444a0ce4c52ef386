#pragma once

#include <functional>
#include <vector>

#include "qrrestore/image.hpp"

namespace qrrestore {

struct TvFlowParams {
  double beta = 0.05;     // edge sensitivity of the diffusion weight
  double sigma_g = 1.0;   // std dev of the gradient pre-smoothing, pixels
  double mu_base = 1.1;   // speed mu(t) = mu_base^t
  double dt = 0.05;       // upper bound on the time step
  double t_max = 10.0;    // flow horizon
  double eps_reg = 1e-3;  // |grad u| regularization floor
  int patience = 50;      // consecutive rising samples before early exit
  long max_steps = 200000;

  /// Throws ParameterError when an invariant is violated.
  void validate() const;
};

struct FlowTrace {
  std::vector<double> times;
  std::vector<double> corner_dist;
  double t_stop = 0.0;
  std::size_t stop_index = 0;
};

/// 1 / sqrt(1 + |G_sigma * grad f|^2 / beta^2). Each gradient component is
/// smoothed with a normalized Gaussian (radius 3 sigma, replicate boundary).
GrayImage alpha_weight(const GrayImage& f, const TvFlowParams& p);

/// One explicit Euler step of u_t = mu div(alpha grad u / |grad u|_eps) with
/// no-flux boundaries.
GrayImage flow_step(const GrayImage& u, const GrayImage& alpha, double mu_t, double dt,
                    double eps_reg);

/// Regularized weighted TV energy: sum alpha sqrt(|grad u|^2 + eps^2).
double weighted_tv_energy(const GrayImage& u, const GrayImage& alpha, double eps_reg);

/// Largest stable step at speed mu: min(dt_cap, 0.2 eps / (max alpha * mu)).
double stable_step(double max_alpha, double mu, const TvFlowParams& p);

struct DenoiseResult {
  GrayImage u1;
  FlowTrace trace;
};

/// One accepted Euler step, reported to an optional observer.
struct FlowStepInfo {
  double t = 0.0;   // flow time after the step
  double dt = 0.0;  // accepted step (after any halving)
  double mu = 1.0;
  double energy_before = 0.0;
  double energy_after = 0.0;
  const GrayImage* u = nullptr;  // iterate after the step
};
using FlowObserver = std::function<void(const FlowStepInfo&)>;

/// Runs the weighted TV flow from u(0) = f and returns the iterate whose
/// C1 restriction is closest (L2) to the known clean corner `z_corner`.
///
/// Steps are halved while they would increase the weighted TV energy. The
/// run ends at t_max, after max_steps, or once the corner distance has been
/// rising for `patience` consecutive samples.
DenoiseResult denoise(const GrayImage& f, const GrayImage& z_corner, const Region& c1,
                      const TvFlowParams& p, const FlowObserver& observer = {});

}  // namespace qrrestore
