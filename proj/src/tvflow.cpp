#include "qrrestore/tvflow.hpp"

#include <algorithm>
#include <cmath>

#include "qrrestore/imgcore.hpp"
#include "qrrestore/kernels.hpp"

namespace qrrestore {

void TvFlowParams::validate() const {
  if (!(beta > 0.0)) throw ParameterError("tv flow: beta must be > 0");
  if (!(sigma_g > 0.0)) throw ParameterError("tv flow: sigma_g must be > 0");
  if (!(mu_base >= 1.0)) throw ParameterError("tv flow: mu_base must be >= 1");
  if (!(dt > 0.0)) throw ParameterError("tv flow: dt must be > 0");
  if (!(t_max >= 0.0)) throw ParameterError("tv flow: t_max must be >= 0");
  if (!(eps_reg > 0.0)) throw ParameterError("tv flow: eps_reg must be > 0");
  if (patience < 1) throw ParameterError("tv flow: patience must be >= 1");
}

namespace {

// Separable Gaussian smoothing with replicate padding.
GrayImage gaussian_smooth(const GrayImage& img, double sigma) {
  const int r = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> taps(2 * r + 1);
  double total = 0.0;
  for (int i = -r; i <= r; ++i) {
    taps[i + r] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    total += taps[i + r];
  }
  for (double& t : taps) t /= total;

  const int w = img.width();
  const int h = img.height();
  GrayImage tmp(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += taps[i + r] * img(std::clamp(x + i, 0, w - 1), y);
      tmp(x, y) = acc;
    }
  }
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += taps[i + r] * tmp(x, std::clamp(y + i, 0, h - 1));
      out(x, y) = acc;
    }
  }
  return out;
}

double corner_distance(const GrayImage& u, const GrayImage& z_corner, const Region& c1) {
  double acc = 0.0;
  for (int y = 0; y < c1.h; ++y) {
    for (int x = 0; x < c1.w; ++x) {
      const double d = u(c1.x0 + x, c1.y0 + y) - z_corner(x, y);
      acc += d * d;
    }
  }
  return std::sqrt(acc);
}

}  // namespace

GrayImage alpha_weight(const GrayImage& f, const TvFlowParams& p) {
  p.validate();
  auto [gx, gy] = grad_neumann(f);
  const GrayImage sx = gaussian_smooth(gx, p.sigma_g);
  const GrayImage sy = gaussian_smooth(gy, p.sigma_g);
  GrayImage alpha(f.width(), f.height());
  const double inv_beta2 = 1.0 / (p.beta * p.beta);
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double g2 = sx.values()[i] * sx.values()[i] + sy.values()[i] * sy.values()[i];
    alpha.values()[i] = 1.0 / std::sqrt(1.0 + g2 * inv_beta2);
  }
  return alpha;
}

GrayImage flow_step(const GrayImage& u, const GrayImage& alpha, double mu_t, double dt,
                    double eps_reg) {
  return kernels::parallel::flow_step(u, alpha, mu_t, dt, eps_reg);
}

double weighted_tv_energy(const GrayImage& u, const GrayImage& alpha, double eps_reg) {
  return kernels::parallel::weighted_tv_energy(u, alpha, eps_reg);
}

double stable_step(double max_alpha, double mu, const TvFlowParams& p) {
  return std::min(p.dt, 0.2 * p.eps_reg / (max_alpha * mu));
}

DenoiseResult denoise(const GrayImage& f, const GrayImage& z_corner, const Region& c1,
                      const TvFlowParams& p, const FlowObserver& observer) {
  p.validate();
  require_inside(c1, f, "denoise");
  if (z_corner.width() != c1.w || z_corner.height() != c1.h) {
    throw DimensionError("denoise: clean corner does not match the C1 extents");
  }

  const GrayImage alpha = alpha_weight(f, p);
  const double max_alpha = alpha.max();

  DenoiseResult result{f, {}};
  FlowTrace& trace = result.trace;
  GrayImage u = f;
  double t = 0.0;
  double energy = weighted_tv_energy(u, alpha, p.eps_reg);
  double dist = corner_distance(u, z_corner, c1);
  trace.times.push_back(t);
  trace.corner_dist.push_back(dist);
  double best = dist;
  int rising = 0;

  for (long step = 0; step < p.max_steps && t < p.t_max; ++step) {
    const double mu = std::pow(p.mu_base, t);
    double dt = std::min(stable_step(max_alpha, mu, p), p.t_max - t);
    GrayImage next = flow_step(u, alpha, mu, dt, p.eps_reg);
    double next_energy = weighted_tv_energy(next, alpha, p.eps_reg);
    for (int halvings = 0; next_energy > energy * (1.0 + 1e-12) && halvings < 40; ++halvings) {
      dt *= 0.5;
      next = flow_step(u, alpha, mu, dt, p.eps_reg);
      next_energy = weighted_tv_energy(next, alpha, p.eps_reg);
    }
    u = std::move(next);
    t += dt;
    if (observer) observer(FlowStepInfo{t, dt, mu, energy, next_energy, &u});
    energy = next_energy;

    const double d = corner_distance(u, z_corner, c1);
    trace.times.push_back(t);
    trace.corner_dist.push_back(d);
    if (d < best) {
      best = d;
      trace.stop_index = trace.times.size() - 1;
      trace.t_stop = t;
      result.u1 = u;
      rising = 0;
    } else if (d > dist) {
      if (++rising >= p.patience) break;
    } else {
      rising = 0;
    }
    dist = d;
  }
  return result;
}

}  // namespace qrrestore
