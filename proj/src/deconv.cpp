#include "qrrestore/deconv.hpp"

#include <cmath>
#include <numbers>

#include "qrrestore/imgcore.hpp"

namespace qrrestore {

void DeconvConfig::validate() const {
  if (lambda2 && !(*lambda2 > 0.0)) throw ParameterError("deconv: lambda2 must be > 0");
  if (!(split_fidelity > 0.0)) throw ParameterError("deconv: split fidelity must be > 0");
  if (n_bregman < 1) throw ParameterError("deconv: need at least one Bregman iteration");
  if (n_inner < 1) throw ParameterError("deconv: need at least one inner sweep");
}

double estimate_lambda2(const GrayImage& z, const GrayImage& u1, const Kernel& phi,
                        const Region& c1, const std::vector<bool>* known) {
  if (!z.same_shape(u1)) throw DimensionError("estimate_lambda2: z and u1 shapes differ");
  require_inside(c1, z, "estimate_lambda2");
  const std::vector<bool> ok = known ? fully_known_windows(*known, z.width(), z.height(), c1, phi.radius())
                                     : std::vector<bool>(static_cast<std::size_t>(c1.w) * c1.h, true);
  const GrayImage pz = convolve_periodic(z, phi);
  auto used = [&](int x, int y) { return ok[static_cast<std::size_t>(y - c1.y0) * c1.w + (x - c1.x0)]; };
  double n = 0.0;
  double mean = 0.0;
  for (int y = c1.y0; y < c1.y0 + c1.h; ++y) {
    for (int x = c1.x0; x < c1.x0 + c1.w; ++x) {
      if (!used(x, y)) continue;
      mean += pz(x, y) - u1(x, y);
      n += 1.0;
    }
  }
  if (n == 0.0) throw ParameterError("estimate_lambda2: kernel footprint leaves no fully known C1 pixel");
  mean /= n;
  double var = 0.0;
  for (int y = c1.y0; y < c1.y0 + c1.h; ++y) {
    for (int x = c1.x0; x < c1.x0 + c1.w; ++x) {
      if (!used(x, y)) continue;
      const double d = pz(x, y) - u1(x, y) - mean;
      var += d * d;
    }
  }
  var /= n;
  if (var < 1e-12) return kLambda2Cap;
  return std::min(kLambda2Cap, 1.0 / var);
}

AtvSubproblem::AtvSubproblem(const GrayImage& f, const Kernel& phi, double lambda2,
                             double split_fidelity)
    : fft_(f.width(), f.height()), lambda2_(lambda2), lambda_(split_fidelity) {
  if (!(lambda2 > 0.0) || !(split_fidelity > 0.0)) {
    throw ParameterError("atv subproblem: weights must be > 0");
  }
  kernel_hat_ = fft_.forward(circular_embed(phi, f.width(), f.height()).values());
  const Spectrum fh = fft_.forward(f.values());
  const int w = f.width();
  const int h = f.height();
  const int bx = fft_.bins_x();
  data_term_.resize(fft_.spectrum_size());
  denom_.resize(fft_.spectrum_size());
  for (int l = 0; l < h; ++l) {
    const double ly = 2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * l / h);
    for (int k = 0; k < bx; ++k) {
      const double lx = 2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * k / w);
      const std::size_t i = static_cast<std::size_t>(l) * bx + k;
      data_term_[i] = lambda2_ * (std::conj(kernel_hat_[i]) * fh[i]);
      denom_[i] = lambda2_ * std::norm(kernel_hat_[i]) + lambda_ * (lx + ly);
    }
  }
}

GrayImage AtvSubproblem::solve(const GrayImage& vx, const GrayImage& vy) const {
  const int w = width();
  const int h = height();
  const int bx = fft_.bins_x();
  const Spectrum ax = fft_.forward(vx.values());
  const Spectrum ay = fft_.forward(vy.values());
  Spectrum rhs(fft_.spectrum_size());
  for (int l = 0; l < h; ++l) {
    // Adjoint of the forward difference: conj(e^{i theta} - 1).
    const double ty = 2.0 * std::numbers::pi * l / h;
    const std::complex<double> dy_conj(std::cos(ty) - 1.0, -std::sin(ty));
    for (int k = 0; k < bx; ++k) {
      const double tx = 2.0 * std::numbers::pi * k / w;
      const std::complex<double> dx_conj(std::cos(tx) - 1.0, -std::sin(tx));
      const std::size_t i = static_cast<std::size_t>(l) * bx + k;
      rhs[i] = (data_term_[i] + lambda_ * (dx_conj * ax[i] + dy_conj * ay[i])) / denom_[i];
    }
  }
  GrayImage u(w, h);
  fft_.inverse(rhs, u.values());
  return u;
}

GrayImage atv_deconvolve(const GrayImage& u1, const Kernel& phi, const DeconvConfig& cfg,
                         const UUpdateObserver& observer) {
  cfg.validate();
  if (!cfg.lambda2) throw ParameterError("atv_deconvolve: lambda2 must be resolved before use");
  const GrayImage f = mirror_extend(u1);
  if (phi.size() > std::min(f.width(), f.height())) {
    throw DimensionError("atv_deconvolve: kernel larger than the extended image");
  }
  const AtvSubproblem sub(f, phi, *cfg.lambda2, cfg.split_fidelity);
  const int w = f.width();
  const int h = f.height();

  GrayImage u = f;
  GrayImage dx(w, h, 0.0), dy(w, h, 0.0), bx(w, h, 0.0), by(w, h, 0.0);
  GrayImage vx(w, h, 0.0), vy(w, h, 0.0);
  const double delta = 1.0 / cfg.split_fidelity;

  for (int it = 0; it < cfg.n_bregman; ++it) {
    std::pair<GrayImage, GrayImage> g;
    for (int sweep = 0; sweep < cfg.n_inner; ++sweep) {
      for (std::size_t i = 0; i < vx.size(); ++i) {
        vx.values()[i] = dx.values()[i] - bx.values()[i];
        vy.values()[i] = dy.values()[i] - by.values()[i];
      }
      u = sub.solve(vx, vy);
      if (observer) observer(sub, u, vx, vy);
      g = grad_periodic(u);
      kernels::parallel::update_split({g.first.values(), dx.values(), bx.values()}, delta);
      kernels::parallel::update_split({g.second.values(), dy.values(), by.values()}, delta);
    }
    kernels::parallel::update_bregman({g.first.values(), dx.values(), bx.values()});
    kernels::parallel::update_bregman({g.second.values(), dy.values(), by.values()});
  }
  return center_crop(u, Region{0, 0, u1.width(), u1.height()});
}

}  // namespace qrrestore
