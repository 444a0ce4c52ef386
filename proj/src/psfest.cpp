#include "qrrestore/psfest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "qrrestore/fft.hpp"
#include "qrrestore/imgcore.hpp"

namespace qrrestore {

std::vector<int> default_candidate_sizes(int extent) {
  std::vector<int> sizes;
  for (int s = 1; s <= extent; s += 2) sizes.push_back(s);
  return sizes;
}

GrayImage estimate_psf_periodic(const GrayImage& u1_corner, const GrayImage& z_corner,
                                double lambda1) {
  if (!(lambda1 >= 0.0) || !std::isfinite(lambda1)) {
    throw ParameterError("estimate_psf: lambda1 must be finite and >= 0");
  }
  if (!u1_corner.same_shape(z_corner)) throw DimensionError("estimate_psf: corner shapes differ");
  const int ew = 2 * z_corner.width();
  const int eh = 2 * z_corner.height();
  if (lambda1 == 0.0) {
    // Only the smoothness term remains; its minimizers are the constants.
    // All ones keeps every truncation bit-identical to Kernel::flat.
    return GrayImage(ew, eh, 1.0);
  }

  const GrayImage ze = normalize_unit_mass(mirror_extend(z_corner));
  const GrayImage ue = normalize_unit_mass(mirror_extend(u1_corner));
  const Fft2d fft(ew, eh);
  const Spectrum zf = fft.forward(ze.values());
  const Spectrum uf = fft.forward(ue.values());

  Spectrum phi(fft.spectrum_size());
  const int bx = fft.bins_x();
  for (int l = 0; l < eh; ++l) {
    const double cy = 2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * l / eh);
    for (int k = 0; k < bx; ++k) {
      const double lap = 2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * k / ew) + cy;
      const std::size_t i = static_cast<std::size_t>(l) * bx + k;
      phi[i] = lambda1 * std::conj(zf[i]) * uf[i] / (lap + lambda1 * std::norm(zf[i]));
    }
  }
  GrayImage phi_ext(ew, eh);
  fft.inverse(phi, phi_ext.values());
  return phi_ext;
}

GrayImage estimate_psf_full(const GrayImage& u1_corner, const GrayImage& z_corner, double lambda1) {
  const GrayImage phi_ext = estimate_psf_periodic(u1_corner, z_corner, lambda1);
  const int w = z_corner.width();
  const int h = z_corner.height();
  if (lambda1 == 0.0) return GrayImage(w, h, 1.0);

  // Window of the periodic solution with the origin moved to (w/2, h/2).
  const int ew = phi_ext.width();
  const int eh = phi_ext.height();
  GrayImage out(w, h);
  const int ox = w / 2;
  const int oy = h / 2;
  for (int y = 0; y < h; ++y) {
    const int sy = ((y - oy) % eh + eh) % eh;
    for (int x = 0; x < w; ++x) {
      const int sx = ((x - ox) % ew + ew) % ew;
      out(x, y) = phi_ext(sx, sy);
    }
  }
  return out;
}

Kernel truncate_and_normalize(const GrayImage& phi_full, int size) {
  if (size < 1 || size % 2 == 0) throw ParameterError("truncation size must be odd and >= 1");
  const int cx = phi_full.width() / 2;
  const int cy = phi_full.height() / 2;
  const int r = size / 2;
  if (cx - r < 0 || cy - r < 0 || cx + r >= phi_full.width() || cy + r >= phi_full.height()) {
    throw DimensionError("truncation size " + std::to_string(size) + " exceeds the kernel field");
  }
  std::vector<double> w(static_cast<std::size_t>(size) * size);
  double total = 0.0;
  for (int j = 0; j < size; ++j) {
    for (int i = 0; i < size; ++i) {
      const double v = std::max(0.0, phi_full(cx - r + i, cy - r + j));
      w[static_cast<std::size_t>(j) * size + i] = v;
      total += v;
    }
  }
  if (!(total > 0.0)) throw ParameterError("degenerate kernel");
  return Kernel(size, std::move(w));
}

double c1_residual(const GrayImage& z, const GrayImage& u1, const Kernel& phi, const Region& c1,
                   const std::vector<bool>* known) {
  if (known == nullptr) {
    const double d = l2_dist_on(convolve_periodic(z, phi), u1, c1);
    return d * d;
  }
  const std::vector<bool> ok = fully_known_windows(*known, z.width(), z.height(), c1, phi.radius());
  const GrayImage pz = convolve_periodic(z, phi);
  double acc = 0.0;
  long n = 0;
  for (int y = 0; y < c1.h; ++y) {
    for (int x = 0; x < c1.w; ++x) {
      if (!ok[static_cast<std::size_t>(y) * c1.w + x]) continue;
      const double d = pz(c1.x0 + x, c1.y0 + y) - u1(c1.x0 + x, c1.y0 + y);
      acc += d * d;
      ++n;
    }
  }
  if (n == 0) throw ParameterError("kernel footprint leaves no fully known C1 pixel");
  return acc * (static_cast<double>(c1.w) * c1.h / static_cast<double>(n));
}

namespace {

template <typename MakeKernel>
KernelSelection pick_best(const std::vector<int>& sizes, const GrayImage& z, const GrayImage& u1,
                          const Region& c1, const std::vector<bool>* known, MakeKernel make) {
  if (sizes.empty()) throw ParameterError("kernel selection needs at least one candidate size");
  if (!z.same_shape(u1)) throw DimensionError("kernel selection: z and u1 shapes differ");
  require_inside(c1, z, "kernel selection");
  for (int s : sizes) {
    if (s < 1 || s % 2 == 0) throw ParameterError("candidate kernel sizes must be odd and >= 1");
    if (s > std::min(z.width(), z.height())) {
      throw DimensionError("candidate kernel size " + std::to_string(s) + " exceeds the image");
    }
  }

  const long n = static_cast<long>(sizes.size());
  std::vector<double> scores(sizes.size(), std::numeric_limits<double>::infinity());
  std::vector<std::optional<Kernel>> kernels(sizes.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      Kernel k = make(sizes[i]);
      scores[i] = c1_residual(z, u1, k, c1, known);
      kernels[i] = std::move(k);
    } catch (const ParameterError&) {
      // Degenerate truncation: leave the score at +inf.
    }
  }

  std::size_t best = sizes.size();
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (!kernels[i]) continue;
    if (best == sizes.size() || scores[i] < scores[best] ||
        (scores[i] == scores[best] && sizes[i] < sizes[best])) {
      best = i;
    }
  }
  if (best == sizes.size()) throw ParameterError("degenerate kernel: every candidate size failed");
  return KernelSelection{*kernels[best], sizes, scores};
}

}  // namespace

KernelSelection select_kernel(const GrayImage& phi_full, const GrayImage& z, const GrayImage& u1,
                              const Region& c1, const PsfEstimateConfig& cfg,
                              const std::vector<bool>* known) {
  const std::vector<int> sizes = cfg.candidate_sizes.empty()
                                     ? default_candidate_sizes(std::min(c1.w, c1.h))
                                     : cfg.candidate_sizes;
  for (int s : sizes) {
    if (s > std::min(phi_full.width(), phi_full.height())) {
      throw DimensionError("candidate kernel size " + std::to_string(s) + " exceeds the PSF field");
    }
  }
  return pick_best(sizes, z, u1, c1, known,
                   [&](int size) { return truncate_and_normalize(phi_full, size); });
}

KernelSelection uniform_psf(const GrayImage& z, const GrayImage& u1, const Region& c1,
                            const std::vector<int>& sizes, const std::vector<bool>* known) {
  return pick_best(sizes, z, u1, c1, known, [](int size) { return Kernel::flat(size); });
}

}  // namespace qrrestore
