#include <cmath>

#include "qrrestore/kernels.hpp"

namespace qrrestore::kernels::parallel {

GrayImage flow_step(const GrayImage& u, const GrayImage& alpha, double mu, double dt, double eps) {
  if (!u.same_shape(alpha)) throw DimensionError("flow_step: alpha shape differs from u");
  const int w = u.width();
  const int h = u.height();
  const double eps2 = eps * eps;
  GrayImage px(w, h, 0.0);
  GrayImage py(w, h, 0.0);
  const double* up = u.data();
  const double* ap = alpha.data();
  double* pxp = px.data();
  double* pyp = py.data();

#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    const std::size_t row = static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      const std::size_t i = row + x;
      const double gx = x + 1 < w ? up[i + 1] - up[i] : 0.0;
      const double gy = y + 1 < h ? up[i + w] - up[i] : 0.0;
      const double c = ap[i] / std::sqrt(gx * gx + gy * gy + eps2);
      pxp[i] = c * gx;
      pyp[i] = c * gy;
    }
  }

  GrayImage out(w, h);
  double* op = out.data();
  const double step = dt * mu;
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    const std::size_t row = static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      const std::size_t i = row + x;
      const double div = pxp[i] - (x > 0 ? pxp[i - 1] : 0.0) + pyp[i] - (y > 0 ? pyp[i - w] : 0.0);
      op[i] = up[i] + step * div;
    }
  }
  return out;
}

double weighted_tv_energy(const GrayImage& u, const GrayImage& alpha, double eps) {
  const int w = u.width();
  const int h = u.height();
  const double eps2 = eps * eps;
  const double* up = u.data();
  const double* ap = alpha.data();
  double acc = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : acc)
  for (int y = 0; y < h; ++y) {
    const std::size_t row = static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      const std::size_t i = row + x;
      const double gx = x + 1 < w ? up[i + 1] - up[i] : 0.0;
      const double gy = y + 1 < h ? up[i + w] - up[i] : 0.0;
      acc += ap[i] * std::sqrt(gx * gx + gy * gy + eps2);
    }
  }
  return acc;
}

void update_split(SplitField f, double delta) {
  const long n = static_cast<long>(f.grad.size());
  const double* g = f.grad.data();
  const double* b = f.b.data();
  double* d = f.d.data();
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) d[i] = shrink(g[i] + b[i], delta);
}

void update_bregman(SplitField f) {
  const long n = static_cast<long>(f.grad.size());
  const double* g = f.grad.data();
  const double* d = f.d.data();
  double* b = f.b.data();
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) b[i] = b[i] + g[i] - d[i];
}

GrayImage convolve_zero_pad(const GrayImage& img, const Kernel& k) {
  const int w = img.width();
  const int h = img.height();
  const int r = k.radius();
  const int n = k.size();
  GrayImage out(w, h, 0.0);
  const double* src = img.data();
  const double* kw = k.weights().data();
  double* dst = out.data();
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) {
        const int sy = y - (j - r);
        if (sy < 0 || sy >= h) continue;
        for (int i = 0; i < n; ++i) {
          const int sx = x - (i - r);
          if (sx < 0 || sx >= w) continue;
          acc += kw[static_cast<std::size_t>(j) * n + i] * src[static_cast<std::size_t>(sy) * w + sx];
        }
      }
      dst[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  return out;
}

std::vector<double> threshold_scores(std::span<const double> values,
                                     std::span<const double> target,
                                     std::span<const double> thresholds) {
  std::vector<double> scores(thresholds.size(), 0.0);
  const long nt = static_cast<long>(thresholds.size());
#pragma omp parallel for schedule(static)
  for (long t = 0; t < nt; ++t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double d = (values[i] >= thresholds[t] ? 1.0 : 0.0) - target[i];
      acc += d * d;
    }
    scores[t] = acc;
  }
  return scores;
}

}  // namespace qrrestore::kernels::parallel
