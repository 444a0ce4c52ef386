#include <cmath>

#include "qrrestore/kernels.hpp"

namespace qrrestore::kernels::serial {

GrayImage flow_step(const GrayImage& u, const GrayImage& alpha, double mu, double dt, double eps) {
  if (!u.same_shape(alpha)) throw DimensionError("flow_step: alpha shape differs from u");
  const int w = u.width();
  const int h = u.height();
  const double eps2 = eps * eps;
  GrayImage px(w, h, 0.0);
  GrayImage py(w, h, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double gx = x + 1 < w ? u(x + 1, y) - u(x, y) : 0.0;
      const double gy = y + 1 < h ? u(x, y + 1) - u(x, y) : 0.0;
      const double c = alpha(x, y) / std::sqrt(gx * gx + gy * gy + eps2);
      px(x, y) = c * gx;
      py(x, y) = c * gy;
    }
  }
  GrayImage out(w, h);
  const double step = dt * mu;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double div = px(x, y) - (x > 0 ? px(x - 1, y) : 0.0) + py(x, y) -
                         (y > 0 ? py(x, y - 1) : 0.0);
      out(x, y) = u(x, y) + step * div;
    }
  }
  return out;
}

double weighted_tv_energy(const GrayImage& u, const GrayImage& alpha, double eps) {
  const int w = u.width();
  const int h = u.height();
  const double eps2 = eps * eps;
  double acc = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double gx = x + 1 < w ? u(x + 1, y) - u(x, y) : 0.0;
      const double gy = y + 1 < h ? u(x, y + 1) - u(x, y) : 0.0;
      acc += alpha(x, y) * std::sqrt(gx * gx + gy * gy + eps2);
    }
  }
  return acc;
}

void update_split(SplitField f, double delta) {
  for (std::size_t i = 0; i < f.grad.size(); ++i) f.d[i] = shrink(f.grad[i] + f.b[i], delta);
}

void update_bregman(SplitField f) {
  for (std::size_t i = 0; i < f.grad.size(); ++i) f.b[i] = f.b[i] + f.grad[i] - f.d[i];
}

GrayImage convolve_zero_pad(const GrayImage& img, const Kernel& k) {
  const int w = img.width();
  const int h = img.height();
  const int r = k.radius();
  GrayImage out(w, h, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int j = 0; j < k.size(); ++j) {
        const int sy = y - (j - r);
        if (sy < 0 || sy >= h) continue;
        for (int i = 0; i < k.size(); ++i) {
          const int sx = x - (i - r);
          if (sx < 0 || sx >= w) continue;
          acc += k(i, j) * img(sx, sy);
        }
      }
      out(x, y) = acc;
    }
  }
  return out;
}

std::vector<double> threshold_scores(std::span<const double> values,
                                     std::span<const double> target,
                                     std::span<const double> thresholds) {
  std::vector<double> scores(thresholds.size(), 0.0);
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double d = (values[i] >= thresholds[t] ? 1.0 : 0.0) - target[i];
      acc += d * d;
    }
    scores[t] = acc;
  }
  return scores;
}

}  // namespace qrrestore::kernels::serial
