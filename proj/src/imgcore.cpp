#include "qrrestore/imgcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qrrestore {

GrayImage circular_embed(const Kernel& k, int width, int height) {
  if (k.size() > width || k.size() > height) {
    throw DimensionError("kernel of size " + std::to_string(k.size()) + " exceeds " +
                         std::to_string(width) + "x" + std::to_string(height) + " image");
  }
  GrayImage out(width, height, 0.0);
  const int r = k.radius();
  for (int j = 0; j < k.size(); ++j) {
    const int y = ((j - r) % height + height) % height;
    for (int i = 0; i < k.size(); ++i) {
      const int x = ((i - r) % width + width) % width;
      out(x, y) += k(i, j);
    }
  }
  return out;
}

GrayImage convolve_periodic(const GrayImage& img, const GrayImage& filter_at_origin) {
  if (!img.same_shape(filter_at_origin)) {
    throw DimensionError("convolve_periodic: filter and image shapes differ");
  }
  const Fft2d fft(img.width(), img.height());
  Spectrum a = fft.forward(img.values());
  const Spectrum b = fft.forward(filter_at_origin.values());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  GrayImage out(img.width(), img.height());
  fft.inverse(a, out.values());
  return out;
}

GrayImage convolve_periodic(const GrayImage& img, const Kernel& k) {
  if (k.size() == 1) return img;
  return convolve_periodic(img, circular_embed(k, img.width(), img.height()));
}

GrayImage mirror_extend(const GrayImage& img) {
  const int w = img.width();
  const int h = img.height();
  GrayImage out(2 * w, 2 * h);
  for (int y = 0; y < 2 * h; ++y) {
    const int sy = y < h ? y : 2 * h - 1 - y;
    for (int x = 0; x < 2 * w; ++x) {
      const int sx = x < w ? x : 2 * w - 1 - x;
      out(x, y) = img(sx, sy);
    }
  }
  return out;
}

GrayImage center_crop(const GrayImage& img, const Region& anchor) {
  require_inside(anchor, img, "center_crop");
  GrayImage out(anchor.w, anchor.h);
  for (int y = 0; y < anchor.h; ++y) {
    const double* src = img.data() + static_cast<std::size_t>(anchor.y0 + y) * img.width() + anchor.x0;
    std::copy(src, src + anchor.w, out.data() + static_cast<std::size_t>(y) * anchor.w);
  }
  return out;
}

Region centered_region(const GrayImage& img, int w, int h) {
  return Region{(img.width() - w) / 2, (img.height() - h) / 2, w, h};
}

std::pair<GrayImage, GrayImage> grad_neumann(const GrayImage& img) {
  const int w = img.width();
  const int h = img.height();
  GrayImage gx(w, h, 0.0);
  GrayImage gy(w, h, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (x + 1 < w) gx(x, y) = img(x + 1, y) - img(x, y);
      if (y + 1 < h) gy(x, y) = img(x, y + 1) - img(x, y);
    }
  }
  return {std::move(gx), std::move(gy)};
}

GrayImage div_neumann(const GrayImage& px, const GrayImage& py) {
  if (!px.same_shape(py)) throw DimensionError("div_neumann: component shapes differ");
  const int w = px.width();
  const int h = px.height();
  GrayImage out(w, h, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      // Backward differences; the last forward difference is treated as zero.
      const double ax = (x + 1 < w ? px(x, y) : 0.0) - (x > 0 ? px(x - 1, y) : 0.0);
      const double ay = (y + 1 < h ? py(x, y) : 0.0) - (y > 0 ? py(x, y - 1) : 0.0);
      out(x, y) = ax + ay;
    }
  }
  return out;
}

std::pair<GrayImage, GrayImage> grad_periodic(const GrayImage& img) {
  const int w = img.width();
  const int h = img.height();
  GrayImage gx(w, h);
  GrayImage gy(w, h);
  for (int y = 0; y < h; ++y) {
    const int yn = y + 1 == h ? 0 : y + 1;
    for (int x = 0; x < w; ++x) {
      const int xn = x + 1 == w ? 0 : x + 1;
      gx(x, y) = img(xn, y) - img(x, y);
      gy(x, y) = img(x, yn) - img(x, y);
    }
  }
  return {std::move(gx), std::move(gy)};
}

double l2_dist_on(const GrayImage& a, const GrayImage& b, const Region& r) {
  if (!a.same_shape(b)) throw DimensionError("l2_dist_on: image shapes differ");
  require_inside(r, a, "l2_dist_on");
  double acc = 0.0;
  for (int y = r.y0; y < r.y0 + r.h; ++y) {
    for (int x = r.x0; x < r.x0 + r.w; ++x) {
      const double d = a(x, y) - b(x, y);
      acc += d * d;
    }
  }
  return std::sqrt(acc);
}

std::vector<bool> fully_known_windows(const std::vector<bool>& known, int width, int height,
                                      const Region& r, int radius) {
  if (known.size() != static_cast<std::size_t>(width) * height) {
    throw DimensionError("fully_known_windows: mask size does not match the extent");
  }
  if (radius < 0) throw ParameterError("fully_known_windows: radius must be >= 0");
  require_inside(r, GrayImage(width, height), "fully_known_windows");
  // Summed-area table of unknown pixels; windows wider than the grid see every pixel.
  const std::size_t sw = static_cast<std::size_t>(width) + 1;
  std::vector<long> sat(sw * (height + 1), 0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      sat[(y + 1) * sw + x + 1] = sat[y * sw + x + 1] + sat[(y + 1) * sw + x] - sat[y * sw + x] +
                                  (known[static_cast<std::size_t>(y) * width + x] ? 0 : 1);
    }
  }
  auto rect = [&](int x0, int y0, int x1, int y1) {  // half-open, inside the grid
    return sat[y1 * sw + x1] - sat[y0 * sw + x1] - sat[y1 * sw + x0] + sat[y0 * sw + x0];
  };
  // Splits a periodic span [c - radius, c + radius] into at most two in-grid spans.
  auto spans = [&](int c, int n, std::pair<int, int> out[2]) {
    if (2 * radius + 1 >= n) {
      out[0] = {0, n};
      return 1;
    }
    const int lo = c - radius, hi = c + radius + 1;
    if (lo < 0) {
      out[0] = {0, hi};
      out[1] = {lo + n, n};
      return 2;
    }
    if (hi > n) {
      out[0] = {lo, n};
      out[1] = {0, hi - n};
      return 2;
    }
    out[0] = {lo, hi};
    return 1;
  };
  std::vector<bool> ok(static_cast<std::size_t>(r.w) * r.h);
  std::pair<int, int> xs[2], ys[2];
  for (int y = 0; y < r.h; ++y) {
    const int ny = spans(r.y0 + y, height, ys);
    for (int x = 0; x < r.w; ++x) {
      const int nx = spans(r.x0 + x, width, xs);
      long unknown = 0;
      for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) unknown += rect(xs[i].first, ys[j].first, xs[i].second, ys[j].second);
      }
      ok[static_cast<std::size_t>(y) * r.w + x] = unknown == 0;
    }
  }
  return ok;
}

GrayImage normalize_unit_range(const GrayImage& img) {
  const double lo = img.min();
  const double hi = img.max();
  GrayImage out(img.width(), img.height(), 0.0);
  if (!(hi > lo)) return out;
  const double scale = 1.0 / (hi - lo);
  auto src = img.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = std::clamp((src[i] - lo) * scale, 0.0, 1.0);
  }
  return out;
}

GrayImage normalize_unit_mass(const GrayImage& img) {
  const double total = img.sum();
  if (total == 0.0 || !std::isfinite(total)) {
    throw ParameterError("normalize_unit_mass: image has zero or non-finite mass");
  }
  GrayImage out = img;
  for (double& v : out.values()) v /= total;
  return out;
}

}  // namespace qrrestore
