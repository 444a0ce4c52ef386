#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <string>

#include "qrrestore/image.hpp"
#include "qrrestore/image_io.hpp"
#include "qrrestore/qrgeom.hpp"
#include "qrrestore/rng.hpp"

namespace qrr_test {

using namespace qrrestore;

inline std::string data_path(const std::string& name) { return std::string(QRR_TEST_DATA) + "/" + name; }

inline GrayImage code(int id) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "code%02d.pgm", id);
  return read_image(data_path(buf));
}

inline GrayImage random_image(int w, int h, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
  Rng rng(seed);
  GrayImage img(w, h);
  for (double& v : img.values()) v = rng.uniform(lo, hi);
  return img;
}

inline double max_abs_diff(const GrayImage& a, const GrayImage& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

inline double agreement(const GrayImage& a, const GrayImage& b) {
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a.values()[i] == b.values()[i] ? 1 : 0;
  return static_cast<double>(same) / static_cast<double>(a.size());
}

// Direct spatial circular convolution; kernel origin at its middle element.
inline GrayImage brute_circular(const GrayImage& img, const Kernel& k) {
  const int w = img.width(), h = img.height(), r = k.radius();
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int j = -r; j <= r; ++j) {
        for (int i = -r; i <= r; ++i) {
          acc += k(i + r, j + r) * img(((x - i) % w + w) % w, ((y - j) % h + h) % h);
        }
      }
      out(x, y) = acc;
    }
  }
  return out;
}

inline double kernel_l1(const Kernel& a, const Kernel& b) {
  const int n = std::max(a.size(), b.size());
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      auto at = [n](const Kernel& k, int i, int j) {
        const int off = (n - k.size()) / 2;
        const int ii = i - off, jj = j - off;
        return ii >= 0 && jj >= 0 && ii < k.size() && jj < k.size() ? k(ii, jj) : 0.0;
      };
      acc += std::abs(at(a, i, j) - at(b, i, j));
    }
  }
  return acc;
}

}  // namespace qrr_test
