#include "qrrestore/binarize.hpp"

#include <algorithm>

#include "qrrestore/kernels.hpp"

namespace qrrestore {

namespace {

std::vector<double> restrict_to(const GrayImage& img, const Region& r) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(r.w) * r.h);
  for (int y = r.y0; y < r.y0 + r.h; ++y) {
    for (int x = r.x0; x < r.x0 + r.w; ++x) out.push_back(img(x, y));
  }
  return out;
}

ThresholdReport calibrate(const std::vector<double>& values, const std::vector<double>& target) {
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  ThresholdReport rep;
  rep.candidates.resize(kThresholdCandidates);
  for (int i = 0; i < kThresholdCandidates; ++i) {
    rep.candidates[i] =
        i == kThresholdCandidates - 1 ? hi : lo + (hi - lo) * i / (kThresholdCandidates - 1);
  }
  rep.scores = kernels::parallel::threshold_scores(values, target, rep.candidates);
  // Candidates ascend, so the first minimum is the smallest threshold.
  const auto best = std::min_element(rep.scores.begin(), rep.scores.end());
  rep.chosen = rep.candidates[static_cast<std::size_t>(best - rep.scores.begin())];
  return rep;
}

}  // namespace

Binarized threshold_per_pixel(const GrayImage& u2, const GrayImage& z, const Region& c1) {
  if (!u2.same_shape(z)) throw DimensionError("threshold: u2 and z shapes differ");
  require_inside(c1, u2, "threshold");
  ThresholdReport rep = calibrate(restrict_to(u2, c1), restrict_to(z, c1));
  GrayImage out(u2.width(), u2.height());
  auto src = u2.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] >= rep.chosen ? 1.0 : 0.0;
  return {std::move(out), std::move(rep)};
}

Binarized threshold_per_block(const GrayImage& u2, const GrayImage& z, const Region& c1,
                              const QrGeometry& g) {
  if (!u2.same_shape(z)) throw DimensionError("threshold: u2 and z shapes differ");
  require_inside(c1, u2, "threshold");
  const int m = g.module_px;
  if (m < 1 || u2.width() % m != 0 || u2.height() % m != 0 || c1.x0 % m != 0 || c1.y0 % m != 0 ||
      c1.w % m != 0 || c1.h % m != 0 || g.quiet_px % m != 0) {
    throw DimensionError("threshold_per_block: image and C1 must be tiled by whole modules");
  }

  // Every pixel carries the mean of its block.
  GrayImage means(u2.width(), u2.height());
  const double inv = 1.0 / (static_cast<double>(m) * m);
  for (int by = 0; by < u2.height(); by += m) {
    for (int bx = 0; bx < u2.width(); bx += m) {
      double acc = 0.0;
      for (int y = by; y < by + m; ++y) {
        for (int x = bx; x < bx + m; ++x) acc += u2(x, y);
      }
      const double mean = acc * inv;
      for (int y = by; y < by + m; ++y) {
        for (int x = bx; x < bx + m; ++x) means(x, y) = mean;
      }
    }
  }
  return threshold_per_pixel(means, z, c1);
}

}  // namespace qrrestore
