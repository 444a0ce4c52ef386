#pragma once

#include <vector>

#include "qrrestore/image.hpp"
#include "qrrestore/qrgeom.hpp"

namespace qrrestore {

inline constexpr int kThresholdCandidates = 100;

struct ThresholdReport {
  std::vector<double> candidates;
  std::vector<double> scores;  // squared C1 distance per candidate
  double chosen = 0.0;
};

struct Binarized {
  GrayImage image;
  ThresholdReport report;
};

/// 100 equally spaced thresholds from min to max of u2 on C1, endpoints
/// included. Pixels with value >= t become 1. The candidate with the lowest
/// squared C1 distance to z wins; ties go to the smaller threshold.
Binarized threshold_per_pixel(const GrayImage& u2, const GrayImage& z, const Region& c1);

/// Same calibration on module-aligned block means; every block is painted
/// uniformly. Throws DimensionError if the image is not tiled by modules.
Binarized threshold_per_block(const GrayImage& u2, const GrayImage& z, const Region& c1,
                              const QrGeometry& g);

}  // namespace qrrestore
