#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "qrrestore/image.hpp"

namespace qrrestore {

enum class BlurFamily { none, gaussian, motion };

struct BlurSpec {
  BlurFamily family = BlurFamily::none;
  int size = 1;         // gaussian: odd kernel side
  double sigma = 1.0;   // gaussian: standard deviation in pixels
  double length = 1.0;  // motion: pixels
  double angle = 30.0;  // motion: degrees, counterclockwise

  static BlurSpec none() { return {}; }
  static BlurSpec gaussian(int size, double sigma) {
    return {BlurFamily::gaussian, size, sigma, 1.0, 30.0};
  }
  static BlurSpec motion(double length, double angle = 30.0) {
    return {BlurFamily::motion, 1, 1.0, length, angle};
  }
  bool operator==(const BlurSpec&) const = default;
};

enum class NoiseFamily { none, gaussian, uniform, salt_pepper, speckle };

struct NoiseSpec {
  NoiseFamily family = NoiseFamily::none;
  /// gaussian: std dev s; uniform: interval length a; salt_pepper: density d;
  /// speckle: variance v.
  double param = 0.0;
  std::uint64_t seed = 0;
  bool operator==(const NoiseSpec&) const = default;
};

struct CorruptionSpec {
  BlurSpec blur;
  NoiseSpec noise;
};

Kernel gaussian_kernel(int size, double sigma);

/// Anti-aliased line: a cell's weight is max(0, 1 - distance from its center
/// to the segment of the given length through the origin), then unit mass.
/// The result is trimmed to the smallest odd square holding the support.
Kernel motion_kernel(double length, double angle_deg);

Kernel blur_kernel(const BlurSpec& b);

/// Zero-padded spatial convolution by the kernel of `b` (identity for none).
GrayImage apply_blur(const GrayImage& z, const BlurSpec& b);

/// Adds noise of the given family, deterministic in n.seed.
GrayImage apply_noise(const GrayImage& img, const NoiseSpec& n);

/// normalize_unit_range(apply_noise(apply_blur(z, blur), noise)).
GrayImage corrupt(const GrayImage& z, const CorruptionSpec& spec);

/// CLI syntax: "none", "gaussian:7,3", "motion:11,30" (angle optional).
BlurSpec parse_blur(std::string_view text);
/// CLI syntax: "none", "gauss:0.05", "uni:0.6", "sp:0.2", "speckle:0.4".
NoiseSpec parse_noise(std::string_view text, std::uint64_t seed = 0);

/// Short labels in the style of the readability tables: G(7,3), M(11), Sa(0.2).
std::string describe(const BlurSpec& b);
std::string describe(const NoiseSpec& n);
/// Round-trippable CLI form of each spec.
std::string to_cli(const BlurSpec& b);
std::string to_cli(const NoiseSpec& n);

}  // namespace qrrestore
