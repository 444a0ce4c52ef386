#pragma once

#include <vector>

#include "qrrestore/image.hpp"

namespace qrrestore {

/// Pixel layout of a rendered QR symbol: modules of module_px pixels, a
/// square symbol of `modules` modules, surrounded by quiet_px of white.
struct QrGeometry {
  int module_px = 8;
  int modules = 21;
  int quiet_px = 32;

  int version() const { return (modules - 17) / 4; }
  int extent() const { return modules * module_px + 2 * quiet_px; }
  int quiet_modules() const { return quiet_px / module_px; }

  /// Throws ParameterError unless modules is a valid QR size (21, 25, ...).
  void validate() const;

  static QrGeometry for_version(int version, int module_px = 8, int quiet_modules = 4);
  bool operator==(const QrGeometry&) const = default;
};

enum class C1Mode { with_quiet, without_quiet };

/// Known-a-priori pixels of a QR image and their clean values.
struct PatternMask {
  std::vector<bool> known;  // row-major, image sized
  GrayImage values;         // 0 = dark, 1 = light; meaningful where known

  bool is_known(int x, int y) const {
    return known[static_cast<std::size_t>(y) * values.width() + x];
  }
};

/// Scans the first row through the upper-left finder for its 1:1:3:1:1 run
/// signature and returns the module width. Throws ParameterError("not a clean
/// QR image") when no signature is found.
int infer_module_width(const GrayImage& z);

/// Module width, quiet zone and symbol size from the upper-left finder and
/// the image extent. Reads only pixels inside the finder row it scans.
QrGeometry infer_geometry(const GrayImage& z);

/// Square anchored at the image corner: quiet zone + 7-module finder +
/// 1-module separator. without_quiet drops the quiet-zone margin.
Region c1_region(const QrGeometry& g, C1Mode mode = C1Mode::with_quiet);

/// Finders with separators, timing lines, the alignment pattern (versions
/// 2-6) and the quiet zone. Throws ParameterError for versions above 6.
PatternMask required_pattern_mask(const QrGeometry& g);

/// Overwrites the known pixels of u3 with the mask values.
GrayImage reinsert_patterns(const GrayImage& u3, const PatternMask& m);

}  // namespace qrrestore
