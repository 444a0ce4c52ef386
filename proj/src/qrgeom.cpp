#include "qrrestore/qrgeom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace qrrestore {

void QrGeometry::validate() const {
  if (module_px < 1) throw ParameterError("module width must be >= 1 pixel");
  if (modules < 21 || (modules - 21) % 4 != 0) {
    throw ParameterError("invalid QR symbol size " + std::to_string(modules) + " modules");
  }
  if (quiet_px < 0 || quiet_px % module_px != 0) {
    throw ParameterError("quiet zone must be a non-negative multiple of the module width");
  }
}

QrGeometry QrGeometry::for_version(int version, int module_px, int quiet_modules) {
  QrGeometry g{module_px, 4 * version + 17, quiet_modules * module_px};
  g.validate();
  return g;
}

namespace {

bool dark(double v) { return v < 0.5; }

// Run lengths of alternating colour starting at `start`, stepping (sx, sy),
// reading no further than the end of the fifth run.
std::vector<int> five_runs(const GrayImage& z, int x, int y, int sx, int sy) {
  std::vector<int> runs;
  if (x >= z.width() || y >= z.height()) return runs;
  bool colour = dark(z(x, y));
  int len = 0;
  while (x < z.width() && y < z.height()) {
    const bool c = dark(z(x, y));
    if (c != colour) {
      runs.push_back(len);
      if (runs.size() == 5) return runs;
      colour = c;
      len = 0;
    }
    ++len;
    x += sx;
    y += sy;
  }
  runs.push_back(len);
  return runs;
}

// Module width if `runs` has the finder signature dark 1 : light 1 : dark 3 :
// light 1 : dark 1, else 0.
int finder_module(const std::vector<int>& runs) {
  if (runs.size() != 5) return 0;
  const int total = runs[0] + runs[1] + runs[2] + runs[3] + runs[4];
  const double m = total / 7.0;
  constexpr int expected[5] = {1, 1, 3, 1, 1};
  for (int i = 0; i < 5; ++i) {
    if (std::abs(runs[i] - expected[i] * m) > 0.5 * m) return 0;
  }
  return static_cast<int>(std::lround(m));
}

struct FinderScan {
  int quiet_px;
  int module_px;
};

FinderScan scan_finder(const GrayImage& z) {
  const int n = std::min(z.width(), z.height());
  int q = 0;
  while (q < n && !dark(z(q, q))) ++q;
  if (q == n) throw ParameterError("not a clean QR image: no dark pixel on the diagonal");
  const int m = finder_module(five_runs(z, q, q, 1, 1));
  if (m == 0) throw ParameterError("not a clean QR image: no finder signature on the diagonal");
  // Confirm along the first row through the finder's central 3x3 block.
  const int row = q + 3 * m;
  if (row >= z.height() || finder_module(five_runs(z, q, row, 1, 0)) != m) {
    throw ParameterError("not a clean QR image: finder row signature mismatch");
  }
  return {q, m};
}

void paint_module(PatternMask& mask, const QrGeometry& g, int row, int col, bool is_dark) {
  const int x0 = g.quiet_px + col * g.module_px;
  const int y0 = g.quiet_px + row * g.module_px;
  const int w = mask.values.width();
  for (int y = y0; y < y0 + g.module_px; ++y) {
    for (int x = x0; x < x0 + g.module_px; ++x) {
      mask.known[static_cast<std::size_t>(y) * w + x] = true;
      mask.values(x, y) = is_dark ? 0.0 : 1.0;
    }
  }
}

}  // namespace

int infer_module_width(const GrayImage& z) { return scan_finder(z).module_px; }

QrGeometry infer_geometry(const GrayImage& z) {
  const FinderScan scan = scan_finder(z);
  if (z.width() != z.height()) throw ParameterError("not a clean QR image: image is not square");
  const int span = z.width() - 2 * scan.quiet_px;
  if (span <= 0 || span % scan.module_px != 0) {
    throw ParameterError("not a clean QR image: extent is not a whole number of modules");
  }
  QrGeometry g{scan.module_px, span / scan.module_px, scan.quiet_px};
  g.validate();
  return g;
}

Region c1_region(const QrGeometry& g, C1Mode mode) {
  const int finder = 8 * g.module_px;
  if (mode == C1Mode::without_quiet) return Region{g.quiet_px, g.quiet_px, finder, finder};
  return Region{0, 0, g.quiet_px + finder, g.quiet_px + finder};
}

PatternMask required_pattern_mask(const QrGeometry& g) {
  g.validate();
  const int version = g.version();
  if (version > 6) throw ParameterError("multi-alignment versions unsupported");
  const int e = g.extent();
  const int m = g.modules;
  PatternMask mask{std::vector<bool>(static_cast<std::size_t>(e) * e, false), GrayImage(e, e, 1.0)};

  // Quiet zone: everything outside the symbol.
  for (int y = 0; y < e; ++y) {
    for (int x = 0; x < e; ++x) {
      const bool inside = x >= g.quiet_px && x < e - g.quiet_px && y >= g.quiet_px &&
                          y < e - g.quiet_px;
      if (!inside) mask.known[static_cast<std::size_t>(y) * e + x] = true;
    }
  }

  // Finders (7x7) with their 1-module separators.
  const int origins[3][2] = {{0, 0}, {0, m - 7}, {m - 7, 0}};
  for (const auto& o : origins) {
    for (int r = -1; r <= 7; ++r) {
      for (int c = -1; c <= 7; ++c) {
        const int row = o[0] + r;
        const int col = o[1] + c;
        if (row < 0 || col < 0 || row >= m || col >= m) continue;
        const int ring = std::max(std::abs(r - 3), std::abs(c - 3));
        const bool is_dark = ring <= 1 || ring == 3;
        paint_module(mask, g, row, col, ring <= 3 && is_dark);
      }
    }
  }

  // Timing lines between the finders.
  for (int i = 8; i <= m - 9; ++i) {
    paint_module(mask, g, 6, i, i % 2 == 0);
    paint_module(mask, g, i, 6, i % 2 == 0);
  }

  if (version >= 2) {
    const int centre = m - 7;
    for (int r = -2; r <= 2; ++r) {
      for (int c = -2; c <= 2; ++c) {
        const int ring = std::max(std::abs(r), std::abs(c));
        paint_module(mask, g, centre + r, centre + c, ring != 1);
      }
    }
  }
  return mask;
}

GrayImage reinsert_patterns(const GrayImage& u3, const PatternMask& m) {
  if (!u3.same_shape(m.values)) throw DimensionError("reinsert_patterns: mask shape differs");
  GrayImage out = u3;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (m.known[i]) out.values()[i] = m.values.values()[i];
  }
  return out;
}

}  // namespace qrrestore
