#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qrrestore/corrupt.hpp"
#include "qrrestore/image.hpp"

namespace qrrestore::harness {

struct Cell {
  int blur_index = 0;
  int noise_index = 0;
  int unprocessed_readable = 0;
  int cleaned_readable = 0;
  /// Realizations where clean() threw; the cleaned fraction is NA if > 0.
  int cleaned_failed = 0;

  bool operator==(const Cell&) const = default;
};

/// Readability over a blur axis (rows) x noise axis (columns) for one code,
/// variant and lambda1. Cells are stored row-major.
struct PhaseDiagram {
  int code_id = 0;
  std::string variant;
  std::optional<double> lambda1;  // FPSF only
  std::uint64_t master_seed = 0;
  std::string decoder_id;
  int realizations = 0;
  std::vector<BlurSpec> blur_axis;
  std::vector<NoiseSpec> noise_axis;  // seeds unused
  std::vector<Cell> cells;

  const Cell& at(int blur_index, int noise_index) const;
  double unprocessed_fraction(const Cell& c) const;
  std::optional<double> cleaned_fraction(const Cell& c) const;

  bool operator==(const PhaseDiagram&) const = default;
};

/// One row per cell: code, variant, lambda1, master seed, decoder, blur,
/// noise, indices, realizations, counts and both fractions.
std::string emit_csv(const std::vector<PhaseDiagram>& diagrams);
std::vector<PhaseDiagram> parse_csv(std::string_view text);

/// Heatmap with one `cell_px` square per cell, intensity = fraction.
/// NA cells are painted black.
GrayImage heatmap(const PhaseDiagram& pd, bool cleaned, int cell_px = 16);

struct PhaseDiagramPaths {
  std::filesystem::path csv;
  std::filesystem::path heatmap_unprocessed;
  std::filesystem::path heatmap_cleaned;
};

void emit_phase_diagram(const PhaseDiagram& pd, const PhaseDiagramPaths& paths, int cell_px = 16);

/// Minimal RFC 4180 field handling shared by the CSV writers.
std::string csv_field(std::string_view s);
std::vector<std::vector<std::string>> parse_csv_rows(std::string_view text);

}  // namespace qrrestore::harness
