#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qrrestore/corrupt.hpp"
#include "qrrestore/harness/decoder.hpp"
#include "qrrestore/harness/phase_diagram.hpp"
#include "qrrestore/harness/sweep_spec.hpp"
#include "qrrestore/pipeline.hpp"
#include "qrrestore/qrgeom.hpp"

namespace qrrestore::harness {

struct CodeFixture {
  int id = 0;
  GrayImage clean;
  QrGeometry geometry;
  std::string payload;
};

/// Reads `codes.tsv` (id, file, version, payload) from `dir` and the images
/// it lists; geometry is inferred from each image.
std::vector<CodeFixture> load_codes(const std::filesystem::path& dir);
const CodeFixture& find_code(const std::vector<CodeFixture>& codes, int id);

struct SweepOptions {
  std::uint64_t master_seed = 1;
  int workers = 1;
  /// Check decoded payloads against the fixture payload.
  bool match_payload = true;
};

/// Noise seed of one realization. Depends only on the master seed, the code,
/// the corruption and the realization index, so every variant, lambda1 and
/// grid layout sees the same corrupted images.
std::uint64_t realization_seed(std::uint64_t master, int code_id, const BlurSpec& b,
                               const NoiseSpec& n, int realization);

/// One diagram per code x variant x lambda1 (lambda1 only for FPSF), in that
/// order. Cells and realizations run on `workers` threads; each work item
/// writes its own slot, so results do not depend on the worker count.
std::vector<PhaseDiagram> run_sweep(const SweepSpec& spec, const std::vector<CodeFixture>& codes,
                                    const PipelineConfig& cfg, const DecoderAdapter& d,
                                    const SweepOptions& opt);

struct Lambda1Point {
  double lambda1 = 0.0;
  int readable = 0;
  int failed = 0;
  int realizations = 0;
  double fraction() const { return static_cast<double>(readable) / realizations; }
};

std::vector<Lambda1Point> lambda1_sweep(const CodeFixture& code, const CorruptionSpec& corruption,
                                        const std::vector<double>& lambda1_list, int realizations,
                                        const PipelineConfig& cfg, const DecoderAdapter& d,
                                        const SweepOptions& opt);
std::string emit_lambda1_csv(const std::vector<Lambda1Point>& curve);

struct VariantCase {
  int code_id = 0;
  BlurSpec blur;
  NoiseSpec noise;  // seed unused
};

struct VariantRow {
  VariantCase c;
  int realizations = 0;
  int unprocessed = 0;
  int d = 0;
  int upsf = 0;
  std::vector<double> lambda1;
  std::vector<int> fpsf;  // one count per lambda1
  int failed = 0;         // clean() failures over all variants
  int fpsf_best() const;
  /// lambda1 values reaching fpsf_best().
  std::vector<double> best_lambda1() const;
};

std::vector<VariantRow> variant_table(const std::vector<VariantCase>& cases,
                                      const std::vector<CodeFixture>& codes, int realizations,
                                      const std::vector<double>& lambda1_list,
                                      const PipelineConfig& cfg, const DecoderAdapter& d,
                                      const SweepOptions& opt);
std::string emit_variant_csv(const std::vector<VariantRow>& rows);

/// Writes cells.csv, heatmap_unprocessed.pgm and heatmap_cleaned.pgm (first
/// diagram) plus numbered heatmaps for any further diagrams, and manifest.txt.
void write_sweep_outputs(const std::filesystem::path& dir, const SweepSpec& spec,
                         const std::vector<PhaseDiagram>& diagrams, const DecoderAdapter& d,
                         const SweepOptions& opt, double wall_seconds);

}  // namespace qrrestore::harness
