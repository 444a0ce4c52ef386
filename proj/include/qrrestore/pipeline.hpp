#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qrrestore/binarize.hpp"
#include "qrrestore/deconv.hpp"
#include "qrrestore/image.hpp"
#include "qrrestore/psfest.hpp"
#include "qrrestore/qrgeom.hpp"
#include "qrrestore/tvflow.hpp"

namespace qrrestore {

/// D: denoise + threshold. UPSF: flat kernel of the best size. FPSF: kernel
/// estimated from the finder corner.
enum class Variant { D, UPSF, FPSF };

Variant parse_variant(std::string_view s);
std::string to_string(Variant v);

enum class ThresholdMode { per_pixel, per_block };

struct PipelineConfig {
  Variant variant = Variant::FPSF;
  double lambda1 = 10000.0;
  TvFlowParams tv;
  DeconvConfig deconv;
  C1Mode c1_mode = C1Mode::with_quiet;
  ThresholdMode threshold = ThresholdMode::per_pixel;
  /// Kernel sizes tried by UPSF/FPSF; empty means every odd size up to C1.
  std::vector<int> candidate_sizes;
};

struct StageTimings {
  double denoise_s = 0.0;
  double psf_s = 0.0;
  double deconv_s = 0.0;
  double threshold_s = 0.0;
  double total() const { return denoise_s + psf_s + deconv_s + threshold_s; }
};

struct CleanResult {
  Variant variant = Variant::FPSF;
  GrayImage u1;
  std::optional<GrayImage> u2;
  GrayImage u3_final;
  std::optional<Kernel> psf;
  std::optional<KernelSelection> psf_selection;
  FlowTrace trace;
  ThresholdReport threshold;
  std::optional<double> lambda2_used;
  StageTimings timings;
};

/// Failure inside one pipeline stage; what() is prefixed with the stage name.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// Raised when code asks the clean reference for a pixel that is not known a
/// priori (outside the required-pattern mask and C1).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Per-pixel record of which reference pixels were read.
struct ReadLog {
  int width = 0;
  int height = 0;
  std::vector<bool> read;
};

/// The only gateway to the clean reference z inside the pipeline.
///
/// Copies the a-priori-known pixels (required-pattern mask and C1) into a
/// working image; every other pixel is set to 0.5 without touching z.
class KnownReference {
 public:
  KnownReference(const GrayImage& z, const PatternMask& mask, const Region& c1,
                 ReadLog* log = nullptr);

  bool allowed(int x, int y) const;
  /// Throws ContractViolation for pixels outside the known set.
  double at(int x, int y) const;
  const GrayImage& image() const { return view_; }
  GrayImage corner() const;
  /// allowed() for every pixel, row-major.
  std::vector<bool> known_set() const;

 private:
  const GrayImage& z_;
  const PatternMask& mask_;
  Region c1_;
  ReadLog* log_;
  GrayImage view_;
};

/// Step (i) runs once; variants and lambda1 values then reuse u1.
class CleanSession {
 public:
  CleanSession(const GrayImage& f, const GrayImage& z, const QrGeometry& g,
               const PipelineConfig& cfg, ReadLog* log = nullptr);

  CleanResult run(Variant variant, double lambda1) const;
  CleanResult run() const { return run(cfg_.variant, cfg_.lambda1); }

  const GrayImage& u1() const { return u1_; }
  const FlowTrace& trace() const { return trace_; }
  const Region& c1() const { return c1_; }

 private:
  PipelineConfig cfg_;
  QrGeometry geometry_;
  Region c1_;
  PatternMask mask_;
  GrayImage reference_;
  std::vector<bool> known_;
  GrayImage u1_;
  FlowTrace trace_;
  double denoise_s_ = 0.0;
};

/// Steps (i)-(iv) for cfg.variant, followed by pattern reinsertion.
CleanResult clean(const GrayImage& f, const GrayImage& z, const QrGeometry& g,
                  const PipelineConfig& cfg, ReadLog* log = nullptr);

}  // namespace qrrestore
