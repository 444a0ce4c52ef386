#include "qrrestore/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>

#include "qrrestore/imgcore.hpp"

namespace qrrestore {

Variant parse_variant(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "d") return Variant::D;
  if (lower == "upsf") return Variant::UPSF;
  if (lower == "fpsf") return Variant::FPSF;
  throw ParameterError("unknown variant '" + std::string(s) + "' (expected d, upsf or fpsf)");
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::D:
      return "D";
    case Variant::UPSF:
      return "UPSF";
    case Variant::FPSF:
      return "FPSF";
  }
  return "?";
}

KnownReference::KnownReference(const GrayImage& z, const PatternMask& mask, const Region& c1,
                               ReadLog* log)
    : z_(z), mask_(mask), c1_(c1), log_(log), view_(z.width(), z.height(), 0.5) {
  if (!z.same_shape(mask.values)) {
    throw DimensionError("clean reference does not match the geometry extent");
  }
  require_inside(c1, z, "clean reference");
  if (log_) *log_ = ReadLog{z.width(), z.height(), std::vector<bool>(z.size(), false)};
  for (int y = 0; y < z.height(); ++y) {
    for (int x = 0; x < z.width(); ++x) {
      if (allowed(x, y)) view_(x, y) = at(x, y);
    }
  }
}

bool KnownReference::allowed(int x, int y) const {
  return c1_.contains(x, y) || mask_.is_known(x, y);
}

double KnownReference::at(int x, int y) const {
  if (!allowed(x, y)) {
    throw ContractViolation("read of the clean reference outside the known region at (" +
                            std::to_string(x) + "," + std::to_string(y) + ")");
  }
  if (log_) log_->read[static_cast<std::size_t>(y) * z_.width() + x] = true;
  return z_(x, y);
}

GrayImage KnownReference::corner() const { return center_crop(view_, c1_); }

std::vector<bool> KnownReference::known_set() const {
  std::vector<bool> k(z_.size());
  for (int y = 0; y < z_.height(); ++y) {
    for (int x = 0; x < z_.width(); ++x) k[static_cast<std::size_t>(y) * z_.width() + x] = allowed(x, y);
  }
  return k;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <typename Fn>
auto in_stage(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const ContractViolation&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

}  // namespace

CleanSession::CleanSession(const GrayImage& f, const GrayImage& z, const QrGeometry& g,
                           const PipelineConfig& cfg, ReadLog* log)
    : cfg_(cfg), geometry_(g) {
  in_stage("setup", [&] {
    g.validate();
    if (!f.same_shape(z)) throw DimensionError("corrupted and clean images differ in size");
    if (z.width() != g.extent() || z.height() != g.extent()) {
      throw DimensionError("geometry extent does not match the image");
    }
    c1_ = c1_region(g, cfg.c1_mode);
    mask_ = required_pattern_mask(g);
    return 0;
  });
  const KnownReference ref(z, mask_, c1_, log);
  reference_ = ref.image();
  known_ = ref.known_set();

  const auto t0 = Clock::now();
  DenoiseResult dn = in_stage("denoise", [&] { return denoise(f, ref.corner(), c1_, cfg.tv); });
  u1_ = std::move(dn.u1);
  trace_ = std::move(dn.trace);
  denoise_s_ = seconds_since(t0);
}

CleanResult CleanSession::run(Variant variant, double lambda1) const {
  CleanResult r;
  r.variant = variant;
  r.u1 = u1_;
  r.trace = trace_;
  r.timings.denoise_s = denoise_s_;

  GrayImage restored = u1_;
  if (variant != Variant::D) {
    auto t0 = Clock::now();
    const std::vector<int> sizes = cfg_.candidate_sizes.empty()
                                       ? default_candidate_sizes(std::min(c1_.w, c1_.h))
                                       : cfg_.candidate_sizes;
    KernelSelection sel = in_stage("psf", [&] {
      if (variant == Variant::UPSF) return uniform_psf(reference_, u1_, c1_, sizes, &known_);
      const GrayImage phi_full =
          estimate_psf_full(center_crop(u1_, c1_), center_crop(reference_, c1_), lambda1);
      return select_kernel(phi_full, reference_, u1_, c1_, PsfEstimateConfig{lambda1, sizes}, &known_);
    });
    r.timings.psf_s = seconds_since(t0);

    t0 = Clock::now();
    DeconvConfig dc = cfg_.deconv;
    if (!dc.lambda2) {
      dc.lambda2 = in_stage("lambda2", [&] { return estimate_lambda2(reference_, u1_, sel.kernel, c1_, &known_); });
    }
    restored = in_stage("deconv", [&] { return atv_deconvolve(u1_, sel.kernel, dc); });
    r.timings.deconv_s = seconds_since(t0);
    r.lambda2_used = dc.lambda2;
    r.psf = sel.kernel;
    r.psf_selection = std::move(sel);
    r.u2 = restored;
  }

  const auto t0 = Clock::now();
  Binarized bin = in_stage("threshold", [&] {
    return cfg_.threshold == ThresholdMode::per_pixel
               ? threshold_per_pixel(restored, reference_, c1_)
               : threshold_per_block(restored, reference_, c1_, geometry_);
  });
  r.threshold = std::move(bin.report);
  r.u3_final = reinsert_patterns(bin.image, mask_);
  r.timings.threshold_s = seconds_since(t0);
  return r;
}

CleanResult clean(const GrayImage& f, const GrayImage& z, const QrGeometry& g,
                  const PipelineConfig& cfg, ReadLog* log) {
  return CleanSession(f, z, g, cfg, log).run();
}

}  // namespace qrrestore
