#include <doctest.h>

#include "qrrestore/corrupt.hpp"
#include "qrrestore/deconv.hpp"
#include "qrrestore/imgcore.hpp"
#include "qrrestore/pipeline.hpp"
#include "qrrestore/psfest.hpp"
#include "support.hpp"

using namespace qrrestore;
using namespace qrr_test;

namespace {

bool matches_mask(const GrayImage& u3, const PatternMask& m) {
  for (std::size_t i = 0; i < u3.size(); ++i) {
    if (m.known[i] && u3.values()[i] != m.values.values()[i]) return false;
  }
  return true;
}

bool is_binary(const GrayImage& u) {
  for (double v : u.values()) {
    if (v != 0.0 && v != 1.0) return false;
  }
  return true;
}

PipelineConfig config(Variant v) {
  PipelineConfig cfg;
  cfg.variant = v;
  return cfg;
}

}  // namespace

TEST_CASE("variant names") {
  CHECK(parse_variant("d") == Variant::D);
  CHECK(parse_variant("UPSF") == Variant::UPSF);
  CHECK(parse_variant("fpsf") == Variant::FPSF);
  CHECK(to_string(Variant::UPSF) == "UPSF");
  CHECK_THROWS_AS(parse_variant("blind"), ParameterError);
}

TEST_CASE("clean: a clean input is returned unchanged by every variant") {
  const GrayImage z = code(1);
  const QrGeometry g = infer_geometry(z);
  for (Variant v : {Variant::D, Variant::UPSF, Variant::FPSF}) {
    const CleanResult r = clean(z, z, g, config(v));
    CHECK(r.u3_final == z);
    CHECK(r.variant == v);
    CHECK(r.u2.has_value() == (v != Variant::D));
    CHECK(r.psf.has_value() == (v != Variant::D));
    CHECK(r.lambda2_used.has_value() == (v != Variant::D));
  }
}

TEST_CASE("clean: light gaussian blur round trip") {
  const GrayImage z = code(2);
  const GrayImage f = corrupt(z, {BlurSpec::gaussian(3, 1), {}});
  const CleanResult r = clean(f, z, infer_geometry(z), config(Variant::FPSF));
  CHECK(agreement(r.u3_final, z) >= 0.999);
}

TEST_CASE("clean: denoising only on salt and pepper noise") {
  const GrayImage z = code(2);
  const GrayImage f = corrupt(z, {BlurSpec::none(), parse_noise("sp:0.2", 5)});
  const CleanResult r = clean(f, z, infer_geometry(z), config(Variant::D));
  CHECK(agreement(r.u3_final, z) >= 0.99);
}

TEST_CASE("clean: outputs are binary and carry the required patterns") {
  const GrayImage z = code(3);
  const QrGeometry g = infer_geometry(z);
  const PatternMask m = required_pattern_mask(g);
  const GrayImage f = corrupt(z, {BlurSpec::motion(11), parse_noise("gauss:0.1", 2)});
  for (Variant v : {Variant::D, Variant::UPSF, Variant::FPSF}) {
    PipelineConfig cfg = config(v);
    for (ThresholdMode mode : {ThresholdMode::per_pixel, ThresholdMode::per_block}) {
      cfg.threshold = mode;
      const CleanResult r = clean(f, z, g, cfg);
      CHECK(is_binary(r.u3_final));
      CHECK(matches_mask(r.u3_final, m));
      CHECK(r.timings.total() >= 0.0);
    }
  }
}

TEST_CASE("FPSF at lambda1 = 0 reproduces UPSF") {
  const GrayImage z = code(1);
  const GrayImage f = corrupt(z, {BlurSpec::gaussian(7, 3), parse_noise("sp:0.1", 3)});
  PipelineConfig cfg;
  cfg.candidate_sizes = {1, 3, 5, 7, 9, 11};
  const CleanSession s(f, z, infer_geometry(z), cfg);
  const CleanResult a = s.run(Variant::UPSF, cfg.lambda1);
  const CleanResult b = s.run(Variant::FPSF, 0.0);
  REQUIRE(a.psf.has_value());
  REQUIRE(b.psf.has_value());
  CHECK(*a.psf == *b.psf);
  CHECK(a.u3_final == b.u3_final);
}

TEST_CASE("clean is deterministic and sessions match clean()") {
  const GrayImage z = code(1);
  const QrGeometry g = infer_geometry(z);
  const GrayImage f = corrupt(z, {BlurSpec::gaussian(7, 3), parse_noise("sp:0.2", 4)});
  const CleanResult a = clean(f, z, g, config(Variant::FPSF));
  const CleanResult b = clean(f, z, g, config(Variant::FPSF));
  CHECK(a.u3_final == b.u3_final);
  CHECK(*a.u2 == *b.u2);
  CHECK(*a.psf == *b.psf);
  const CleanSession s(f, z, g, config(Variant::FPSF));
  CHECK(s.run().u3_final == a.u3_final);
}

TEST_CASE("KnownReference") {
  const GrayImage z = code(2);
  const QrGeometry g = infer_geometry(z);
  const PatternMask m = required_pattern_mask(g);
  const Region c1 = c1_region(g);
  ReadLog log;
  const KnownReference ref(z, m, c1, &log);
  for (int y = 0; y < z.height(); ++y) {
    for (int x = 0; x < z.width(); ++x) {
      CHECK(ref.allowed(x, y) == (m.is_known(x, y) || c1.contains(x, y)));
      CHECK(ref.image()(x, y) == (ref.allowed(x, y) ? z(x, y) : 0.5));
    }
  }
  const int cx = g.quiet_px + 10 * g.module_px;
  CHECK_FALSE(ref.allowed(cx, cx));
  CHECK_THROWS_AS(ref.at(cx, cx), ContractViolation);
  CHECK(ref.at(0, 0) == z(0, 0));
  CHECK(ref.corner() == center_crop(z, c1));
}

TEST_CASE("known-view residuals ignore unknown pixels under the kernel") {
  const GrayImage z = code(2);
  const QrGeometry g = infer_geometry(z);
  const PatternMask m = required_pattern_mask(g);
  const Region c1 = c1_region(g);
  const KnownReference ref(z, m, c1);
  const std::vector<bool> known = ref.known_set();
  const Kernel k = gaussian_kernel(7, 3);
  const GrayImage f = convolve_periodic(z, k);

  // The 0.5 fill leaks into the C1 residual unless windows are restricted.
  CHECK(estimate_lambda2(ref.image(), f, k, c1) < 1e4);
  CHECK(estimate_lambda2(ref.image(), f, k, c1, &known) == kLambda2Cap);
  CHECK(c1_residual(ref.image(), f, k, c1, &known) <= 1e-20);
  CHECK(c1_residual(ref.image(), f, k, c1) > 1.0);

  // With everything known the restricted forms agree with the plain ones.
  const std::vector<bool> everything(z.size(), true);
  GrayImage noisy = f;
  Rng rng(4);
  for (double& v : noisy.values()) v += 0.05 * rng.normal();
  CHECK(c1_residual(z, noisy, k, c1, &everything) == c1_residual(z, noisy, k, c1));
  CHECK(estimate_lambda2(z, noisy, k, c1, &everything) == estimate_lambda2(z, noisy, k, c1));

  // A footprint wider than the known neighbourhood leaves nothing to score.
  CHECK_THROWS_AS(c1_residual(ref.image(), f, Kernel::flat(2 * c1.w + 1), c1, &known),
                  ParameterError);
}

TEST_CASE("clean never reads z outside the known region") {
  const GrayImage z = code(2);
  const QrGeometry g = infer_geometry(z);
  const PatternMask m = required_pattern_mask(g);
  const Region c1 = c1_region(g);
  const GrayImage f = corrupt(z, {BlurSpec::gaussian(7, 3), parse_noise("sp:0.2", 6)});

  GrayImage scrambled = z;
  Rng rng(1);
  for (int y = 0; y < z.height(); ++y) {
    for (int x = 0; x < z.width(); ++x) {
      if (!m.is_known(x, y) && !c1.contains(x, y)) scrambled(x, y) = rng.uniform();
    }
  }

  for (Variant v : {Variant::D, Variant::UPSF, Variant::FPSF}) {
    ReadLog log;
    const CleanResult r = clean(f, z, g, config(v), &log);
    REQUIRE(log.read.size() == z.size());
    bool inside = true;
    std::size_t reads = 0;
    for (int y = 0; y < z.height(); ++y) {
      for (int x = 0; x < z.width(); ++x) {
        if (!log.read[static_cast<std::size_t>(y) * z.width() + x]) continue;
        ++reads;
        inside = inside && (m.is_known(x, y) || c1.contains(x, y));
      }
    }
    CHECK(inside);
    CHECK(reads > 0);
    CHECK(clean(f, scrambled, g, config(v)).u3_final == r.u3_final);
  }
}

TEST_CASE("clean rejects mismatched inputs") {
  const GrayImage z = code(1);
  CHECK_THROWS(clean(GrayImage(10, 10), z, infer_geometry(z), PipelineConfig{}));
}
