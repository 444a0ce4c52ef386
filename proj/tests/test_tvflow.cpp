#include <doctest.h>

#include <vector>

#include "qrrestore/corrupt.hpp"
#include "qrrestore/imgcore.hpp"
#include "qrrestore/qrgeom.hpp"
#include "qrrestore/tvflow.hpp"
#include "support.hpp"

using namespace qrrestore;
using namespace qrr_test;

namespace {

struct Corner {
  Region c1;
  GrayImage z_corner;
};

Corner corner_of(const GrayImage& z) {
  const Region c1 = c1_region(infer_geometry(z));
  return {c1, center_crop(z, c1)};
}

// 1D no-flux scheme written out directly on a vector.
std::vector<double> step_1d(const std::vector<double>& u, const std::vector<double>& alpha,
                            double mu, double dt, double eps) {
  const std::size_t n = u.size();
  std::vector<double> flux(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double g = u[i + 1] - u[i];
    flux[i] = alpha[i] * g / std::sqrt(g * g + eps * eps);
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = u[i] + mu * dt * (flux[i] - (i > 0 ? flux[i - 1] : 0.0));
  }
  return out;
}

}  // namespace

TEST_CASE("TvFlowParams validation") {
  TvFlowParams p;
  CHECK_NOTHROW(p.validate());
  for (auto bad : {&TvFlowParams::beta, &TvFlowParams::sigma_g, &TvFlowParams::dt,
                   &TvFlowParams::eps_reg}) {
    TvFlowParams q;
    q.*bad = 0.0;
    CHECK_THROWS_AS(q.validate(), ParameterError);
  }
  p.patience = 0;
  CHECK_THROWS_AS(p.validate(), ParameterError);
}

TEST_CASE("alpha_weight") {
  const TvFlowParams p;
  const GrayImage flat = alpha_weight(GrayImage(12, 9, 0.4), p);
  for (double a : flat.values()) CHECK(a == 1.0);

  GrayImage step(20, 5, 0.0);
  for (int y = 0; y < 5; ++y) {
    for (int x = 10; x < 20; ++x) step(x, y) = 1.0;
  }
  // Oracle: centre tap of the normalized radius-3 Gaussian (sigma 1) applied
  // to a unit jump, then 1 / sqrt(1 + g^2 / 0.05^2).
  const GrayImage a = alpha_weight(step, p);
  for (int y = 0; y < 5; ++y) CHECK(a(9, y) == doctest::Approx(0.12432537379083265).epsilon(1e-13));
  for (double v : a.values()) {
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }

  TvFlowParams loose;
  loose.beta = 1e9;
  const GrayImage flat_alpha = alpha_weight(code(1), loose);
  for (double v : flat_alpha.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("flow_step matches a hand-written 1D scheme") {
  Rng rng(5);
  std::vector<double> u(40), alpha(40);
  for (auto& v : u) v = rng.uniform();
  for (auto& v : alpha) v = rng.uniform(0.1, 1.0);
  GrayImage ui(40, 1, u), ai(40, 1, alpha);
  for (int it = 0; it < 25; ++it) {
    u = step_1d(u, alpha, 1.3, 1e-4, 1e-3);
    ui = flow_step(ui, ai, 1.3, 1e-4, 1e-3);
  }
  for (int i = 0; i < 40; ++i) CHECK(ui(i, 0) == doctest::Approx(u[i]).epsilon(1e-12));
}

TEST_CASE("flow_step: constant fixed point and conserved mean") {
  const GrayImage alpha = random_image(17, 13, 1, 0.1, 1.0);
  const GrayImage flat(17, 13, 0.3);
  CHECK(flow_step(flat, alpha, 2.0, 0.01, 1e-3) == flat);

  GrayImage u = random_image(17, 13, 2);
  const double mean = u.mean();
  for (int i = 0; i < 50; ++i) u = flow_step(u, alpha, 1.0, 1e-4, 1e-3);
  CHECK(u.mean() == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("stable_step") {
  TvFlowParams p;
  CHECK(stable_step(1.0, 1.0, p) == doctest::Approx(2e-4));
  CHECK(stable_step(1e-6, 1.0, p) == p.dt);
  CHECK(stable_step(1.0, 2.0, p) < stable_step(1.0, 1.0, p));
}

TEST_CASE("denoise: a clean input stops at t = 0") {
  const GrayImage z = code(1);
  const Corner c = corner_of(z);
  const DenoiseResult r = denoise(z, c.z_corner, c.c1, TvFlowParams{});
  CHECK(r.trace.t_stop == 0.0);
  CHECK(r.trace.stop_index == 0);
  CHECK(r.u1 == z);
}

TEST_CASE("denoise: t_max = 0 returns the input") {
  const GrayImage z = code(2);
  const GrayImage f = corrupt(z, {BlurSpec::gaussian(7, 3), parse_noise("sp:0.2", 1)});
  const Corner c = corner_of(z);
  TvFlowParams p;
  p.t_max = 0.0;
  const DenoiseResult r = denoise(f, c.z_corner, c.c1, p);
  CHECK(r.u1 == f);
  CHECK(r.trace.times.size() == 1);
}

TEST_CASE("denoise on salt and pepper noise") {
  const GrayImage z = code(2);
  const GrayImage f = corrupt(z, {BlurSpec::none(), parse_noise("sp:0.3", 8)});
  const Corner c = corner_of(z);
  const double fmin = f.min(), fmax = f.max();
  long steps = 0;
  bool energy_ok = true, bounds_ok = true;
  const DenoiseResult r = denoise(f, c.z_corner, c.c1, TvFlowParams{}, [&](const FlowStepInfo& s) {
    ++steps;
    energy_ok = energy_ok && s.energy_after <= s.energy_before * (1.0 + 1e-12);
    bounds_ok = bounds_ok && s.u->min() >= fmin - 1e-12 && s.u->max() <= fmax + 1e-12;
  });
  CHECK(steps > 0);
  CHECK(energy_ok);
  CHECK(bounds_ok);
  REQUIRE(r.trace.corner_dist.size() >= 2);
  CHECK(r.trace.corner_dist[1] < r.trace.corner_dist[0]);
  CHECK(r.trace.t_stop > 0.0);
  CHECK(r.trace.corner_dist[r.trace.stop_index] < r.trace.corner_dist[0]);
  CHECK(r.u1.mean() == doctest::Approx(f.mean()).epsilon(1e-10));
  for (double d : r.trace.corner_dist) CHECK(d >= r.trace.corner_dist[r.trace.stop_index]);

  const DenoiseResult again = denoise(f, c.z_corner, c.c1, TvFlowParams{});
  CHECK(again.u1 == r.u1);
  CHECK(again.trace.corner_dist == r.trace.corner_dist);
}

TEST_CASE("denoise rejects mismatched corners") {
  const GrayImage z = code(1);
  const Corner c = corner_of(z);
  CHECK_THROWS_AS(denoise(z, GrayImage(3, 3), c.c1, TvFlowParams{}), DimensionError);
  CHECK_THROWS_AS(denoise(GrayImage(10, 10), c.z_corner, c.c1, TvFlowParams{}), DimensionError);
}
