#include <doctest.h>

#include <algorithm>

#include "qrrestore/corrupt.hpp"
#include "qrrestore/deconv.hpp"
#include "qrrestore/imgcore.hpp"
#include "support.hpp"

using namespace qrrestore;
using namespace qrr_test;

namespace {

Kernel flipped(const Kernel& k) {
  std::vector<double> w(k.weights().rbegin(), k.weights().rend());
  return Kernel(k.size(), w);
}

GrayImage dx(const GrayImage& u) {
  GrayImage g(u.width(), u.height());
  for (int y = 0; y < u.height(); ++y) {
    for (int x = 0; x < u.width(); ++x) g(x, y) = u((x + 1) % u.width(), y) - u(x, y);
  }
  return g;
}

GrayImage dy(const GrayImage& u) {
  GrayImage g(u.width(), u.height());
  for (int y = 0; y < u.height(); ++y) {
    for (int x = 0; x < u.width(); ++x) g(x, y) = u(x, (y + 1) % u.height()) - u(x, y);
  }
  return g;
}

GrayImage dxt(const GrayImage& p) {
  GrayImage g(p.width(), p.height());
  for (int y = 0; y < p.height(); ++y) {
    for (int x = 0; x < p.width(); ++x) g(x, y) = p((x + p.width() - 1) % p.width(), y) - p(x, y);
  }
  return g;
}

GrayImage dyt(const GrayImage& p) {
  GrayImage g(p.width(), p.height());
  for (int y = 0; y < p.height(); ++y) {
    for (int x = 0; x < p.width(); ++x) g(x, y) = p(x, (y + p.height() - 1) % p.height()) - p(x, y);
  }
  return g;
}

double norm(const GrayImage& a) {
  double acc = 0.0;
  for (double v : a.values()) acc += v * v;
  return std::sqrt(acc);
}

GrayImage binarize_half(const GrayImage& u) {
  GrayImage b = u;
  for (double& v : b.values()) v = v >= 0.5 ? 1.0 : 0.0;
  return b;
}

// Blur consistent with the deconvolution's boundary model.
GrayImage mirror_blur(const GrayImage& z, const Kernel& k) {
  return center_crop(convolve_periodic(mirror_extend(z), k), Region{0, 0, z.width(), z.height()});
}

}  // namespace

TEST_CASE("shrink") {
  CHECK(shrink(3.0, 1.0) == 2.0);
  CHECK(shrink(-3.0, 1.0) == -2.0);
  CHECK(shrink(0.5, 1.0) == 0.0);
  CHECK(shrink(-1.0, 1.0) == 0.0);
  CHECK(shrink(0.25, 0.0) == 0.25);
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double v = rng.uniform(-5, 5), d = rng.uniform(0, 3);
    const double expected = (v > 0 ? 1.0 : v < 0 ? -1.0 : 0.0) * std::max(0.0, std::abs(v) - d);
    CHECK(shrink(v, d) == expected);
  }
}

TEST_CASE("DeconvConfig validation") {
  DeconvConfig c;
  CHECK_NOTHROW(c.validate());
  c.lambda2 = 0.0;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c = {};
  c.n_bregman = 0;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c = {};
  CHECK_THROWS_AS(atv_deconvolve(GrayImage(8, 8), Kernel::delta(), c), ParameterError);
}

TEST_CASE("estimate_lambda2") {
  const GrayImage z = code(1);
  const Region c1{0, 0, 96, 96};
  const Kernel k = gaussian_kernel(7, 3);
  const GrayImage u1 = convolve_periodic(z, k);
  CHECK(estimate_lambda2(z, u1, k, c1) == kLambda2Cap);

  GrayImage shifted = u1;
  for (double& v : shifted.values()) v += 0.2;
  CHECK(estimate_lambda2(z, shifted, k, c1) == kLambda2Cap);

  GrayImage noisy = u1;
  for (int y = 0; y < noisy.height(); ++y) {
    for (int x = 0; x < noisy.width(); ++x) noisy(x, y) += (x + y) % 2 ? 0.1 : -0.1;
  }
  CHECK(estimate_lambda2(z, noisy, k, c1) == doctest::Approx(100.0).epsilon(1e-9));
  CHECK_THROWS_AS(estimate_lambda2(z, GrayImage(5, 5), k, c1), DimensionError);
}

TEST_CASE("atv_deconvolve: constants are fixed points") {
  DeconvConfig c;
  c.lambda2 = 50.0;
  const GrayImage out = atv_deconvolve(GrayImage(30, 20, 0.4), gaussian_kernel(5, 1), c);
  CHECK(out.width() == 30);
  CHECK(out.height() == 20);
  for (double v : out.values()) CHECK(v == doctest::Approx(0.4).epsilon(1e-10));
}

TEST_CASE("atv_deconvolve: delta kernel with strong fidelity is near identity") {
  const GrayImage z = code(1);
  DeconvConfig c;
  c.lambda2 = 1e4;
  const GrayImage out = atv_deconvolve(z, Kernel::delta(), c);
  CHECK(max_abs_diff(out, z) <= 0.05);
  CHECK(binarize_half(out) == z);
}

TEST_CASE("atv_deconvolve undoes a small gaussian blur") {
  for (int id : {1, 2}) {
    const GrayImage z = code(id);
    const Kernel k = gaussian_kernel(3, 1);
    DeconvConfig c;
    c.lambda2 = 1e4;
    const GrayImage out = atv_deconvolve(mirror_blur(z, k), k, c);
    CHECK(agreement(binarize_half(out), z) >= 0.995);
  }
}

TEST_CASE("each u-update satisfies its normal equations") {
  const GrayImage z = code(1);
  const Kernel k = gaussian_kernel(7, 3);
  const GrayImage u1 = mirror_blur(z, k);
  const GrayImage f = mirror_extend(u1);
  DeconvConfig c;
  c.lambda2 = 300.0;
  c.n_inner = 2;
  int calls = 0;
  atv_deconvolve(u1, k, c,
                 [&](const AtvSubproblem& sub, const GrayImage& u, const GrayImage& vx,
                     const GrayImage& vy) {
                   ++calls;
                   const double l2 = sub.lambda2(), l = sub.split_fidelity();
                   const Kernel kt = flipped(k);
                   const GrayImage ktku = brute_circular(brute_circular(u, k), kt);
                   const GrayImage ktf = brute_circular(f, kt);
                   const GrayImage dtdu_x = dxt(dx(u)), dtdu_y = dyt(dy(u));
                   const GrayImage dtv_x = dxt(vx), dtv_y = dyt(vy);
                   GrayImage res(u.width(), u.height()), rhs(u.width(), u.height());
                   for (std::size_t i = 0; i < u.size(); ++i) {
                     rhs.values()[i] = l2 * ktf.values()[i] + l * (dtv_x.values()[i] + dtv_y.values()[i]);
                     res.values()[i] = l2 * ktku.values()[i] +
                                       l * (dtdu_x.values()[i] + dtdu_y.values()[i]) - rhs.values()[i];
                   }
                   CHECK(norm(res) / norm(rhs) <= 1e-8);
                 });
  CHECK(calls == c.n_bregman * c.n_inner);
}
