#include <doctest.h>

#include "qrrestore/corrupt.hpp"
#include "qrrestore/kernels.hpp"
#include "support.hpp"

using namespace qrrestore;
using namespace qrr_test;
namespace ks = qrrestore::kernels::serial;
namespace kp = qrrestore::kernels::parallel;

TEST_CASE("parallel element-wise kernels are bit-identical to the serial reference") {
  const GrayImage u = random_image(67, 41, 1);
  const GrayImage alpha = random_image(67, 41, 2, 0.1, 1.0);
  CHECK(kp::flow_step(u, alpha, 1.3, 1e-3, 1e-3) == ks::flow_step(u, alpha, 1.3, 1e-3, 1e-3));

  const Kernel k = gaussian_kernel(7, 2.0);
  CHECK(kp::convolve_zero_pad(u, k) == ks::convolve_zero_pad(u, k));

  const GrayImage grad = random_image(50, 50, 3, -1, 1);
  GrayImage d1(50, 50), b1 = random_image(50, 50, 4, -0.1, 0.1);
  GrayImage d2 = d1, b2 = b1;
  ks::update_split({grad.values(), d1.values(), b1.values()}, 0.05);
  kp::update_split({grad.values(), d2.values(), b2.values()}, 0.05);
  CHECK(d1 == d2);
  ks::update_bregman({grad.values(), d1.values(), b1.values()});
  kp::update_bregman({grad.values(), d2.values(), b2.values()});
  CHECK(b1 == b2);

  std::vector<double> taus{0.0, 0.25, 0.5, 0.75, 1.0};
  const GrayImage target = random_image(67, 41, 5);
  CHECK(ks::threshold_scores(u.values(), target.values(), taus) ==
        kp::threshold_scores(u.values(), target.values(), taus));
}

TEST_CASE("parallel energy matches the serial sum up to reordering") {
  const GrayImage u = random_image(128, 96, 6);
  const GrayImage alpha = random_image(128, 96, 7);
  const double s = ks::weighted_tv_energy(u, alpha, 1e-3);
  CHECK(kp::weighted_tv_energy(u, alpha, 1e-3) == doctest::Approx(s).epsilon(1e-12));
}

TEST_CASE("update_split is the exact proximal step of |d|") {
  // Dense scan of |d| + (lambda/2)(d - w)^2 over a fine grid.
  Rng rng(8);
  const double lambda = 100.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double w = rng.uniform(-0.2, 0.2);
    std::vector<double> g{w}, d{0.0}, b{0.0};
    ks::update_split({g, d, b}, 1.0 / lambda);
    double best = 0.0, best_val = 1e300;
    for (int i = -40000; i <= 40000; ++i) {
      const double x = i * 1e-5;
      const double val = std::abs(x) + 0.5 * lambda * (x - w) * (x - w);
      if (val < best_val) {
        best_val = val;
        best = x;
      }
    }
    CHECK(std::abs(d[0] - best) <= 1e-5);
  }
}
