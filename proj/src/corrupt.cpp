#include "qrrestore/corrupt.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

#include "qrrestore/imgcore.hpp"
#include "qrrestore/kernels.hpp"
#include "qrrestore/rng.hpp"

namespace qrrestore {

Kernel gaussian_kernel(int size, double sigma) {
  if (size < 1 || size % 2 == 0) {
    throw ParameterError("gaussian kernel size must be odd and >= 1");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ParameterError("gaussian kernel sigma must be positive");
  }
  const int r = size / 2;
  std::vector<double> w(static_cast<std::size_t>(size) * size);
  for (int j = 0; j < size; ++j) {
    for (int i = 0; i < size; ++i) {
      const double dx = i - r;
      const double dy = j - r;
      w[static_cast<std::size_t>(j) * size + i] = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
    }
  }
  return Kernel(size, std::move(w));
}

Kernel motion_kernel(double length, double angle_deg) {
  if (!(length >= 1.0) || !std::isfinite(length)) {
    throw ParameterError("motion blur length must be >= 1");
  }
  // A segment is unoriented: fold the angle into [0, 180).
  double theta = std::fmod(angle_deg, 180.0);
  if (theta < 0.0) theta += 180.0;
  const double rad = theta * std::numbers::pi / 180.0;
  double c = std::cos(rad);
  double s = std::sin(rad);
  if (std::abs(c) < 1e-12) c = 0.0;
  if (std::abs(s) < 1e-12) s = 0.0;
  // Image rows grow downward, so counterclockwise motion has direction (c, -s).
  const double dir_x = c;
  const double dir_y = -s;
  const double half = (length - 1.0) / 2.0;

  const int box = static_cast<int>(std::ceil(half)) + 1;
  const int n = 2 * box + 1;
  std::vector<double> w(static_cast<std::size_t>(n) * n, 0.0);
  int extent = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double x = i - box;
      const double y = j - box;
      const double t = std::clamp(x * dir_x + y * dir_y, -half, half);
      const double ex = x - t * dir_x;
      const double ey = y - t * dir_y;
      const double weight = std::max(0.0, 1.0 - std::sqrt(ex * ex + ey * ey));
      w[static_cast<std::size_t>(j) * n + i] = weight;
      if (weight > 0.0) extent = std::max({extent, std::abs(i - box), std::abs(j - box)});
    }
  }
  const int size = 2 * extent + 1;
  std::vector<double> trimmed(static_cast<std::size_t>(size) * size);
  for (int j = 0; j < size; ++j) {
    for (int i = 0; i < size; ++i) {
      trimmed[static_cast<std::size_t>(j) * size + i] =
          w[static_cast<std::size_t>(j + box - extent) * n + (i + box - extent)];
    }
  }
  return Kernel(size, std::move(trimmed));
}

Kernel blur_kernel(const BlurSpec& b) {
  switch (b.family) {
    case BlurFamily::none:
      return Kernel::delta();
    case BlurFamily::gaussian:
      return gaussian_kernel(b.size, b.sigma);
    case BlurFamily::motion:
      return motion_kernel(b.length, b.angle);
  }
  throw ParameterError("unknown blur family");
}

GrayImage apply_blur(const GrayImage& z, const BlurSpec& b) {
  if (b.family == BlurFamily::none) return z;
  const Kernel k = blur_kernel(b);
  if (k.size() > std::min(z.width(), z.height())) {
    throw DimensionError("blur kernel of size " + std::to_string(k.size()) +
                         " does not fit the image");
  }
  return kernels::parallel::convolve_zero_pad(z, k);
}

GrayImage apply_noise(const GrayImage& img, const NoiseSpec& n) {
  const double p = n.param;
  if (!std::isfinite(p) || p < 0.0) throw ParameterError("noise parameter must be finite and >= 0");
  if (n.family == NoiseFamily::salt_pepper && p > 1.0) {
    throw ParameterError("salt and pepper density must lie in [0, 1]");
  }
  if (n.family == NoiseFamily::none) return img;

  GrayImage out = img;
  Rng rng(n.seed);
  auto v = out.values();
  switch (n.family) {
    case NoiseFamily::gaussian:
      for (double& x : v) x += p * rng.normal();
      break;
    case NoiseFamily::uniform:
      for (double& x : v) x += p * rng.uniform();
      break;
    case NoiseFamily::salt_pepper:
      for (double& x : v) {
        const double r = rng.uniform();
        if (r < p / 2.0) {
          x = 0.0;
        } else if (r < p) {
          x = 1.0;
        }
      }
      break;
    case NoiseFamily::speckle: {
      // Zero-mean uniform multiplier with variance p.
      const double half_width = std::sqrt(3.0 * p);
      for (double& x : v) x += rng.uniform(-half_width, half_width) * x;
      break;
    }
    case NoiseFamily::none:
      break;
  }
  return out;
}

GrayImage corrupt(const GrayImage& z, const CorruptionSpec& spec) {
  return normalize_unit_range(apply_noise(apply_blur(z, spec.blur), spec.noise));
}

namespace {

std::vector<double> parse_numbers(std::string_view text, std::string_view what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    std::string token(text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos));
    try {
      std::size_t used = 0;
      out.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw ParameterError("bad number '" + token + "' in " + std::string(what));
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

// Shortest form that parses back to the same double.
std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

BlurSpec parse_blur(std::string_view text) {
  if (text.empty() || text == "none") return BlurSpec::none();
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos) throw ParameterError("blur spec needs family:params");
  const std::string_view family = text.substr(0, colon);
  const auto nums = parse_numbers(text.substr(colon + 1), "blur spec");
  if (family == "gaussian" || family == "gauss" || family == "G") {
    if (nums.size() != 2) throw ParameterError("gaussian blur takes size,sigma");
    if (nums[0] != std::floor(nums[0])) throw ParameterError("gaussian size must be an integer");
    return BlurSpec::gaussian(static_cast<int>(nums[0]), nums[1]);
  }
  if (family == "motion" || family == "M") {
    if (nums.empty() || nums.size() > 2) throw ParameterError("motion blur takes length[,angle]");
    return BlurSpec::motion(nums[0], nums.size() == 2 ? nums[1] : 30.0);
  }
  throw ParameterError("unknown blur family '" + std::string(family) + "'");
}

NoiseSpec parse_noise(std::string_view text, std::uint64_t seed) {
  if (text.empty() || text == "none") return NoiseSpec{NoiseFamily::none, 0.0, seed};
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos) throw ParameterError("noise spec needs family:param");
  const std::string_view family = text.substr(0, colon);
  const auto nums = parse_numbers(text.substr(colon + 1), "noise spec");
  if (nums.size() != 1) throw ParameterError("noise spec takes exactly one parameter");
  NoiseSpec n{NoiseFamily::none, nums[0], seed};
  if (family == "gauss" || family == "gaussian") {
    n.family = NoiseFamily::gaussian;
  } else if (family == "uni" || family == "uniform") {
    n.family = NoiseFamily::uniform;
  } else if (family == "sp" || family == "saltpepper") {
    n.family = NoiseFamily::salt_pepper;
  } else if (family == "speckle") {
    n.family = NoiseFamily::speckle;
  } else {
    throw ParameterError("unknown noise family '" + std::string(family) + "'");
  }
  if (n.param < 0.0 || (n.family == NoiseFamily::salt_pepper && n.param > 1.0)) {
    throw ParameterError("noise parameter out of range");
  }
  return n;
}

std::string describe(const BlurSpec& b) {
  switch (b.family) {
    case BlurFamily::none:
      return "none";
    case BlurFamily::gaussian:
      return "G(" + std::to_string(b.size) + "," + fmt(b.sigma) + ")";
    case BlurFamily::motion:
      return b.angle == 30.0 ? "M(" + fmt(b.length) + ")"
                             : "M(" + fmt(b.length) + "," + fmt(b.angle) + ")";
  }
  return "?";
}

std::string describe(const NoiseSpec& n) {
  switch (n.family) {
    case NoiseFamily::none:
      return "none";
    case NoiseFamily::gaussian:
      return "G(" + fmt(n.param) + ")";
    case NoiseFamily::uniform:
      return "U(" + fmt(n.param) + ")";
    case NoiseFamily::salt_pepper:
      return "Sa(" + fmt(n.param) + ")";
    case NoiseFamily::speckle:
      return "Sp(" + fmt(n.param) + ")";
  }
  return "?";
}

std::string to_cli(const BlurSpec& b) {
  switch (b.family) {
    case BlurFamily::none:
      return "none";
    case BlurFamily::gaussian:
      return "gaussian:" + std::to_string(b.size) + "," + fmt(b.sigma);
    case BlurFamily::motion:
      return "motion:" + fmt(b.length) + "," + fmt(b.angle);
  }
  return "none";
}

std::string to_cli(const NoiseSpec& n) {
  switch (n.family) {
    case NoiseFamily::none:
      return "none";
    case NoiseFamily::gaussian:
      return "gauss:" + fmt(n.param);
    case NoiseFamily::uniform:
      return "uni:" + fmt(n.param);
    case NoiseFamily::salt_pepper:
      return "sp:" + fmt(n.param);
    case NoiseFamily::speckle:
      return "speckle:" + fmt(n.param);
  }
  return "none";
}

}  // namespace qrrestore
