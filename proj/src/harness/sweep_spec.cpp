#include "qrrestore/harness/sweep_spec.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <variant>

#include "qrrestore/image_io.hpp"

namespace qrrestore::harness {

void SweepSpec::validate() const {
  if (codes.empty()) throw ParameterError("sweep spec: no codes");
  if (blur_axis.empty() || noise_axis.empty()) throw ParameterError("sweep spec: empty axis");
  if (realizations < 1) throw ParameterError("sweep spec: realizations must be >= 1");
  if (variants.empty()) throw ParameterError("sweep spec: no variants");
  for (Variant v : variants) {
    if (v == Variant::FPSF && lambda1.empty()) {
      throw ParameterError("sweep spec: FPSF needs at least one lambda1");
    }
  }
  for (double l : lambda1) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw ParameterError("sweep spec: lambda1 must be >= 0");
  }
}

std::vector<double> default_lambda1_list() {
  return {1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3, 5e3, 1e4, 1.5e4, 1e5, 1e6};
}

namespace {

using Scalar = std::variant<double, std::string>;
using Value = std::vector<Scalar>;  // scalars are one-element arrays

class Lexer {
 public:
  Lexer(std::string_view s, int line) : s_(s), line_(line) {}

  Value value() {
    skip_ws();
    Value out;
    if (peek() == '[') {
      ++pos_;
      skip_ws();
      if (peek() == ']') {
        ++pos_;
        return out;
      }
      for (;;) {
        out.push_back(scalar());
        skip_ws();
        if (peek() == ',') {
          ++pos_;
          skip_ws();
          if (peek() == ']') {
            ++pos_;
            break;
          }
          continue;
        }
        if (peek() == ']') {
          ++pos_;
          break;
        }
        fail("expected ',' or ']'");
      }
    } else {
      out.push_back(scalar());
    }
    skip_ws();
    if (pos_ != s_.size() && peek() != '#') fail("trailing characters");
    return out;
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  Scalar scalar() {
    if (peek() == '"') {
      ++pos_;
      std::string out;
      while (pos_ < s_.size() && s_[pos_] != '"') {
        if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
        out += s_[pos_++];
      }
      if (peek() != '"') fail("unterminated string");
      ++pos_;
      return out;
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                s_[pos_] == '.' || s_[pos_] == '-' || s_[pos_] == '+' ||
                                s_[pos_] == '_')) {
      ++pos_;
    }
    std::string tok(s_.substr(start, pos_ - start));
    if (tok.empty()) fail("expected a value");
    std::erase(tok, '_');
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
      fail("bad number '" + tok + "'");
    }
    return v;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParameterError("sweep spec line " + std::to_string(line_) + ": " + msg);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_;
};

const std::string& as_string(const Scalar& s, const std::string& key) {
  if (const auto* p = std::get_if<std::string>(&s)) return *p;
  throw ParameterError("sweep spec: '" + key + "' expects strings");
}

double as_number(const Scalar& s, const std::string& key) {
  if (const auto* p = std::get_if<double>(&s)) return *p;
  throw ParameterError("sweep spec: '" + key + "' expects numbers");
}

int as_int(const Scalar& s, const std::string& key) {
  const double v = as_number(s, key);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw ParameterError("sweep spec: '" + key + "' expects integers");
  }
  return static_cast<int>(v);
}

const Scalar& single(const Value& v, const std::string& key) {
  if (v.size() != 1) throw ParameterError("sweep spec: '" + key + "' expects one value");
  return v.front();
}

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

SweepSpec parse_sweep_spec(std::string_view text) {
  SweepSpec spec;
  std::set<std::string> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) {
      line.remove_prefix(1);
    }
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) {
      line.remove_suffix(1);
    }
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      throw ParameterError("sweep spec line " + std::to_string(line_no) +
                           ": tables are not supported; use top-level keys");
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParameterError("sweep spec line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(line.substr(0, eq));
    while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
    if (!seen.insert(key).second) {
      throw ParameterError("sweep spec: duplicate key '" + key + "'");
    }
    const Value v = Lexer(line.substr(eq + 1), line_no).value();

    if (key == "name") {
      spec.name = as_string(single(v, key), key);
    } else if (key == "codes") {
      spec.codes.clear();
      for (const auto& s : v) spec.codes.push_back(as_int(s, key));
    } else if (key == "blur") {
      spec.blur_axis.clear();
      for (const auto& s : v) spec.blur_axis.push_back(parse_blur(as_string(s, key)));
    } else if (key == "noise") {
      spec.noise_axis.clear();
      for (const auto& s : v) spec.noise_axis.push_back(parse_noise(as_string(s, key)));
    } else if (key == "realizations") {
      spec.realizations = as_int(single(v, key), key);
    } else if (key == "variants") {
      spec.variants.clear();
      for (const auto& s : v) spec.variants.push_back(parse_variant(as_string(s, key)));
    } else if (key == "lambda1") {
      spec.lambda1.clear();
      if (v.size() == 1 && std::holds_alternative<std::string>(v.front())) {
        if (std::get<std::string>(v.front()) != "default") {
          throw ParameterError("sweep spec: lambda1 string must be \"default\"");
        }
        spec.lambda1 = default_lambda1_list();
      } else {
        for (const auto& s : v) spec.lambda1.push_back(as_number(s, key));
      }
    } else {
      throw ParameterError("sweep spec: unknown key '" + key + "'");
    }
  }
  spec.validate();
  return spec;
}

SweepSpec load_sweep_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read sweep spec " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_sweep_spec(ss.str());
}

std::string format_sweep_spec(const SweepSpec& spec) {
  auto join = [](const auto& items, auto fn) {
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) out += ", ";
      out += fn(items[i]);
    }
    return out + "]";
  };
  std::string out;
  out += "name = " + quoted(spec.name) + "\n";
  out += "codes = " + join(spec.codes, [](int c) { return std::to_string(c); }) + "\n";
  out += "blur = " + join(spec.blur_axis, [](const BlurSpec& b) { return quoted(to_cli(b)); }) + "\n";
  out += "noise = " + join(spec.noise_axis, [](const NoiseSpec& n) { return quoted(to_cli(n)); }) + "\n";
  out += "realizations = " + std::to_string(spec.realizations) + "\n";
  out += "variants = " +
         join(spec.variants, [](Variant v) { return quoted(to_string(v)); }) + "\n";
  out += "lambda1 = " + join(spec.lambda1, [](double l) { return num(l); }) + "\n";
  return out;
}

std::vector<SweepSpec> preset(std::string_view name) {
  auto sp = [](double d) { return NoiseSpec{NoiseFamily::salt_pepper, d, 0}; };
  if (name == "paper-mini") {
    SweepSpec s;
    s.name = "motion-saltpepper-mini";
    s.codes = {4};
    s.blur_axis = {BlurSpec::motion(3), BlurSpec::motion(11), BlurSpec::motion(19)};
    s.noise_axis = {sp(0.0), sp(0.2), sp(0.4), sp(0.6)};
    s.realizations = 5;
    return {s};
  }
  if (name == "paper-full") {
    std::vector<BlurSpec> gauss;
    for (int size : {3, 7, 11, 15, 19}) {
      for (double sigma : {3.0, 7.0, 11.0}) gauss.push_back(BlurSpec::gaussian(size, sigma));
    }
    std::vector<BlurSpec> motion;
    for (double len : {3.0, 7.0, 11.0, 15.0, 19.0}) motion.push_back(BlurSpec::motion(len));
    auto range = [](NoiseFamily f, double step, int n) {
      std::vector<NoiseSpec> out;
      for (int i = 0; i <= n; ++i) out.push_back(NoiseSpec{f, std::round(step * i * 1e6) / 1e6, 0});
      return out;
    };
    auto study = [](std::string name, int code, std::vector<BlurSpec> blur,
                    std::vector<NoiseSpec> noise) {
      SweepSpec s;
      s.name = std::move(name);
      s.codes = {code};
      s.blur_axis = std::move(blur);
      s.noise_axis = std::move(noise);
      s.realizations = 10;
      return s;
    };
    return {
        study("gaussian-gauss", 7, gauss, {NoiseSpec{NoiseFamily::gaussian, 0.05, 0}}),
        study("motion-gauss", 2, motion, range(NoiseFamily::gaussian, 0.05, 10)),
        study("gaussian-uniform", 9, gauss,
              {NoiseSpec{NoiseFamily::uniform, 0.4, 0}, NoiseSpec{NoiseFamily::uniform, 0.7, 0},
               NoiseSpec{NoiseFamily::uniform, 1.0, 0}}),
        study("motion-uniform", 3, motion, range(NoiseFamily::uniform, 0.2, 10)),
        study("gaussian-saltpepper", 10, gauss, {sp(0.2)}),
        study("motion-saltpepper", 4, motion, range(NoiseFamily::salt_pepper, 0.1, 10)),
        study("gaussian-speckle", 5, gauss, {NoiseSpec{NoiseFamily::speckle, 0.4, 0}}),
        study("motion-speckle", 9, motion, range(NoiseFamily::speckle, 0.1, 10)),
    };
  }
  throw ParameterError("unknown preset '" + std::string(name) + "' (paper-mini, paper-full)");
}

}  // namespace qrrestore::harness
