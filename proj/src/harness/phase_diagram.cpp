#include "qrrestore/harness/phase_diagram.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <tuple>

#include "qrrestore/image_io.hpp"

namespace qrrestore::harness {

namespace {

const char* const kHeader =
    "code,variant,lambda1,master_seed,decoder,blur,noise,blur_index,noise_index,realizations,"
    "unprocessed_readable,cleaned_readable,cleaned_failed,unprocessed_fraction,cleaned_fraction";
constexpr std::size_t kColumns = 15;

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ParameterError("bad number '" + s + "' in phase diagram CSV");
  }
  return v;
}

template <typename Int>
Int parse_int(const std::string& s) {
  Int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ParameterError("bad integer '" + s + "' in phase diagram CSV");
  }
  return v;
}

}  // namespace

const Cell& PhaseDiagram::at(int blur_index, int noise_index) const {
  return cells.at(static_cast<std::size_t>(blur_index) * noise_axis.size() + noise_index);
}

double PhaseDiagram::unprocessed_fraction(const Cell& c) const {
  return static_cast<double>(c.unprocessed_readable) / realizations;
}

std::optional<double> PhaseDiagram::cleaned_fraction(const Cell& c) const {
  if (c.cleaned_failed > 0) return std::nullopt;
  return static_cast<double>(c.cleaned_readable) / realizations;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::vector<std::string>> parse_csv_rows(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw ParameterError("unterminated quoted CSV field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string emit_csv(const std::vector<PhaseDiagram>& diagrams) {
  std::string out = kHeader;
  out += '\n';
  for (const PhaseDiagram& pd : diagrams) {
    if (pd.cells.size() != pd.blur_axis.size() * pd.noise_axis.size()) {
      throw DimensionError("phase diagram cell count does not match its axes");
    }
    for (const Cell& c : pd.cells) {
      const auto cleaned = pd.cleaned_fraction(c);
      out += std::to_string(pd.code_id) + ',' + csv_field(pd.variant) + ',' +
             (pd.lambda1 ? num(*pd.lambda1) : "NA") + ',' + std::to_string(pd.master_seed) + ',' +
             csv_field(pd.decoder_id) + ',' + csv_field(to_cli(pd.blur_axis.at(c.blur_index))) +
             ',' + csv_field(to_cli(pd.noise_axis.at(c.noise_index))) + ',' +
             std::to_string(c.blur_index) + ',' + std::to_string(c.noise_index) + ',' +
             std::to_string(pd.realizations) + ',' + std::to_string(c.unprocessed_readable) +
             ',' + std::to_string(c.cleaned_readable) + ',' + std::to_string(c.cleaned_failed) +
             ',' + num(pd.unprocessed_fraction(c)) + ',' + (cleaned ? num(*cleaned) : "NA") + '\n';
    }
  }
  return out;
}

std::vector<PhaseDiagram> parse_csv(std::string_view text) {
  auto rows = parse_csv_rows(text);
  if (rows.empty()) throw ParameterError("empty phase diagram CSV");
  if (rows.front() != parse_csv_rows(kHeader).front()) {
    throw ParameterError("unexpected phase diagram CSV header");
  }

  std::vector<PhaseDiagram> out;
  using Key = std::tuple<int, std::string, std::string, std::string, std::string>;
  std::map<Key, std::size_t> index;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r];
    if (f.size() != kColumns) throw ParameterError("phase diagram CSV row has wrong column count");
    const int code = parse_int<int>(f[0]);
    const Key key{code, f[1], f[2], f[3], f[4]};
    auto it = index.find(key);
    if (it == index.end()) {
      PhaseDiagram pd;
      pd.code_id = code;
      pd.variant = f[1];
      if (f[2] != "NA") pd.lambda1 = parse_double(f[2]);
      pd.master_seed = parse_int<std::uint64_t>(f[3]);
      pd.decoder_id = f[4];
      pd.realizations = parse_int<int>(f[9]);
      it = index.emplace(key, out.size()).first;
      out.push_back(std::move(pd));
    }
    PhaseDiagram& pd = out[it->second];
    Cell c;
    c.blur_index = parse_int<int>(f[7]);
    c.noise_index = parse_int<int>(f[8]);
    c.unprocessed_readable = parse_int<int>(f[10]);
    c.cleaned_readable = parse_int<int>(f[11]);
    c.cleaned_failed = parse_int<int>(f[12]);
    if (c.blur_index < 0 || c.noise_index < 0) throw ParameterError("negative axis index in CSV");
    if (static_cast<std::size_t>(c.blur_index) >= pd.blur_axis.size()) {
      pd.blur_axis.resize(c.blur_index + 1);
    }
    if (static_cast<std::size_t>(c.noise_index) >= pd.noise_axis.size()) {
      pd.noise_axis.resize(c.noise_index + 1);
    }
    pd.blur_axis[c.blur_index] = parse_blur(f[5]);
    pd.noise_axis[c.noise_index] = parse_noise(f[6]);
    pd.cells.push_back(c);
  }
  for (PhaseDiagram& pd : out) {
    if (pd.cells.size() != pd.blur_axis.size() * pd.noise_axis.size()) {
      throw ParameterError("phase diagram CSV has missing cells");
    }
    for (std::size_t i = 0; i < pd.cells.size(); ++i) {
      const Cell& c = pd.cells[i];
      if (static_cast<std::size_t>(c.blur_index) * pd.noise_axis.size() + c.noise_index != i) {
        throw ParameterError("phase diagram CSV cells are not in row-major order");
      }
    }
  }
  return out;
}

GrayImage heatmap(const PhaseDiagram& pd, bool cleaned, int cell_px) {
  if (cell_px < 1) throw ParameterError("heatmap cell size must be >= 1");
  const int rows = static_cast<int>(pd.blur_axis.size());
  const int cols = static_cast<int>(pd.noise_axis.size());
  GrayImage img(cols * cell_px, rows * cell_px);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const Cell& cell = pd.at(r, c);
      const double v =
          cleaned ? pd.cleaned_fraction(cell).value_or(0.0) : pd.unprocessed_fraction(cell);
      for (int y = r * cell_px; y < (r + 1) * cell_px; ++y) {
        for (int x = c * cell_px; x < (c + 1) * cell_px; ++x) img(x, y) = v;
      }
    }
  }
  return img;
}

void emit_phase_diagram(const PhaseDiagram& pd, const PhaseDiagramPaths& paths, int cell_px) {
  std::ofstream csv(paths.csv, std::ios::binary);
  if (!csv) throw IoError("cannot write " + paths.csv.string());
  csv << emit_csv({pd});
  if (!csv) throw IoError("write failed: " + paths.csv.string());
  write_image(heatmap(pd, false, cell_px), paths.heatmap_unprocessed);
  write_image(heatmap(pd, true, cell_px), paths.heatmap_cleaned);
}

}  // namespace qrrestore::harness
