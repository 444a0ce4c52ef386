#include "qrrestore/harness/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <sstream>

#include "qrrestore/image_io.hpp"
#include "qrrestore/rng.hpp"

namespace qrrestore::harness {

namespace {

constexpr const char* kVersion = "qrrestore 0.1.0";

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// A (variant, lambda1) combination cleaned for every realization.
struct Slot {
  Variant variant;
  double lambda1;
};

std::vector<Slot> expand_slots(const SweepSpec& spec) {
  std::vector<Slot> slots;
  for (Variant v : spec.variants) {
    if (v == Variant::FPSF) {
      for (double l : spec.lambda1) slots.push_back({v, l});
    } else {
      slots.push_back({v, 0.0});
    }
  }
  return slots;
}

enum class Outcome : unsigned char { unreadable, readable, failed };

struct ItemResult {
  bool unprocessed = false;
  std::vector<Outcome> cleaned;
};

}  // namespace

std::vector<CodeFixture> load_codes(const std::filesystem::path& dir) {
  const auto table = dir / "codes.tsv";
  std::ifstream in(table);
  if (!in) throw IoError("cannot read " + table.string());
  std::vector<CodeFixture> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t pos = 0;
    for (int k = 0; k < 3; ++k) {
      const std::size_t tab = line.find('\t', pos);
      if (tab == std::string::npos) throw IoError("malformed line in " + table.string());
      f.push_back(line.substr(pos, tab - pos));
      pos = tab + 1;
    }
    f.push_back(line.substr(pos));
    CodeFixture c;
    c.id = std::stoi(f[0]);
    c.clean = read_image(dir / f[1]);
    c.geometry = infer_geometry(c.clean);
    if (c.geometry.version() != std::stoi(f[2])) {
      throw IoError("code " + f[0] + ": inferred version differs from codes.tsv");
    }
    c.payload = f[3];
    out.push_back(std::move(c));
  }
  return out;
}

const CodeFixture& find_code(const std::vector<CodeFixture>& codes, int id) {
  for (const auto& c : codes) {
    if (c.id == id) return c;
  }
  throw ParameterError("unknown code id " + std::to_string(id));
}

std::uint64_t realization_seed(std::uint64_t master, int code_id, const BlurSpec& b,
                               const NoiseSpec& n, int realization) {
  return derive_seed(master, {static_cast<std::uint64_t>(code_id), fnv1a(to_cli(b)),
                              fnv1a(to_cli(n)), static_cast<std::uint64_t>(realization)});
}

std::vector<PhaseDiagram> run_sweep(const SweepSpec& spec, const std::vector<CodeFixture>& codes,
                                    const PipelineConfig& cfg, const DecoderAdapter& d,
                                    const SweepOptions& opt) {
  spec.validate();
  if (opt.workers < 1) throw ParameterError("workers must be >= 1");
  std::vector<const CodeFixture*> fixtures;
  for (int id : spec.codes) fixtures.push_back(&find_code(codes, id));

  const std::vector<Slot> slots = expand_slots(spec);
  const std::size_t n_blur = spec.blur_axis.size();
  const std::size_t n_noise = spec.noise_axis.size();
  const std::size_t n_real = static_cast<std::size_t>(spec.realizations);
  const std::size_t per_code = n_blur * n_noise * n_real;
  const std::size_t n_items = fixtures.size() * per_code;

  std::vector<ItemResult> results(n_items);
  std::exception_ptr fatal;
  std::atomic<bool> stop{false};

#pragma omp parallel for schedule(dynamic, 1) num_threads(opt.workers)
  for (std::size_t item = 0; item < n_items; ++item) {
    if (stop.load(std::memory_order_relaxed)) continue;
    try {
      const std::size_t ci = item / per_code;
      std::size_t rest = item % per_code;
      const std::size_t bi = rest / (n_noise * n_real);
      rest %= n_noise * n_real;
      const std::size_t ni = rest / n_real;
      const int r = static_cast<int>(rest % n_real);

      const CodeFixture& code = *fixtures[ci];
      const BlurSpec& blur = spec.blur_axis[bi];
      NoiseSpec noise = spec.noise_axis[ni];
      noise.seed = realization_seed(opt.master_seed, code.id, blur, noise, r);
      const GrayImage f = corrupt(code.clean, CorruptionSpec{blur, noise});
      const std::optional<std::string> expected =
          opt.match_payload ? std::optional<std::string>(code.payload) : std::nullopt;

      ItemResult& out = results[item];
      out.unprocessed = score_readability(f, d, expected);
      out.cleaned.assign(slots.size(), Outcome::failed);
      std::optional<CleanSession> session;
      try {
        session.emplace(f, code.clean, code.geometry, cfg);
      } catch (const StageError&) {
        continue;
      }
      for (std::size_t s = 0; s < slots.size(); ++s) {
        try {
          const CleanResult res = session->run(slots[s].variant, slots[s].lambda1);
          out.cleaned[s] =
              score_readability(res.u3_final, d, expected) ? Outcome::readable : Outcome::unreadable;
        } catch (const StageError&) {
          out.cleaned[s] = Outcome::failed;
        }
      }
    } catch (...) {
#pragma omp critical(qrr_sweep_fatal)
      {
        if (!fatal) fatal = std::current_exception();
        stop = true;
      }
    }
  }
  if (fatal) std::rethrow_exception(fatal);

  std::vector<PhaseDiagram> diagrams;
  for (std::size_t ci = 0; ci < fixtures.size(); ++ci) {
    for (std::size_t s = 0; s < slots.size(); ++s) {
      PhaseDiagram pd;
      pd.code_id = fixtures[ci]->id;
      pd.variant = to_string(slots[s].variant);
      if (slots[s].variant == Variant::FPSF) pd.lambda1 = slots[s].lambda1;
      pd.master_seed = opt.master_seed;
      pd.decoder_id = d.id();
      pd.realizations = spec.realizations;
      pd.blur_axis = spec.blur_axis;
      pd.noise_axis = spec.noise_axis;
      for (auto& n : pd.noise_axis) n.seed = 0;
      for (std::size_t bi = 0; bi < n_blur; ++bi) {
        for (std::size_t ni = 0; ni < n_noise; ++ni) {
          Cell cell;
          cell.blur_index = static_cast<int>(bi);
          cell.noise_index = static_cast<int>(ni);
          for (std::size_t r = 0; r < n_real; ++r) {
            const ItemResult& res = results[ci * per_code + (bi * n_noise + ni) * n_real + r];
            cell.unprocessed_readable += res.unprocessed ? 1 : 0;
            cell.cleaned_readable += res.cleaned[s] == Outcome::readable ? 1 : 0;
            cell.cleaned_failed += res.cleaned[s] == Outcome::failed ? 1 : 0;
          }
          pd.cells.push_back(cell);
        }
      }
      diagrams.push_back(std::move(pd));
    }
  }
  return diagrams;
}

std::vector<Lambda1Point> lambda1_sweep(const CodeFixture& code, const CorruptionSpec& corruption,
                                        const std::vector<double>& lambda1_list, int realizations,
                                        const PipelineConfig& cfg, const DecoderAdapter& d,
                                        const SweepOptions& opt) {
  SweepSpec spec;
  spec.name = "lambda1";
  spec.codes = {code.id};
  spec.blur_axis = {corruption.blur};
  spec.noise_axis = {corruption.noise};
  spec.realizations = realizations;
  spec.variants = {Variant::FPSF};
  spec.lambda1 = lambda1_list;
  const auto diagrams = run_sweep(spec, {code}, cfg, d, opt);
  std::vector<Lambda1Point> curve;
  for (const auto& pd : diagrams) {
    const Cell& c = pd.cells.front();
    curve.push_back({*pd.lambda1, c.cleaned_readable, c.cleaned_failed, pd.realizations});
  }
  return curve;
}

std::string emit_lambda1_csv(const std::vector<Lambda1Point>& curve) {
  std::string out = "lambda1,log10_lambda1,readable,failed,realizations,fraction\n";
  for (const auto& p : curve) {
    out += num(p.lambda1) + ',' + (p.lambda1 > 0 ? num(std::log10(p.lambda1)) : "NA") + ',' +
           std::to_string(p.readable) + ',' + std::to_string(p.failed) + ',' +
           std::to_string(p.realizations) + ',' + num(p.fraction()) + '\n';
  }
  return out;
}

int VariantRow::fpsf_best() const {
  return fpsf.empty() ? 0 : *std::max_element(fpsf.begin(), fpsf.end());
}

std::vector<double> VariantRow::best_lambda1() const {
  std::vector<double> out;
  const int best = fpsf_best();
  for (std::size_t i = 0; i < fpsf.size(); ++i) {
    if (fpsf[i] == best) out.push_back(lambda1[i]);
  }
  return out;
}

std::vector<VariantRow> variant_table(const std::vector<VariantCase>& cases,
                                      const std::vector<CodeFixture>& codes, int realizations,
                                      const std::vector<double>& lambda1_list,
                                      const PipelineConfig& cfg, const DecoderAdapter& d,
                                      const SweepOptions& opt) {
  std::vector<VariantRow> rows;
  for (const VariantCase& vc : cases) {
    SweepSpec spec;
    spec.name = "variants";
    spec.codes = {vc.code_id};
    spec.blur_axis = {vc.blur};
    spec.noise_axis = {vc.noise};
    spec.realizations = realizations;
    spec.variants = {Variant::D, Variant::UPSF, Variant::FPSF};
    spec.lambda1 = lambda1_list;
    const auto diagrams = run_sweep(spec, codes, cfg, d, opt);

    VariantRow row;
    row.c = vc;
    row.realizations = realizations;
    row.lambda1 = lambda1_list;
    for (const auto& pd : diagrams) {
      const Cell& c = pd.cells.front();
      row.unprocessed = c.unprocessed_readable;
      row.failed += c.cleaned_failed;
      if (pd.variant == "D") {
        row.d = c.cleaned_readable;
      } else if (pd.variant == "UPSF") {
        row.upsf = c.cleaned_readable;
      } else {
        row.fpsf.push_back(c.cleaned_readable);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string emit_variant_csv(const std::vector<VariantRow>& rows) {
  std::string out = "code,blur,noise,realizations,U,D,UPSF,FPSF_best,best_lambda1,failed";
  const std::vector<double> lambdas = rows.empty() ? std::vector<double>{} : rows.front().lambda1;
  for (double l : lambdas) out += ",FPSF_" + num(l);
  out += '\n';
  for (const auto& r : rows) {
    std::string best;
    for (double l : r.best_lambda1()) best += (best.empty() ? "" : " ") + num(l);
    out += std::to_string(r.c.code_id) + ',' + csv_field(describe(r.c.blur)) + ',' +
           csv_field(describe(r.c.noise)) + ',' + std::to_string(r.realizations) + ',' +
           std::to_string(r.unprocessed) + ',' + std::to_string(r.d) + ',' +
           std::to_string(r.upsf) + ',' + std::to_string(r.fpsf_best()) + ',' + csv_field(best) +
           ',' + std::to_string(r.failed);
    for (int v : r.fpsf) out += ',' + std::to_string(v);
    out += '\n';
  }
  return out;
}

void write_sweep_outputs(const std::filesystem::path& dir, const SweepSpec& spec,
                         const std::vector<PhaseDiagram>& diagrams, const DecoderAdapter& d,
                         const SweepOptions& opt, double wall_seconds) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / "cells.csv", std::ios::binary);
    if (!csv) throw IoError("cannot write " + (dir / "cells.csv").string());
    csv << emit_csv(diagrams);
  }

  std::ostringstream m;
  m << "tool: " << kVersion << "\n"
    << "study: " << spec.name << "\n"
    << "master_seed: " << opt.master_seed << "\n"
    << "workers: " << opt.workers << "\n"
    << "decoder: " << d.command_template << "\n"
    << "decoder_timeout_s: " << d.timeout_s << "\n"
    << "payload_check: " << (opt.match_payload ? "on" : "off") << "\n"
    << "wall_seconds: " << wall_seconds << "\n"
    << "seed_derivation: splitmix64 over (master, code, fnv1a(blur), fnv1a(noise), realization)\n"
    << "spec:\n";
  std::istringstream spec_text(format_sweep_spec(spec));
  for (std::string line; std::getline(spec_text, line);) m << "  " << line << "\n";
  m << "diagrams:\n";
  for (std::size_t k = 0; k < diagrams.size(); ++k) {
    const PhaseDiagram& pd = diagrams[k];
    const std::string suffix = k == 0 ? "" : "_" + std::to_string(k);
    write_image(heatmap(pd, false), dir / ("heatmap_unprocessed" + suffix + ".pgm"));
    write_image(heatmap(pd, true), dir / ("heatmap_cleaned" + suffix + ".pgm"));
    m << "  - index: " << k << " code: " << pd.code_id << " variant: " << pd.variant
      << " lambda1: " << (pd.lambda1 ? num(*pd.lambda1) : "NA")
      << " heatmaps: heatmap_unprocessed" << suffix << ".pgm heatmap_cleaned" << suffix
      << ".pgm\n";
  }
  std::ofstream out(dir / "manifest.txt", std::ios::binary);
  if (!out) throw IoError("cannot write " + (dir / "manifest.txt").string());
  out << m.str();
}

}  // namespace qrrestore::harness
