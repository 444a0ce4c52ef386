// qrclean: restore blurred, noisy QR code images.
//
// Each pipeline step is exposed as its own subcommand so intermediate images
// can be inspected; `clean` runs them all, `sweep` runs readability studies.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qrrestore/binarize.hpp"
#include "qrrestore/corrupt.hpp"
#include "qrrestore/deconv.hpp"
#include "qrrestore/harness/sweep.hpp"
#include "qrrestore/image_io.hpp"
#include "qrrestore/imgcore.hpp"
#include "qrrestore/pipeline.hpp"
#include "qrrestore/psfest.hpp"
#include "qrrestore/qrgeom.hpp"
#include "qrrestore/tvflow.hpp"

namespace fs = std::filesystem;
using namespace qrrestore;

namespace {

const std::map<std::string, C1Mode> kC1Modes{{"with-quiet", C1Mode::with_quiet},
                                             {"without-quiet", C1Mode::without_quiet}};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

std::string trace_csv(const FlowTrace& t) {
  std::ostringstream os;
  os.precision(17);
  os << "t,corner_dist\n";
  for (std::size_t i = 0; i < t.times.size(); ++i) os << t.times[i] << ',' << t.corner_dist[i] << '\n';
  return os.str();
}

std::string sizes_csv(const KernelSelection& sel) {
  std::ostringstream os;
  os.precision(17);
  os << "size,residual\n";
  for (std::size_t i = 0; i < sel.sizes.size(); ++i) os << sel.sizes[i] << ',' << sel.scores[i] << '\n';
  return os.str();
}

std::string threshold_csv(const ThresholdReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "threshold,score,chosen\n";
  for (std::size_t i = 0; i < r.candidates.size(); ++i) {
    os << r.candidates[i] << ',' << r.scores[i] << ',' << (r.candidates[i] == r.chosen ? 1 : 0)
       << '\n';
  }
  return os.str();
}

// Kernels are stored as 16-bit PGM scaled to a peak of 1 and renormalized on
// load.
void write_kernel(const Kernel& k, const fs::path& path) {
  GrayImage img = k.as_image();
  const double peak = img.max();
  for (double& v : img.values()) v /= peak;
  write_pgm16(img, path);
}

Kernel read_kernel(const fs::path& path) {
  const GrayImage img = read_image(path);
  if (img.width() != img.height()) throw DimensionError("kernel image must be square");
  auto v = img.values();
  return Kernel(img.width(), std::vector<double>(v.begin(), v.end()));
}

// Clean reference restricted to the a-priori-known pixels, as the pipeline
// sees it.
struct Reference {
  QrGeometry geometry;
  Region c1;
  PatternMask mask;
  GrayImage known;
  std::vector<bool> known_set;
};

Reference load_reference(const fs::path& path, C1Mode mode) {
  const GrayImage z = read_image(path);
  Reference r;
  r.geometry = infer_geometry(z);
  r.c1 = c1_region(r.geometry, mode);
  r.mask = required_pattern_mask(r.geometry);
  const KnownReference view(z, r.mask, r.c1);
  r.known = view.image();
  r.known_set = view.known_set();
  return r;
}

void add_tv_options(CLI::App* cmd, TvFlowParams& tv) {
  cmd->add_option("--beta", tv.beta, "Edge sensitivity of the diffusion weight")->capture_default_str();
  cmd->add_option("--t-max", tv.t_max, "Flow horizon")->capture_default_str();
  cmd->add_option("--eps", tv.eps_reg, "Gradient-norm regularization")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Restore blurred and noisy QR code images"};
  app.require_subcommand(1);

  // corrupt
  std::string in, out, clean_path, blur_text = "none", noise_text = "none";
  std::uint64_t seed = 1;
  auto* corrupt_cmd = app.add_subcommand("corrupt", "Blur, add noise and rescale a clean code");
  corrupt_cmd->add_option("--in", in, "Clean code image")->required();
  corrupt_cmd->add_option("--out", out, "Output image")->required();
  corrupt_cmd->add_option("--blur", blur_text, "none | gaussian:SIZE,SIGMA | motion:LEN[,ANGLE]");
  corrupt_cmd->add_option("--noise", noise_text, "none | gauss:S | uni:A | sp:D | speckle:V");
  corrupt_cmd->add_option("--seed", seed, "Noise seed")->capture_default_str();

  // denoise
  TvFlowParams tv;
  std::string trace_path;
  C1Mode c1_mode = C1Mode::with_quiet;
  auto* denoise_cmd = app.add_subcommand("denoise", "Weighted TV flow stopped at the best C1 match");
  denoise_cmd->add_option("--in", in, "Corrupted image")->required();
  denoise_cmd->add_option("--clean", clean_path, "Clean reference (only C1 is read)")->required();
  denoise_cmd->add_option("--out", out, "Denoised image u1")->required();
  denoise_cmd->add_option("--trace", trace_path, "CSV of t, corner_dist");
  denoise_cmd->add_option("--c1", c1_mode, "with-quiet | without-quiet")
      ->transform(CLI::CheckedTransformer(kC1Modes, CLI::ignore_case));
  add_tv_options(denoise_cmd, tv);

  // estimate-psf
  std::string u1_path, report_path;
  double lambda1 = 10000.0;
  bool uniform = false;
  auto* psf_cmd = app.add_subcommand("estimate-psf", "Estimate the blur kernel from the finder corner");
  psf_cmd->add_option("--u1", u1_path, "Denoised image")->required();
  psf_cmd->add_option("--clean", clean_path, "Clean reference")->required();
  psf_cmd->add_option("--lambda1", lambda1, "Fidelity weight")->capture_default_str();
  psf_cmd->add_flag("--uniform", uniform, "Select among flat kernels instead");
  psf_cmd->add_option("--out", out, "Kernel image (16-bit PGM)")->required();
  psf_cmd->add_option("--report", report_path, "CSV of size, residual");
  psf_cmd->add_option("--c1", c1_mode, "with-quiet | without-quiet")
      ->transform(CLI::CheckedTransformer(kC1Modes, CLI::ignore_case));

  // deconvolve
  std::string psf_path, lambda2_text = "auto";
  DeconvConfig deconv;
  auto* deconv_cmd = app.add_subcommand("deconvolve", "Split Bregman anisotropic TV deconvolution");
  deconv_cmd->add_option("--in", in, "Denoised image u1")->required();
  deconv_cmd->add_option("--psf", psf_path, "Kernel image")->required();
  deconv_cmd->add_option("--lambda2", lambda2_text, "Fidelity weight or 'auto'")->capture_default_str();
  deconv_cmd->add_option("--clean", clean_path, "Clean reference, needed for --lambda2 auto");
  deconv_cmd->add_option("--out", out, "Deconvolved image u2")->required();
  deconv_cmd->add_option("--c1", c1_mode, "with-quiet | without-quiet")
      ->transform(CLI::CheckedTransformer(kC1Modes, CLI::ignore_case));

  // threshold
  std::string mode = "pixel";
  auto* thr_cmd = app.add_subcommand("threshold", "Binarize with a threshold calibrated on C1");
  thr_cmd->add_option("--in", in, "Image to binarize")->required();
  thr_cmd->add_option("--clean", clean_path, "Clean reference")->required();
  thr_cmd->add_option("--mode", mode, "pixel | block")
      ->check(CLI::IsMember({"pixel", "block"}))
      ->capture_default_str();
  thr_cmd->add_option("--out", out, "Binary image")->required();
  thr_cmd->add_option("--report", report_path, "CSV of threshold, score, chosen");
  thr_cmd->add_option("--c1", c1_mode, "with-quiet | without-quiet")
      ->transform(CLI::CheckedTransformer(kC1Modes, CLI::ignore_case));

  // clean
  PipelineConfig cfg;
  std::string variant_text = "fpsf", artifacts;
  auto* clean_cmd = app.add_subcommand("clean", "Run the full restoration pipeline");
  clean_cmd->add_option("--in", in, "Corrupted image")->required();
  clean_cmd->add_option("--clean", clean_path, "Clean reference (known regions only)")->required();
  clean_cmd->add_option("--variant", variant_text, "d | upsf | fpsf")->capture_default_str();
  clean_cmd->add_option("--lambda1", cfg.lambda1, "PSF fidelity weight (fpsf)")->capture_default_str();
  clean_cmd->add_option("--mode", mode, "Threshold mode: pixel | block")
      ->check(CLI::IsMember({"pixel", "block"}));
  clean_cmd->add_option("--out", out, "Restored binary image")->required();
  clean_cmd->add_option("--artifacts", artifacts, "Directory for u1, psf, u2, trace.csv, thr.csv");
  clean_cmd->add_option("--c1", cfg.c1_mode, "with-quiet | without-quiet")
      ->transform(CLI::CheckedTransformer(kC1Modes, CLI::ignore_case));
  add_tv_options(clean_cmd, cfg.tv);

  // qr-geom
  std::string mask_prefix;
  auto* geom_cmd = app.add_subcommand("qr-geom", "Print the geometry of a clean code");
  geom_cmd->add_option("--clean", clean_path, "Clean code image")->required();
  geom_cmd->add_option("--dump-mask", mask_prefix, "Write PREFIX_known.pgm and PREFIX_values.pgm");
  geom_cmd->add_option("--c1", c1_mode, "with-quiet | without-quiet")
      ->transform(CLI::CheckedTransformer(kC1Modes, CLI::ignore_case));

  // sweep
  std::string spec_path, preset_name, decoder_cmd, codes_dir = "tests/data";
  harness::SweepOptions sweep_opt;
  double timeout_s = 20.0;
  bool no_payload = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "Readability phase diagrams over a parameter grid");
  auto* spec_opt = sweep_cmd->add_option("--spec", spec_path, "Sweep spec file");
  sweep_cmd->add_option("--preset", preset_name, "paper-mini | paper-full")->excludes(spec_opt);
  sweep_cmd->add_option("--decoder", decoder_cmd, "Decoder command, e.g. \"qr-decode {path}\"")
      ->required();
  sweep_cmd->add_option("--seed", sweep_opt.master_seed, "Master seed")->capture_default_str();
  sweep_cmd->add_option("--workers", sweep_opt.workers, "Parallel work items")->capture_default_str();
  sweep_cmd->add_option("--timeout", timeout_s, "Decoder timeout in seconds")->capture_default_str();
  sweep_cmd->add_option("--codes", codes_dir, "Directory with codes.tsv")->capture_default_str();
  sweep_cmd->add_flag("--no-payload-check", no_payload, "Accept any decoded payload");
  sweep_cmd->add_option("--out", out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*corrupt_cmd) {
      const GrayImage z = read_image(in);
      const CorruptionSpec spec{parse_blur(blur_text), parse_noise(noise_text, seed)};
      write_image(corrupt(z, spec), out);
    } else if (*denoise_cmd) {
      const GrayImage f = read_image(in);
      const Reference ref = load_reference(clean_path, c1_mode);
      const DenoiseResult r = denoise(f, center_crop(ref.known, ref.c1), ref.c1, tv);
      write_image(r.u1, out);
      if (!trace_path.empty()) write_text(trace_path, trace_csv(r.trace));
      std::cout << "t_stop " << r.trace.t_stop << "\n";
    } else if (*psf_cmd) {
      const GrayImage u1 = read_image(u1_path);
      const Reference ref = load_reference(clean_path, c1_mode);
      const auto sizes = default_candidate_sizes(std::min(ref.c1.w, ref.c1.h));
      const KernelSelection sel =
          uniform ? uniform_psf(ref.known, u1, ref.c1, sizes, &ref.known_set)
                  : select_kernel(estimate_psf_full(center_crop(u1, ref.c1),
                                                    center_crop(ref.known, ref.c1), lambda1),
                                  ref.known, u1, ref.c1, PsfEstimateConfig{lambda1, sizes},
                                  &ref.known_set);
      write_kernel(sel.kernel, out);
      if (!report_path.empty()) write_text(report_path, sizes_csv(sel));
      std::cout << "kernel_size " << sel.kernel.size() << "\n";
    } else if (*deconv_cmd) {
      const GrayImage u1 = read_image(in);
      const Kernel phi = read_kernel(psf_path);
      if (lambda2_text == "auto") {
        if (clean_path.empty()) throw ParameterError("--lambda2 auto needs --clean");
        const Reference ref = load_reference(clean_path, c1_mode);
        deconv.lambda2 = estimate_lambda2(ref.known, u1, phi, ref.c1, &ref.known_set);
      } else {
        deconv.lambda2 = std::stod(lambda2_text);
      }
      write_image(atv_deconvolve(u1, phi, deconv), out);
      std::cout << "lambda2 " << *deconv.lambda2 << "\n";
    } else if (*thr_cmd) {
      const GrayImage u2 = read_image(in);
      const Reference ref = load_reference(clean_path, c1_mode);
      const Binarized b = mode == "pixel" ? threshold_per_pixel(u2, ref.known, ref.c1)
                                          : threshold_per_block(u2, ref.known, ref.c1, ref.geometry);
      write_image(b.image, out);
      if (!report_path.empty()) write_text(report_path, threshold_csv(b.report));
      std::cout << "threshold " << b.report.chosen << "\n";
    } else if (*clean_cmd) {
      cfg.variant = parse_variant(variant_text);
      cfg.threshold = mode == "block" ? ThresholdMode::per_block : ThresholdMode::per_pixel;
      const GrayImage f = read_image(in);
      const GrayImage z = read_image(clean_path);
      const QrGeometry g = infer_geometry(z);
      const CleanResult r = clean(f, z, g, cfg);
      write_image(r.u3_final, out);
      if (!artifacts.empty()) {
        const fs::path dir(artifacts);
        fs::create_directories(dir);
        write_image(r.u1, dir / "u1.png");
        if (r.psf) write_kernel(*r.psf, dir / "psf.pgm");
        if (r.u2) write_image(normalize_unit_range(*r.u2), dir / "u2.png");
        write_text(dir / "trace.csv", trace_csv(r.trace));
        write_text(dir / "thr.csv", threshold_csv(r.threshold));
        if (r.psf_selection) write_text(dir / "sizes.csv", sizes_csv(*r.psf_selection));
      }
      std::cout << "variant " << to_string(r.variant) << "\n"
                << "t_stop " << r.trace.t_stop << "\n";
      if (r.psf) std::cout << "kernel_size " << r.psf->size() << "\n";
      if (r.lambda2_used) std::cout << "lambda2 " << *r.lambda2_used << "\n";
      std::cout << "threshold " << r.threshold.chosen << "\n"
                << "seconds " << r.timings.total() << "\n";
    } else if (*geom_cmd) {
      const GrayImage z = read_image(clean_path);
      const QrGeometry g = infer_geometry(z);
      const Region c1 = c1_region(g, c1_mode);
      std::cout << "version " << g.version() << "\n"
                << "modules " << g.modules << "\n"
                << "module_px " << g.module_px << "\n"
                << "quiet_px " << g.quiet_px << "\n"
                << "extent " << g.extent() << "\n"
                << "c1 " << c1.x0 << ' ' << c1.y0 << ' ' << c1.w << ' ' << c1.h << "\n";
      if (!mask_prefix.empty()) {
        const PatternMask m = required_pattern_mask(g);
        GrayImage known(m.values.width(), m.values.height());
        for (std::size_t i = 0; i < known.size(); ++i) known.values()[i] = m.known[i] ? 1.0 : 0.0;
        write_pgm(known, mask_prefix + "_known.pgm");
        write_pgm(m.values, mask_prefix + "_values.pgm");
      }
    } else if (*sweep_cmd) {
      std::vector<harness::SweepSpec> studies;
      if (!spec_path.empty()) {
        studies.push_back(harness::load_sweep_spec(spec_path));
      } else if (!preset_name.empty()) {
        studies = harness::preset(preset_name);
      } else {
        throw ParameterError("sweep needs --spec or --preset");
      }
      sweep_opt.match_payload = !no_payload;
      const harness::DecoderAdapter decoder{decoder_cmd, timeout_s};
      const auto codes = harness::load_codes(codes_dir);
      for (const auto& study : studies) {
        const fs::path dir = studies.size() == 1 ? fs::path(out) : fs::path(out) / study.name;
        const auto t0 = std::chrono::steady_clock::now();
        const auto diagrams = harness::run_sweep(study, codes, cfg, decoder, sweep_opt);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        harness::write_sweep_outputs(dir, study, diagrams, decoder, sweep_opt, secs);
        std::cout << study.name << ": " << diagrams.size() << " diagram(s) in " << secs << " s -> "
                  << dir.string() << "\n";
      }
    }
  } catch (const harness::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
