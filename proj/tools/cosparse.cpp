// Command-line front-end. Machine-readable results (JSON/CSV) go to
// standard output, logs and the resolved configuration to standard error.
// Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 I/O error.

#include "cosparse/experiments.hpp"
#include "cosparse/frames.hpp"
#include "cosparse/io.hpp"
#include "cosparse/parallel.hpp"
#include "cosparse/recovery.hpp"
#include "cosparse/rng.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

namespace {

using namespace cosparse;

std::uint64_t auto_seed() {
  std::random_device device;
  return (static_cast<std::uint64_t>(device()) << 32) ^ device();
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "tdiht") return Algorithm::Tdiht;
  if (name == "iht") return Algorithm::Iht;
  if (name == "aiht") return Algorithm::Aiht;
  throw CLI::ValidationError("--algorithm", "unknown algorithm '" + name + "'");
}

StepSizeRule parse_step(const std::string& text) {
  if (text == "adaptive") return StepSizeRule::adaptive();
  if (text.rfind("constant:", 0) == 0) {
    try {
      return StepSizeRule::constant(std::stod(text.substr(9)));
    } catch (const std::invalid_argument&) {
      // fall through to the usage error below
    }
  }
  throw CLI::ValidationError("--step", "expected adaptive or constant:MU");
}

NoiseSpec parse_snr(const std::string& text, std::uint64_t seed) {
  if (text == "none") return NoiseSpec::none();
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string kind = text.substr(0, colon);
    double value = 0.0;
    try {
      value = std::stod(text.substr(colon + 1));
    } catch (const std::invalid_argument&) {
      throw CLI::ValidationError("--snr", "bad numeric value in '" + text + "'");
    }
    if (kind == "ratio") return NoiseSpec::target_snr(value, seed);
    if (kind == "db") return NoiseSpec::target_snr(std::pow(10.0, value / 20.0), seed);
  }
  throw CLI::ValidationError("--snr", "expected none, ratio:R or db:R");
}

struct GridShape {
  Index n_delta = 0;
  Index n_rho = 0;
};

GridShape parse_grid(const std::string& text) {
  const auto x = text.find('x');
  if (x != std::string::npos) {
    try {
      GridShape shape;
      shape.n_delta = std::stol(text.substr(0, x));
      shape.n_rho = std::stol(text.substr(x + 1));
      if (shape.n_delta >= 1 && shape.n_rho >= 1) return shape;
    } catch (const std::invalid_argument&) {
    }
  }
  throw CLI::ValidationError("--grid", "expected RxC, e.g. 20x20");
}

void echo_config(const nlohmann::json& config) {
  std::cerr << "config " << config.dump() << "\n";
}

int cmd_gen_frame(Index d, Index p, std::uint64_t seed, const std::string& out_path) {
  echo_config({{"command", "gen-frame"}, {"d", d}, {"p", p}, {"seed", seed},
               {"out", out_path}});
  const AnalysisPair pair = random_tight_frame(p, d, seed);
  write_cosf1(out_path, pair.dense_omega());
  const FrameBounds bounds = frame_bounds(pair.dense_omega());
  nlohmann::json j{{"A", bounds.lower}, {"B", bounds.upper}, {"rows", p}, {"cols", d},
                   {"out", out_path}};
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_phase(Index d, Index p, const GridShape& grid, Index trials,
              const std::string& algorithm, const std::string& step, double tolerance,
              std::uint64_t seed, const std::string& out_path) {
  echo_config({{"command", "phase"}, {"d", d}, {"p", p},
               {"grid", std::to_string(grid.n_delta) + "x" + std::to_string(grid.n_rho)},
               {"trials", trials}, {"algorithm", algorithm}, {"step", step},
               {"tolerance", tolerance}, {"seed", seed}, {"out", out_path},
               {"threads", thread_count_from_env()}});
  PhaseGridSpec spec;
  spec.d = d;
  spec.p = p;
  spec.delta_values = linspace_unit_interval(grid.n_delta);
  spec.rho_values = linspace_unit_interval(grid.n_rho);
  spec.trials = trials;
  spec.algorithm = parse_algorithm(algorithm);
  spec.step_rule = parse_step(step);
  spec.success_tolerance = tolerance;
  spec.seed = seed;
  const PhaseGridResult result = run_phase_grid(spec);
  std::ostringstream csv;
  write_phase_csv(csv, result);
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    AtomicFileWriter writer(out_path);
    writer.append(csv.str());
    writer.commit();
    std::cerr << "wrote " << out_path << "\n";
  }
  return 0;
}

int cmd_recover(const std::string& image, const std::string& mask, double threshold,
                const std::string& snr, const std::string& algorithm,
                const std::string& step, int max_iter, std::uint64_t seed,
                const std::string& out_path, const std::string& report_path) {
  echo_config({{"command", "recover"}, {"image", image}, {"mask", mask},
               {"threshold", threshold}, {"snr", snr}, {"algorithm", algorithm},
               {"step", step}, {"max_iter", max_iter}, {"seed", seed},
               {"out", out_path}, {"report", report_path}});
  MriRunSpec spec;
  if (image.rfind("phantom:", 0) == 0) {
    spec.phantom_n = std::stol(image.substr(8));
  } else {
    spec.image_path = image;
    if (!std::filesystem::exists(spec.image_path))
      throw IoError("image file not found: " + spec.image_path);
  }
  if (mask.rfind("radial:", 0) == 0) {
    spec.radial_lines = std::stol(mask.substr(7));
  } else {
    spec.mask_path = mask;
    if (!std::filesystem::exists(spec.mask_path))
      throw IoError("mask file not found: " + spec.mask_path);
  }
  spec.threshold = threshold;
  spec.seed = seed;
  spec.noise = parse_snr(snr, derive_seed(seed, {17}));
  spec.algorithm = parse_algorithm(algorithm);
  spec.step_rule = parse_step(step);
  spec.max_iterations = max_iter;

  const MriRunResult result = run_mri(spec);
  if (!out_path.empty()) write_pgm16(out_path, result.recon);
  const std::string report = mri_report_json(result);
  if (!report_path.empty()) {
    AtomicFileWriter writer(report_path);
    writer.append(report + "\n");
    writer.commit();
  }
  std::cout << report << "\n";
  return 0;
}

int cmd_rip(const std::string& frame_path, Index m_rows, bool identity, Index k,
            const std::string& method, Index trials, std::uint64_t seed) {
  echo_config({{"command", "rip"}, {"frame", frame_path}, {"m", m_rows},
               {"identity", identity}, {"k", k}, {"method", method},
               {"trials", trials}, {"seed", seed}});
  if (!std::filesystem::exists(frame_path))
    throw IoError("frame file not found: " + frame_path);
  const DenseOperatorFile file = read_cosf1(frame_path);
  if (file.field != Field::Real)
    throw std::invalid_argument("rip expects a real analysis operator");
  const Matrix& omega = file.real;
  const Matrix dict = pseudo_inverse(omega);

  LinearMapPtr m_map;
  if (identity) {
    m_map = std::make_shared<IdentityMap>(omega.cols());
  } else {
    if (m_rows < 1)
      throw CLI::ValidationError("--m", "need --m rows >= 1 (or --identity)");
    Rng rng(seed);
    Matrix gauss = rng.gaussian_matrix(m_rows, omega.cols());
    gauss /= std::sqrt(static_cast<double>(m_rows));
    m_map = dense_map(std::move(gauss));
  }

  RipEstimate estimate;
  if (method == "brute") {
    estimate = drip_exhaustive(*m_map, dict, k);
    estimate.seed = seed;
  } else if (method == "mc") {
    estimate = drip_monte_carlo(*m_map, dict, k, trials, seed);
  } else {
    throw CLI::ValidationError("--method", "expected brute or mc");
  }
  std::cout << to_json(estimate) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cosparse analysis recovery toolkit"};
  app.require_subcommand(1);

  // gen-frame
  auto* gen = app.add_subcommand("gen-frame", "generate a random tight frame (COSF1)");
  Index gen_d = 120, gen_p = 144;
  std::uint64_t gen_seed = 0;
  bool gen_seed_set = false;
  std::string gen_out;
  gen->add_option("--d", gen_d, "signal dimension")->required();
  gen->add_option("--p", gen_p, "transform dimension (p >= d)")->required();
  gen->add_option("--seed", gen_seed)->each([&](const std::string&) { gen_seed_set = true; });
  gen->add_option("--out", gen_out, "output COSF1 path")->required();

  // phase
  auto* phase = app.add_subcommand("phase", "phase-transition success grid (CSV)");
  Index ph_d = 120, ph_p = 144, ph_trials = 50;
  std::string ph_grid = "20x20", ph_algorithm = "tdiht", ph_step = "adaptive", ph_out;
  double ph_tolerance = 1e-6;
  std::uint64_t ph_seed = 0;
  bool ph_seed_set = false;
  phase->add_option("--d", ph_d);
  phase->add_option("--p", ph_p);
  phase->add_option("--grid", ph_grid, "delta x rho counts, e.g. 20x20");
  phase->add_option("--trials", ph_trials);
  phase->add_option("--algorithm", ph_algorithm, "tdiht | iht | aiht");
  phase->add_option("--step", ph_step, "adaptive | constant:MU");
  phase->add_option("--tolerance", ph_tolerance, "relative l2 success tolerance");
  phase->add_option("--seed", ph_seed)->each([&](const std::string&) { ph_seed_set = true; });
  phase->add_option("--out", ph_out, "CSV path (default: stdout)");

  // recover
  auto* recover = app.add_subcommand("recover", "undersampled-Fourier image recovery");
  std::string rc_image, rc_mask, rc_snr = "none", rc_algorithm = "tdiht",
              rc_step = "adaptive", rc_out, rc_report;
  double rc_threshold = 0.01;
  int rc_max_iter = 1000;
  std::uint64_t rc_seed = 0;
  bool rc_seed_set = false;
  recover->add_option("--image", rc_image, "phantom:N or a PGM path")->required();
  recover->add_option("--mask", rc_mask, "radial:L or a PBM path")->required();
  recover->add_option("--threshold", rc_threshold, "cosparsification threshold");
  recover->add_option("--snr", rc_snr, "none | ratio:R | db:R");
  recover->add_option("--algorithm", rc_algorithm, "tdiht | iht");
  recover->add_option("--step", rc_step, "adaptive | constant:MU");
  recover->add_option("--max-iter", rc_max_iter);
  recover->add_option("--seed", rc_seed)->each([&](const std::string&) { rc_seed_set = true; });
  recover->add_option("--out", rc_out, "reconstruction PGM path");
  recover->add_option("--report", rc_report, "JSON report path");

  // rip
  auto* rip = app.add_subcommand("rip", "empirical D-RIP constant of a seeded Gaussian map");
  std::string rip_frame, rip_method = "brute";
  Index rip_m = 0, rip_k = 1, rip_trials = 100;
  bool rip_identity = false;
  std::uint64_t rip_seed = 0;
  bool rip_seed_set = false;
  rip->add_option("--frame", rip_frame, "COSF1 analysis operator")->required();
  rip->add_option("--m", rip_m, "Gaussian measurement rows");
  rip->add_flag("--identity", rip_identity, "use M = I (diagnostic)");
  rip->add_option("--k", rip_k)->required();
  rip->add_option("--method", rip_method, "brute | mc");
  rip->add_option("--trials", rip_trials, "Monte Carlo trials");
  rip->add_option("--seed", rip_seed)->each([&](const std::string&) { rip_seed_set = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (gen->parsed()) {
      if (!gen_seed_set) gen_seed = auto_seed();
      return cmd_gen_frame(gen_d, gen_p, gen_seed, gen_out);
    }
    if (phase->parsed()) {
      if (!ph_seed_set) ph_seed = auto_seed();
      return cmd_phase(ph_d, ph_p, parse_grid(ph_grid), ph_trials, ph_algorithm,
                       ph_step, ph_tolerance, ph_seed, ph_out);
    }
    if (recover->parsed()) {
      if (!rc_seed_set) rc_seed = auto_seed();
      return cmd_recover(rc_image, rc_mask, rc_threshold, rc_snr, rc_algorithm,
                         rc_step, rc_max_iter, rc_seed, rc_out, rc_report);
    }
    if (rip->parsed()) {
      if (!rip_seed_set) rip_seed = auto_seed();
      return cmd_rip(rip_frame, rip_m, rip_identity, rip_k, rip_method, rip_trials,
                     rip_seed);
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
