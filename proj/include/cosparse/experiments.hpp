#pragma once

#include "cosparse/linops.hpp"
#include "cosparse/recovery.hpp"
#include "cosparse/signals.hpp"
#include "cosparse/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cosparse {

enum class Algorithm { Tdiht, Iht, Aiht };

std::string algorithm_name(Algorithm algorithm);

/// Phase-transition protocol: per cell (delta, rho), m = round(delta d)
/// measurements and cosparsity ell = d - round(rho m); per trial a fresh
/// Gaussian M (columns scaled 1/sqrt(m)), fresh random tight frame and
/// fresh unit cosparse signal, measured noiselessly.
struct PhaseGridSpec {
  Index d = 120;
  Index p = 144;
  std::vector<double> delta_values;
  std::vector<double> rho_values;
  Index trials = 50;
  Algorithm algorithm = Algorithm::Tdiht;
  StepSizeRule step_rule = StepSizeRule::adaptive();
  double success_tolerance = 1e-6;  // relative l2 error of a "perfect" recovery
  std::uint64_t seed = 0;
  int max_iterations = 500;
  bool diagnostic_identity = false;  // M = I, Omega = I (test hook)

  void validate() const;
};

struct PhaseCellResult {
  double success_rate = 0.0;
  double mean_iterations = 0.0;
};

struct PhaseGridResult {
  Matrix success_rate;     // delta index x rho index
  Matrix mean_iterations;  // same layout
  PhaseGridSpec spec;
};

/// delta/rho picked by index so per-trial seeds derive from
/// (seed, delta index, rho index, trial index) alone.
PhaseCellResult run_phase_cell(const PhaseGridSpec& spec, Index delta_index,
                               Index rho_index);

/// Maps run_phase_cell over the grid; cells run in parallel but results
/// depend only on the spec, never on the schedule. threads <= 0 means
/// COSPARSE_THREADS (or machine parallelism).
PhaseGridResult run_phase_grid(const PhaseGridSpec& spec, int threads = 0);

/// CSV rows `delta,rho,success_rate,mean_iterations`, six significant digits.
void write_phase_csv(std::ostream& out, const PhaseGridResult& result);

/// n values linearly spaced over (0, 1], right endpoint included.
std::vector<double> linspace_unit_interval(Index n);

/// Undersampled-Fourier image recovery per the MRI protocol. The image is
/// the built-in phantom (phantom_n > 0) or a PGM file; the mask is radial
/// (radial_lines > 0) or a PBM file.
struct MriRunSpec {
  Index phantom_n = 0;
  std::string image_path;
  Index radial_lines = 0;
  std::string mask_path;
  double threshold = 0.01;
  NoiseSpec noise = NoiseSpec::none();
  Algorithm algorithm = Algorithm::Tdiht;
  StepSizeRule step_rule = StepSizeRule::adaptive();
  int max_iterations = 1000;
  std::uint64_t seed = 0;
};

struct MriRunResult {
  Matrix recon;        // solver reconstruction
  Matrix naive;        // zero-filled inverse DFT (real part)
  double psnr = 0.0;
  double naive_psnr = 0.0;
  double model_error_psnr = 0.0;
  Index k = 0;
  Index measurements = 0;
  int iterations = 0;
  std::uint64_t seed = 0;
};

MriRunResult run_mri(const MriRunSpec& spec);

std::string mri_report_json(const MriRunResult& result);

/// Gaussian-noise ensemble behind the denoising-effect check: recovery
/// MSE versus the signal-domain noise power ||M^+ e||^2, averaged over
/// seeded trials.
struct DenoisingEnsembleResult {
  double mean_squared_error = 0.0;
  double mean_noise_power = 0.0;
  Index trials = 0;
};

DenoisingEnsembleResult gaussian_denoising_ensemble(Index d, Index p, Index m,
                                                    Index ell, double snr_ratio,
                                                    Index trials, std::uint64_t seed,
                                                    int threads = 0);

}  // namespace cosparse
