#include "cosparse/experiments.hpp"

#include "cosparse/frames.hpp"
#include "cosparse/io.hpp"
#include "cosparse/parallel.hpp"
#include "cosparse/rng.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>

namespace cosparse {

std::string algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Tdiht: return "tdiht";
    case Algorithm::Iht: return "iht";
    case Algorithm::Aiht: return "aiht";
  }
  return "?";
}

void PhaseGridSpec::validate() const {
  if (d < 1 || p < d) throw std::invalid_argument("phase grid needs p >= d >= 1");
  if (delta_values.empty() || rho_values.empty())
    throw std::invalid_argument("phase grid needs nonempty value lists");
  for (double v : delta_values)
    if (!(v > 0.0) || v > 1.0) throw std::invalid_argument("delta values must lie in (0,1]");
  for (double v : rho_values)
    if (!(v > 0.0) || v > 1.0) throw std::invalid_argument("rho values must lie in (0,1]");
  if (trials < 1) throw std::invalid_argument("phase grid needs trials >= 1");
  if (!(success_tolerance > 0.0))
    throw std::invalid_argument("success tolerance must be positive");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
}

std::vector<double> linspace_unit_interval(Index n) {
  std::vector<double> values(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i)
    values[static_cast<std::size_t>(i)] =
        static_cast<double>(i + 1) / static_cast<double>(n);
  return values;
}

namespace {

RecoveryOutput dispatch_solver(Algorithm algorithm, const RecoveryProblem& problem,
                               Index ell, const StepSizeRule& step,
                               const HaltingRule& halting) {
  switch (algorithm) {
    case Algorithm::Tdiht: return tdiht_recover(problem, step, halting);
    case Algorithm::Iht: return iht_recover(problem, step, halting);
    case Algorithm::Aiht: return aiht_recover(problem, ell, step, halting);
  }
  throw std::invalid_argument("unknown algorithm");
}

}  // namespace

PhaseCellResult run_phase_cell(const PhaseGridSpec& spec, Index delta_index,
                               Index rho_index) {
  spec.validate();
  const double delta = spec.delta_values.at(static_cast<std::size_t>(delta_index));
  const double rho = spec.rho_values.at(static_cast<std::size_t>(rho_index));
  const Index m = static_cast<Index>(std::llround(delta * static_cast<double>(spec.d)));
  if (m < 1) throw std::invalid_argument("phase cell: m = round(delta d) must be >= 1");
  const Index ell =
      spec.d - static_cast<Index>(std::llround(rho * static_cast<double>(m)));
  const Index p = spec.diagnostic_identity ? spec.d : spec.p;
  if (ell < 0 || ell > p)
    throw std::invalid_argument("phase cell: ell = d - round(rho m) out of [0, p]");
  const Index k = p - ell;

  Index successes = 0;
  double iteration_sum = 0.0;
  for (Index trial = 0; trial < spec.trials; ++trial) {
    const std::uint64_t trial_seed =
        derive_seed(spec.seed, {static_cast<std::uint64_t>(delta_index),
                                static_cast<std::uint64_t>(rho_index),
                                static_cast<std::uint64_t>(trial)});
    try {
      RecoveryProblem problem;
      if (spec.diagnostic_identity) {
        problem.m_map = std::make_shared<IdentityMap>(spec.d);
        problem.pair = identity_pair(spec.d);
      } else {
        Rng rng(derive_seed(trial_seed, {0}));
        Matrix gauss = rng.gaussian_matrix(m, spec.d);
        gauss /= std::sqrt(static_cast<double>(m));
        problem.m_map = dense_map(std::move(gauss));
        problem.pair = random_tight_frame(spec.p, spec.d, derive_seed(trial_seed, {1}));
      }
      problem.k = k;
      CosparseSpec signal_spec{problem.pair, ell, derive_seed(trial_seed, {2})};
      const Vector x = gen_cosparse_signal(signal_spec);
      problem.y = problem.m_map->forward(x);

      HaltingRule halting = HaltingRule::defaults_for(problem.y.norm());
      halting.max_iterations = spec.max_iterations;
      const RecoveryOutput out =
          dispatch_solver(spec.algorithm, problem, ell, spec.step_rule, halting);
      iteration_sum += out.iterations;
      if ((out.x_hat - x).norm() <= spec.success_tolerance * x.norm()) ++successes;
    } catch (const NumericalError&) {
      // divergence (or a degenerate draw) counts as a failed trial
      iteration_sum += spec.max_iterations;
    }
  }
  PhaseCellResult cell;
  cell.success_rate = static_cast<double>(successes) / static_cast<double>(spec.trials);
  cell.mean_iterations = iteration_sum / static_cast<double>(spec.trials);
  return cell;
}

PhaseGridResult run_phase_grid(const PhaseGridSpec& spec, int threads) {
  spec.validate();
  const Index n_delta = static_cast<Index>(spec.delta_values.size());
  const Index n_rho = static_cast<Index>(spec.rho_values.size());
  PhaseGridResult result;
  result.spec = spec;
  result.success_rate.resize(n_delta, n_rho);
  result.mean_iterations.resize(n_delta, n_rho);
  parallel_for(n_delta * n_rho, threads, [&](Index cell) {
    const Index di = cell / n_rho;
    const Index ri = cell % n_rho;
    const PhaseCellResult r = run_phase_cell(spec, di, ri);
    result.success_rate(di, ri) = r.success_rate;
    result.mean_iterations(di, ri) = r.mean_iterations;
  });
  return result;
}

void write_phase_csv(std::ostream& out, const PhaseGridResult& result) {
  out << "delta,rho,success_rate,mean_iterations\n";
  char line[160];
  for (Index di = 0; di < result.success_rate.rows(); ++di)
    for (Index ri = 0; ri < result.success_rate.cols(); ++ri) {
      std::snprintf(line, sizeof(line), "%.6g,%.6g,%.6g,%.6g\n",
                    result.spec.delta_values[static_cast<std::size_t>(di)],
                    result.spec.rho_values[static_cast<std::size_t>(ri)],
                    result.success_rate(di, ri), result.mean_iterations(di, ri));
      out << line;
    }
}

namespace {

Matrix load_image(const MriRunSpec& spec) {
  if (spec.phantom_n > 0) return shepp_logan(spec.phantom_n);
  if (spec.image_path.empty()) throw std::invalid_argument("no image source given");
  return read_pgm(spec.image_path);
}

SamplingMask load_mask(const MriRunSpec& spec, Index h, Index w) {
  SamplingMask mask;
  if (spec.radial_lines > 0) {
    if (h != w)
      throw std::invalid_argument("radial masks require a square image");
    mask = radial_mask(h, spec.radial_lines);
  } else if (!spec.mask_path.empty()) {
    mask = read_pbm(spec.mask_path);
  } else {
    throw std::invalid_argument("no mask source given");
  }
  if (mask.height != h || mask.width != w)
    throw DimensionError("mask dimensions do not match the image");
  return mask;
}

Vector flatten(const Matrix& image) {
  Vector x(image.size());
  for (Index r = 0; r < image.rows(); ++r)
    for (Index c = 0; c < image.cols(); ++c) x[r * image.cols() + c] = image(r, c);
  return x;
}

Matrix unflatten(const Vector& x, Index h, Index w) {
  Matrix image(h, w);
  for (Index r = 0; r < h; ++r)
    for (Index c = 0; c < w; ++c) image(r, c) = x[r * w + c];
  return image;
}

}  // namespace

MriRunResult run_mri(const MriRunSpec& spec) {
  const Matrix image = load_image(spec);
  const Index h = image.rows(), w = image.cols();
  const SamplingMask mask = load_mask(spec, h, w);
  const AnalysisPair pair = undecimated_haar(h, w);
  const LinearMapPtr m_map = partial_fourier(mask);
  const Vector x = flatten(image);

  const CosparsifyResult model = cosparsify(x, pair, spec.threshold);

  NoiseSpec noise = spec.noise;
  if (noise.kind != NoiseSpec::Kind::None && noise.seed == 0)
    noise.seed = derive_seed(spec.seed, {17});
  const CVector y_clean = m_map->forward(x);
  const NoisyMeasurements measured = add_noise(y_clean, noise, m_map->field());

  RecoveryProblem problem;
  problem.y = measured.noisy;
  problem.m_map = m_map;
  problem.pair = pair;
  problem.k = model.k;

  HaltingRule halting = HaltingRule::defaults_for(problem.y.norm());
  halting.max_iterations = spec.max_iterations;
  if (spec.algorithm == Algorithm::Aiht)
    throw std::invalid_argument("aiht needs a dense analysis operator; use tdiht or iht");
  const RecoveryOutput out = dispatch_solver(spec.algorithm, problem, pair.p() - model.k,
                                             spec.step_rule, halting);

  // Naive recovery: zero-filled inverse DFT. Under the unitary DFT
  // convention the adjoint already passes sampled coefficients with unit
  // gain, so the rescale factor is 1 (see README).
  const Vector naive = m_map->adjoint(measured.noisy);

  MriRunResult result;
  result.recon = unflatten(out.x_hat, h, w);
  result.naive = unflatten(naive, h, w);
  result.psnr = psnr(x, out.x_hat);
  result.naive_psnr = psnr(x, naive);
  result.model_error_psnr = model.model_error_psnr;
  result.k = model.k;
  result.measurements = mask.count;
  result.iterations = out.iterations;
  result.seed = spec.seed;
  return result;
}

std::string mri_report_json(const MriRunResult& result) {
  nlohmann::json j;
  j["psnr"] = result.psnr;
  j["naive_psnr"] = result.naive_psnr;
  j["model_error_psnr"] = result.model_error_psnr;
  j["k"] = result.k;
  j["measurements"] = result.measurements;
  j["iterations"] = result.iterations;
  j["seed"] = result.seed;
  return j.dump();
}

DenoisingEnsembleResult gaussian_denoising_ensemble(Index d, Index p, Index m,
                                                    Index ell, double snr_ratio,
                                                    Index trials, std::uint64_t seed,
                                                    int threads) {
  if (trials < 1) throw std::invalid_argument("ensemble needs trials >= 1");
  std::vector<double> errors(static_cast<std::size_t>(trials));
  std::vector<double> noise_powers(static_cast<std::size_t>(trials));
  parallel_for(trials, threads, [&](Index trial) {
    const std::uint64_t trial_seed =
        derive_seed(seed, {static_cast<std::uint64_t>(trial)});
    Rng rng(derive_seed(trial_seed, {0}));
    Matrix gauss = rng.gaussian_matrix(m, d);
    gauss /= std::sqrt(static_cast<double>(m));

    RecoveryProblem problem;
    problem.m_map = dense_map(gauss);
    problem.pair = random_tight_frame(p, d, derive_seed(trial_seed, {1}));
    problem.k = p - ell;
    const Vector x =
        gen_cosparse_signal(CosparseSpec{problem.pair, ell, derive_seed(trial_seed, {2})});

    const CVector y_clean = problem.m_map->forward(x);
    const double sigma =
        y_clean.norm() / (snr_ratio * std::sqrt(static_cast<double>(m)));
    const NoisyMeasurements measured = add_noise(
        y_clean, NoiseSpec::gaussian(sigma, derive_seed(trial_seed, {3})), Field::Real);

    problem.y = measured.noisy;
    const HaltingRule halting = HaltingRule::defaults_for(problem.y.norm());
    const RecoveryOutput out =
        tdiht_recover(problem, StepSizeRule::adaptive(), halting);

    errors[static_cast<std::size_t>(trial)] = (out.x_hat - x).squaredNorm();
    // equivalent signal-domain noise: minimal-norm solution of M z = e
    Eigen::BDCSVD<Matrix> svd(gauss, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector z = svd.solve(measured.e.real());
    noise_powers[static_cast<std::size_t>(trial)] = z.squaredNorm();
  });
  DenoisingEnsembleResult result;
  result.trials = trials;
  for (Index i = 0; i < trials; ++i) {
    result.mean_squared_error += errors[static_cast<std::size_t>(i)];
    result.mean_noise_power += noise_powers[static_cast<std::size_t>(i)];
  }
  result.mean_squared_error /= static_cast<double>(trials);
  result.mean_noise_power /= static_cast<double>(trials);
  return result;
}

}  // namespace cosparse
