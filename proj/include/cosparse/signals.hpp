#pragma once

#include "cosparse/linops.hpp"
#include "cosparse/types.hpp"

#include <cstdint>

namespace cosparse {

struct NoiseSpec {
  enum class Kind { None, Adversarial, Gaussian, TargetSnr };
  Kind kind = Kind::None;
  double epsilon = 0.0;  // adversarial l2 bound
  double sigma = 0.0;    // gaussian per-component std dev
  double snr = 0.0;      // target ||Mx|| / ||e|| ratio
  std::uint64_t seed = 0;

  static NoiseSpec none() { return {}; }
  static NoiseSpec adversarial(double epsilon, std::uint64_t seed);
  static NoiseSpec gaussian(double sigma, std::uint64_t seed);
  static NoiseSpec target_snr(double snr, std::uint64_t seed);
};

struct CosparseSpec {
  AnalysisPair pair;
  Index ell = 0;
  std::uint64_t seed = 0;
};

/// Unit-norm signal with Omega_Lambda x = 0 for a uniformly drawn
/// cosupport of size ell; redraws up to 10 times on degenerate draws.
Vector gen_cosparse_signal(const CosparseSpec& spec);

struct NoisyMeasurements {
  CVector noisy;
  CVector e;
};

/// Adds noise per the spec. `field` states whether the measurement space
/// is real or complex; complex Gaussian noise splits the variance evenly
/// between real and imaginary parts.
NoisyMeasurements add_noise(const CVector& clean, const NoiseSpec& spec,
                            Field field = Field::Real);

struct CosparsifyResult {
  Vector w;  // analysis coefficients with entries below the threshold zeroed
  Index k = 0;
  double model_error_psnr = 0.0;  // psnr(image, D w)
};

CosparsifyResult cosparsify(const Eigen::Ref<const Vector>& image,
                            const AnalysisPair& pair, double threshold);

/// PSNR in dB with peak 1.0, capped at 300 dB (the documented stand-in
/// for a zero-MSE match).
inline constexpr double kPsnrCap = 300.0;
double psnr(const Eigen::Ref<const Vector>& reference,
            const Eigen::Ref<const Vector>& estimate);

/// Standard ten-ellipse head phantom rasterized at n x n, clipped to [0,1].
Matrix shepp_logan(Index n);

struct Lemma7Check {
  double empirical = 0.0;  // Monte Carlo mean of max_{|T|<=k} ||Omega_T M^* e||^2
  double bound = 0.0;      // 4 max_i ||Omega_i||^2 (1 + delta_1) k log(p) sigma^2
  double std_error = 0.0;  // standard error of the empirical mean
};

Lemma7Check lemma7_bound_check(const LinearMap& m_map, const Matrix& omega, Index k,
                               double sigma, Index trials, std::uint64_t seed);

}  // namespace cosparse
