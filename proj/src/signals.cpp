#include "cosparse/signals.hpp"

#include "cosparse/frames.hpp"
#include "cosparse/recovery.hpp"
#include "cosparse/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cosparse {

NoiseSpec NoiseSpec::adversarial(double epsilon, std::uint64_t seed) {
  if (epsilon < 0.0) throw std::invalid_argument("adversarial bound must be >= 0");
  NoiseSpec spec;
  spec.kind = Kind::Adversarial;
  spec.epsilon = epsilon;
  spec.seed = seed;
  return spec;
}

NoiseSpec NoiseSpec::gaussian(double sigma, std::uint64_t seed) {
  if (sigma < 0.0) throw std::invalid_argument("noise std dev must be >= 0");
  NoiseSpec spec;
  spec.kind = Kind::Gaussian;
  spec.sigma = sigma;
  spec.seed = seed;
  return spec;
}

NoiseSpec NoiseSpec::target_snr(double snr, std::uint64_t seed) {
  if (!(snr > 0.0)) throw std::invalid_argument("target SNR must be > 0");
  NoiseSpec spec;
  spec.kind = Kind::TargetSnr;
  spec.snr = snr;
  spec.seed = seed;
  return spec;
}

Vector gen_cosparse_signal(const CosparseSpec& spec) {
  const Index p = spec.pair.p();
  const Index d = spec.pair.d();
  if (spec.ell < 0 || spec.ell > p)
    throw std::invalid_argument("cosparsity out of range");
  const Matrix& omega = spec.pair.dense_omega();
  Rng rng(spec.seed);
  for (int attempt = 0; attempt < 10; ++attempt) {
    const std::vector<Index> cosupport = rng.sample_without_replacement(p, spec.ell);
    const Vector raw = rng.gaussian_vector(d);
    const Vector projected =
        spec.ell == 0 ? raw : cosparse_project(raw, cosupport, omega);
    const double norm = projected.norm();
    if (norm > 1e-12 * raw.norm()) return projected / norm;
  }
  throw NumericalError("gen_cosparse_signal: projection degenerate after 10 draws");
}

NoisyMeasurements add_noise(const CVector& clean, const NoiseSpec& spec, Field field) {
  const Index m = clean.size();
  NoisyMeasurements out;
  out.e = CVector::Zero(m);
  if (spec.kind != NoiseSpec::Kind::None && m > 0) {
    Rng rng(spec.seed);
    CVector direction(m);
    if (field == Field::Complex) {
      for (Index i = 0; i < m; ++i) {
        const double re = rng.gaussian();
        const double im = rng.gaussian();
        direction[i] = {re, im};
      }
    } else {
      for (Index i = 0; i < m; ++i) direction[i] = {rng.gaussian(), 0.0};
    }
    switch (spec.kind) {
      case NoiseSpec::Kind::Adversarial: {
        const double norm = direction.norm();
        out.e = (spec.epsilon / norm) * direction;
        break;
      }
      case NoiseSpec::Kind::Gaussian: {
        // per-component variance sigma^2; complex components split it
        const double scale =
            field == Field::Complex ? spec.sigma / std::sqrt(2.0) : spec.sigma;
        out.e = scale * direction;
        break;
      }
      case NoiseSpec::Kind::TargetSnr: {
        const double clean_norm = clean.norm();
        const double norm = direction.norm();
        out.e = (clean_norm / (spec.snr * norm)) * direction;
        break;
      }
      case NoiseSpec::Kind::None:
        break;
    }
  }
  out.noisy = clean + out.e;
  return out;
}

CosparsifyResult cosparsify(const Eigen::Ref<const Vector>& image,
                            const AnalysisPair& pair, double threshold) {
  if (threshold < 0.0) throw std::invalid_argument("threshold must be >= 0");
  CosparsifyResult result;
  result.w = pair.analyze(image);
  for (Index i = 0; i < result.w.size(); ++i)
    if (std::abs(result.w[i]) < threshold) result.w[i] = 0.0;
  result.k = (result.w.array() != 0.0).count();
  result.model_error_psnr = psnr(image, pair.synthesize(result.w));
  return result;
}

double psnr(const Eigen::Ref<const Vector>& reference,
            const Eigen::Ref<const Vector>& estimate) {
  if (reference.size() != estimate.size())
    throw DimensionError("psnr: image lengths differ");
  const double mse =
      (reference - estimate).squaredNorm() / static_cast<double>(reference.size());
  if (mse <= 0.0) return kPsnrCap;
  return std::min(kPsnrCap, -10.0 * std::log10(mse));
}

namespace {

// value, half-axes, center, rotation (degrees) for the ten ellipses of the
// standard high-contrast head phantom
struct Ellipse {
  double value, a, b, x0, y0, phi_deg;
};

constexpr Ellipse kPhantomEllipses[10] = {
    {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
    {-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0},
    {-0.2, 0.11, 0.31, 0.22, 0.0, -18.0},
    {-0.2, 0.16, 0.41, -0.22, 0.0, 18.0},
    {0.1, 0.21, 0.25, 0.0, 0.35, 0.0},
    {0.1, 0.046, 0.046, 0.0, 0.1, 0.0},
    {0.1, 0.046, 0.046, 0.0, -0.1, 0.0},
    {0.1, 0.046, 0.023, -0.08, -0.605, 0.0},
    {0.1, 0.023, 0.023, 0.0, -0.605, 0.0},
    {0.1, 0.023, 0.046, 0.06, -0.605, 0.0},
};

}  // namespace

Matrix shepp_logan(Index n) {
  if (n < 16) throw std::invalid_argument("phantom side length must be >= 16");
  Matrix image = Matrix::Zero(n, n);
  const double step = 2.0 / static_cast<double>(n);
  for (Index i = 0; i < n; ++i) {
    // pixel centers: x, y in (-1, 1), y downward-to-upward
    const double y = 1.0 - (static_cast<double>(i) + 0.5) * step;
    for (Index j = 0; j < n; ++j) {
      const double x = (static_cast<double>(j) + 0.5) * step - 1.0;
      double value = 0.0;
      for (const Ellipse& e : kPhantomEllipses) {
        const double phi = e.phi_deg * std::numbers::pi / 180.0;
        const double c = std::cos(phi), s = std::sin(phi);
        const double dx = x - e.x0, dy = y - e.y0;
        const double u = (dx * c + dy * s) / e.a;
        const double v = (-dx * s + dy * c) / e.b;
        if (u * u + v * v <= 1.0) value += e.value;
      }
      image(i, j) = std::clamp(value, 0.0, 1.0);
    }
  }
  return image;
}

Lemma7Check lemma7_bound_check(const LinearMap& m_map, const Matrix& omega, Index k,
                               double sigma, Index trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("lemma7_bound_check needs trials >= 1");
  if (sigma < 0.0) throw std::invalid_argument("sigma must be >= 0");
  if (omega.cols() != m_map.cols())
    throw DimensionError("omega cols must match measurement map cols");
  const Index p = omega.rows();
  if (k < 0 || k > p) throw std::invalid_argument("k out of range");

  Lemma7Check check;
  const double delta1 = drip_exhaustive(m_map, omega.transpose(), 1).delta;
  const double max_row_sq = omega.rowwise().squaredNorm().maxCoeff();
  check.bound = 4.0 * max_row_sq * (1.0 + delta1) * static_cast<double>(k) *
                std::log(static_cast<double>(p)) * sigma * sigma;
  if (sigma == 0.0) return check;

  // max over |T| <= k equals the sum of the k largest squared entries
  double sum = 0.0, sum_sq = 0.0;
  Vector squares(p);
  for (Index trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(trial)}));
    const Vector e = sigma * rng.gaussian_vector(m_map.rows());
    const Vector back = omega * m_map.adjoint(e.cast<std::complex<double>>());
    squares = back.cwiseAbs2();
    std::partial_sort(squares.data(), squares.data() + k, squares.data() + p,
                      std::greater<double>());
    const double value = squares.head(k).sum();
    sum += value;
    sum_sq += value * value;
  }
  const double mean = sum / static_cast<double>(trials);
  const double variance =
      std::max(0.0, sum_sq / static_cast<double>(trials) - mean * mean);
  check.empirical = mean;
  check.std_error = std::sqrt(variance / static_cast<double>(trials));
  return check;
}

}  // namespace cosparse
