#include "cosparse/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cosparse {

namespace {

constexpr double kDegenerateStepFactor = 1e-14;

Vector restrict_to(const Eigen::Ref<const Vector>& w, const std::vector<Index>& support) {
  Vector out = Vector::Zero(w.size());
  for (const Index i : support) out[i] = w[i];
  return out;
}

std::vector<Index> sorted_union(const std::vector<Index>& a, const std::vector<Index>& b) {
  std::vector<Index> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

double norm_on_support(const Eigen::Ref<const Vector>& v, const std::vector<Index>& support) {
  double acc = 0.0;
  for (const Index i : support) acc += v[i] * v[i];
  return std::sqrt(acc);
}

}  // namespace

void RecoveryProblem::validate() const {
  if (!m_map || !pair.omega || !pair.synthesis)
    throw std::invalid_argument("recovery problem is missing operators");
  if (y.size() != m_map->rows())
    throw DimensionError("measurement vector length != measurement map rows");
  if (pair.d() != m_map->cols())
    throw DimensionError("analysis pair dimension != measurement map cols");
  if (pair.synthesis->rows() != pair.d() || pair.synthesis->cols() != pair.p())
    throw DimensionError("synthesis map must be d x p");
  if (k < 0 || k > pair.p())
    throw std::invalid_argument("sparsity budget k out of range");
}

StepSizeRule StepSizeRule::constant(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw std::invalid_argument("constant step size must be finite and positive");
  return StepSizeRule{Kind::Constant, mu};
}

HaltingRule HaltingRule::defaults_for(double y_norm) {
  HaltingRule rule;
  rule.max_iterations = 500;
  rule.residual_tolerance = 1e-7 * y_norm;
  rule.stagnation_window = 10;
  rule.stagnation_epsilon = 1e-9 * y_norm;
  return rule;
}

void HaltingRule::validate() const {
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (residual_tolerance < 0.0 || stagnation_epsilon < 0.0)
    throw std::invalid_argument("halting tolerances must be nonnegative");
}

HardThresholdResult hard_threshold(const Eigen::Ref<const Vector>& w, Index k) {
  const Index p = w.size();
  if (k < 0 || k > p) throw std::invalid_argument("hard_threshold: k out of range");
  HardThresholdResult result;
  result.thresholded = Vector::Zero(p);
  if (k == 0) return result;
  std::vector<Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Index{0});
  const auto larger = [&w](Index a, Index b) {
    const double ma = std::abs(w[a]), mb = std::abs(w[b]);
    return ma != mb ? ma > mb : a < b;
  };
  if (k < p)
    std::nth_element(order.begin(), order.begin() + (k - 1), order.end(), larger);
  result.support.assign(order.begin(), order.begin() + k);
  std::sort(result.support.begin(), result.support.end());
  for (const Index i : result.support) result.thresholded[i] = w[i];
  return result;
}

std::vector<Index> cosupport_select(const Eigen::Ref<const Vector>& z, Index ell,
                                    const LinearMap& omega) {
  const Index p = omega.rows();
  if (ell < 0 || ell > p) throw std::invalid_argument("cosupport_select: ell out of range");
  const Vector coeffs = omega.forward_real(z);
  // complement of the keep-set so supp and cosupp tie rules agree
  const HardThresholdResult kept = hard_threshold(coeffs, p - ell);
  std::vector<Index> cosupport;
  cosupport.reserve(static_cast<std::size_t>(ell));
  std::size_t cursor = 0;
  for (Index i = 0; i < p; ++i) {
    if (cursor < kept.support.size() && kept.support[cursor] == i) {
      ++cursor;
    } else {
      cosupport.push_back(i);
    }
  }
  return cosupport;
}

Vector cosparse_project(const Eigen::Ref<const Vector>& z,
                        const std::vector<Index>& cosupport, const Matrix& omega) {
  if (cosupport.empty()) return z;
  Matrix omega_rows(static_cast<Index>(cosupport.size()), omega.cols());
  for (std::size_t i = 0; i < cosupport.size(); ++i) {
    const Index row = cosupport[i];
    if (row < 0 || row >= omega.rows())
      throw std::invalid_argument("cosupport index out of range");
    omega_rows.row(static_cast<Index>(i)) = omega.row(row);
  }
  const Vector rhs = omega_rows * z;
  // minimal-norm least squares = Omega_Lambda^dag rhs
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(omega_rows);
  return z - cod.solve(rhs);
}

namespace {

// The solvers keep the synthesized iterate and its residual cached between
// iterations, so each TDIHT iteration costs one M, one M^*, two Omega and
// one D application (plus two M and two D for the adaptive step).
double adaptive_mu_tdiht(const RecoveryProblem& problem,
                         const std::vector<Index>& support_prev,
                         const Eigen::Ref<const Vector>& synth_prev,
                         const Eigen::Ref<const Vector>& grad_transform) {
  const HardThresholdResult grad_top = hard_threshold(grad_transform, problem.k);
  const std::vector<Index> merged = sorted_union(support_prev, grad_top.support);
  const Vector omega_synth = problem.pair.analyze(synth_prev);
  const CVector offset =
      problem.m_map->forward(problem.pair.synthesize(restrict_to(omega_synth, merged)));
  const CVector direction =
      problem.m_map->forward(problem.pair.synthesize(restrict_to(grad_transform, merged)));
  const double denom = direction.squaredNorm();
  if (denom <= kDegenerateStepFactor * problem.y.squaredNorm()) return 0.0;
  const CVector target = problem.y - offset;
  return (direction.dot(target)).real() / denom;
}

bool stagnated(const std::vector<double>& trace, const HaltingRule& halting) {
  const std::size_t window = static_cast<std::size_t>(halting.stagnation_window);
  if (window == 0 || trace.size() <= window) return false;
  const double before = trace[trace.size() - 1 - window];
  const double now = trace.back();
  return before - now < halting.stagnation_epsilon;
}

void record_transform_error(const std::vector<Index>& truth_support,
                            const Vector& truth_coeffs, const Vector& w_g,
                            const std::vector<Index>& support,
                            std::vector<double>& trace) {
  const std::vector<Index> merged = sorted_union(truth_support, support);
  const Vector diff = truth_coeffs - w_g;
  trace.push_back(norm_on_support(diff, merged));
}

}  // namespace

TdihtStepResult tdiht_step(const Eigen::Ref<const Vector>& w_prev,
                           const RecoveryProblem& problem, double mu) {
  problem.validate();
  if (w_prev.size() != problem.p())
    throw DimensionError("tdiht_step: state length != p");
  if (!std::isfinite(mu)) throw std::invalid_argument("tdiht_step: step size not finite");
  const Vector synth = problem.pair.synthesize(w_prev);
  const CVector residual = problem.y - problem.m_map->forward(synth);
  const Vector grad = problem.pair.analyze(problem.m_map->adjoint(residual));
  TdihtStepResult result;
  result.w_g = problem.pair.analyze(synth) + mu * grad;
  if (!result.w_g.allFinite())
    throw DivergenceError("tdiht_step produced non-finite values", 1);
  HardThresholdResult thresholded = hard_threshold(result.w_g, problem.k);
  result.w_hat = std::move(thresholded.thresholded);
  result.support = std::move(thresholded.support);
  return result;
}

double adaptive_step_size(const RecoveryProblem& problem,
                          const Eigen::Ref<const Vector>& w_prev,
                          const std::vector<Index>& support_prev) {
  problem.validate();
  if (w_prev.size() != problem.p())
    throw DimensionError("adaptive_step_size: state length != p");
  const Vector synth = problem.pair.synthesize(w_prev);
  const CVector residual = problem.y - problem.m_map->forward(synth);
  const Vector grad = problem.pair.analyze(problem.m_map->adjoint(residual));
  return adaptive_mu_tdiht(problem, support_prev, synth, grad);
}

RecoveryOutput tdiht_recover(const RecoveryProblem& problem, const StepSizeRule& step,
                             const HaltingRule& halting, const Vector* ground_truth) {
  problem.validate();
  halting.validate();
  const Index p = problem.p();

  RecoveryOutput out;
  out.w_hat = Vector::Zero(p);
  out.x_hat = Vector::Zero(problem.d());
  if (problem.k == 0) return out;

  Vector truth_coeffs;
  std::vector<Index> truth_support;
  if (ground_truth) {
    truth_coeffs = problem.pair.analyze(*ground_truth);
    truth_support = hard_threshold(truth_coeffs, problem.k).support;
  }

  Vector w_hat = Vector::Zero(p);
  std::vector<Index> support;
  Vector synth = Vector::Zero(problem.d());
  CVector residual = problem.y;

  for (int t = 1; t <= halting.max_iterations; ++t) {
    const Vector grad = problem.pair.analyze(problem.m_map->adjoint(residual));
    double mu;
    if (step.kind == StepSizeRule::Kind::Adaptive) {
      mu = adaptive_mu_tdiht(problem, support, synth, grad);
      if (mu == 0.0) break;  // degenerate direction: converged
    } else {
      mu = step.mu;
    }
    const Vector w_g = problem.pair.analyze(synth) + mu * grad;
    if (!w_g.allFinite())
      throw DivergenceError("TDIHT diverged at iteration " + std::to_string(t), t);
    HardThresholdResult thresholded = hard_threshold(w_g, problem.k);
    w_hat = std::move(thresholded.thresholded);
    support = std::move(thresholded.support);
    synth = problem.pair.synthesize(w_hat);
    residual = problem.y - problem.m_map->forward(synth);
    out.residual_trace.push_back(std::sqrt(residual.squaredNorm()));
    if (ground_truth)
      record_transform_error(truth_support, truth_coeffs, w_g, support,
                             out.transform_error_trace);
    out.iterations = t;
    if (out.residual_trace.back() <= halting.residual_tolerance) break;
    if (stagnated(out.residual_trace, halting)) break;
  }

  out.w_hat = std::move(w_hat);
  out.support = std::move(support);
  out.x_hat = std::move(synth);
  return out;
}

RecoveryOutput iht_recover(const RecoveryProblem& problem, const StepSizeRule& step,
                           const HaltingRule& halting) {
  problem.validate();
  halting.validate();
  const Index p = problem.p();

  RecoveryOutput out;
  out.w_hat = Vector::Zero(p);
  out.x_hat = Vector::Zero(problem.d());
  if (problem.k == 0) return out;

  const LinearMapPtr a = compose(problem.m_map, problem.pair.synthesis);

  Vector alpha = Vector::Zero(p);
  std::vector<Index> support;
  CVector residual = problem.y;

  for (int t = 1; t <= halting.max_iterations; ++t) {
    const Vector grad = a->adjoint(residual);
    double mu;
    if (step.kind == StepSizeRule::Kind::Adaptive) {
      const HardThresholdResult grad_top = hard_threshold(grad, problem.k);
      const std::vector<Index> merged = sorted_union(support, grad_top.support);
      const Vector direction = restrict_to(grad, merged);
      const CVector image = a->forward(direction);
      const double denom = image.squaredNorm();
      if (denom <= kDegenerateStepFactor * problem.y.squaredNorm()) break;
      mu = (image.dot(residual)).real() / denom;
    } else {
      mu = step.mu;
    }
    const Vector alpha_g = alpha + mu * grad;
    if (!alpha_g.allFinite())
      throw DivergenceError("IHT diverged at iteration " + std::to_string(t), t);
    HardThresholdResult thresholded = hard_threshold(alpha_g, problem.k);
    alpha = std::move(thresholded.thresholded);
    support = std::move(thresholded.support);
    residual = problem.y - a->forward(alpha);
    out.residual_trace.push_back(std::sqrt(residual.squaredNorm()));
    out.iterations = t;
    if (out.residual_trace.back() <= halting.residual_tolerance) break;
    if (stagnated(out.residual_trace, halting)) break;
  }

  out.w_hat = std::move(alpha);
  out.support = std::move(support);
  out.x_hat = problem.pair.synthesize(out.w_hat);
  return out;
}

RecoveryOutput aiht_recover(const RecoveryProblem& problem, Index ell,
                            const StepSizeRule& step, const HaltingRule& halting) {
  problem.validate();
  halting.validate();
  const Index p = problem.p();
  if (ell != p - problem.k)
    throw std::invalid_argument("aiht_recover expects ell = p - k");
  const Matrix& omega = problem.pair.dense_omega();

  RecoveryOutput out;
  out.w_hat = Vector::Zero(p);
  out.x_hat = Vector::Zero(problem.d());
  if (problem.k == 0) return out;

  Vector x = Vector::Zero(problem.d());
  CVector residual = problem.y;
  std::vector<Index> cosupport;

  for (int t = 1; t <= halting.max_iterations; ++t) {
    const Vector grad = problem.m_map->adjoint(residual);
    double mu;
    if (step.kind == StepSizeRule::Kind::Adaptive) {
      // exact line search along the gradient
      const CVector image = problem.m_map->forward(grad);
      const double denom = image.squaredNorm();
      if (denom <= kDegenerateStepFactor * problem.y.squaredNorm()) break;
      mu = (image.dot(residual)).real() / denom;
    } else {
      mu = step.mu;
    }
    const Vector x_g = x + mu * grad;
    if (!x_g.allFinite())
      throw DivergenceError("AIHT diverged at iteration " + std::to_string(t), t);
    cosupport = cosupport_select(x_g, ell, *problem.pair.omega);
    x = cosparse_project(x_g, cosupport, omega);
    residual = problem.y - problem.m_map->forward(x);
    out.residual_trace.push_back(std::sqrt(residual.squaredNorm()));
    out.iterations = t;
    if (out.residual_trace.back() <= halting.residual_tolerance) break;
    if (stagnated(out.residual_trace, halting)) break;
  }

  // w_hat is the cosupport-zeroed transform of the final iterate; by
  // D Omega = I this synthesizes back to x up to the projection residual.
  Vector coeffs = problem.pair.analyze(x);
  for (const Index i : cosupport) coeffs[i] = 0.0;
  out.w_hat = std::move(coeffs);
  out.support.clear();
  {
    std::size_t cursor = 0;
    for (Index i = 0; i < p; ++i) {
      if (cursor < cosupport.size() && cosupport[cursor] == i) {
        ++cursor;
      } else {
        out.support.push_back(i);
      }
    }
  }
  out.cosupport = std::move(cosupport);
  out.x_hat = std::move(x);
  return out;
}

}  // namespace cosparse
