#pragma once

#include "cosparse/linops.hpp"
#include "cosparse/types.hpp"

#include <optional>
#include <vector>

namespace cosparse {

/// Measurements y = M x + e together with the operators and the
/// transform-domain sparsity budget k = p - ell.
struct RecoveryProblem {
  CVector y;
  LinearMapPtr m_map;
  AnalysisPair pair;
  Index k = 0;

  Index m() const { return m_map->rows(); }
  Index d() const { return m_map->cols(); }
  Index p() const { return pair.p(); }
  void validate() const;
};

struct StepSizeRule {
  enum class Kind { Constant, Adaptive };
  Kind kind = Kind::Constant;
  double mu = 1.0;

  static StepSizeRule constant(double mu);
  static StepSizeRule adaptive() { return StepSizeRule{Kind::Adaptive, 0.0}; }
};

/// Stopping logic; at least one condition is always active because
/// max_iterations >= 1 is required.
struct HaltingRule {
  int max_iterations = 500;
  double residual_tolerance = 0.0;  // stop when ||y - M x_hat|| <= this
  int stagnation_window = 10;
  double stagnation_epsilon = 0.0;  // stop when the window improves by less

  /// max 500, residual tol 1e-7*||y||, stagnation 10 iterations / 1e-9*||y||.
  static HaltingRule defaults_for(double y_norm);
  void validate() const;
};

struct RecoveryOutput {
  Vector x_hat;                       // length d
  Vector w_hat;                       // length p, k-sparse
  std::vector<Index> support;         // final transform-domain support
  std::vector<Index> cosupport;       // AIHT only
  int iterations = 0;
  std::vector<double> residual_trace;         // ||y - M x_hat^t|| per iteration
  std::vector<double> transform_error_trace;  // with ground truth only
};

struct HardThresholdResult {
  std::vector<Index> support;  // ascending
  Vector thresholded;
};

/// Best k-term approximation. Keeps the k largest-magnitude entries,
/// ties broken toward the lowest index.
HardThresholdResult hard_threshold(const Eigen::Ref<const Vector>& w, Index k);

struct TdihtStepResult {
  Vector w_g;
  Vector w_hat;
  std::vector<Index> support;
};

/// One gradient + threshold update:
/// w_g = Omega D w_prev + mu Omega M^* (y - M D w_prev), then keep k terms.
TdihtStepResult tdiht_step(const Eigen::Ref<const Vector>& w_prev,
                           const RecoveryProblem& problem, double mu);

/// Closed-form line search restricted to
/// T~ = supp(w_prev) u supp(Omega M^*(y - M D w_prev), k). Returns 0 when
/// the search direction is degenerate, which signals convergence.
double adaptive_step_size(const RecoveryProblem& problem,
                          const Eigen::Ref<const Vector>& w_prev,
                          const std::vector<Index>& support_prev);

RecoveryOutput tdiht_recover(const RecoveryProblem& problem, const StepSizeRule& step,
                             const HaltingRule& halting,
                             const Vector* ground_truth = nullptr);

/// Synthesis-domain IHT on A = M D; the final estimate is D alpha_hat.
RecoveryOutput iht_recover(const RecoveryProblem& problem, const StepSizeRule& step,
                           const HaltingRule& halting);

/// Indices of the ell smallest-magnitude entries of Omega z, ties toward
/// the highest index (the complement of hard_threshold's rule).
std::vector<Index> cosupport_select(const Eigen::Ref<const Vector>& z, Index ell,
                                    const LinearMap& omega);

/// Orthogonal projection Q_Lambda z = z - Omega_Lambda^dag Omega_Lambda z.
Vector cosparse_project(const Eigen::Ref<const Vector>& z,
                        const std::vector<Index>& cosupport, const Matrix& omega);

/// Signal-domain analysis IHT with hard-threshold cosupport selection;
/// requires a dense Omega for the per-iteration projection.
RecoveryOutput aiht_recover(const RecoveryProblem& problem, Index ell,
                            const StepSizeRule& step, const HaltingRule& halting);

}  // namespace cosparse
