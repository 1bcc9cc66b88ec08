#pragma once

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <vector>

namespace oavi {

enum class FeasibleRegion { Unconstrained, L1Ball, L2Ball };

enum class TerminationReason { VanishingReached, GapBelowEpsilon, Stalled, IterationCap };

std::string to_string(TerminationReason reason);

/// One (optionally l2-regularized, optionally ball-constrained) least-squares
/// instance: minimize (1/m)||A v + b||^2 + (lambda/2)||v||^2 over the region.
/// The leading coefficient of the candidate polynomial is fixed to 1 and is
/// not part of v, so it is neither constrained nor regularized.
struct OracleProblem {
  Eigen::MatrixXd design;       // A, m x k
  Eigen::VectorXd target;       // b, length m
  double lambda = 0.0;          // l2 regularization weight
  FeasibleRegion region = FeasibleRegion::Unconstrained;
  double radius = 1.0;          // tau - 1 for ball regions; tau >= 2 so radius >= 1
  double epsilon = 0.0;         // Frank-Wolfe gap stopping threshold
  double psi = 0.0;             // vanishing threshold for early stopping
  int max_iterations = 10000;

  Eigen::Index num_rows() const { return design.rows(); }
  Eigen::Index num_cols() const { return design.cols(); }

  void validate() const;
};

struct OracleSolution {
  Eigen::VectorXd coefficients;
  double objective = 0.0;
  // Final Frank-Wolfe gap; NaN for the unconstrained solver.
  double fw_gap = std::numeric_limits<double>::quiet_NaN();
  TerminationReason reason = TerminationReason::IterationCap;
  int iterations = 0;
};

/// Signed coordinate vertex sign * radius * e_index of the l1-ball.
struct Atom {
  Eigen::Index index = 0;
  int sign = 1;

  bool operator==(const Atom& other) const { return index == other.index && sign == other.sign; }
  // Deterministic ordering: coordinate index first, then sign (-1 before +1).
  bool operator<(const Atom& other) const {
    if (index != other.index) return index < other.index;
    return sign < other.sign;
  }
};

/// Convex-combination representation of a Pairwise Frank-Wolfe iterate over
/// l1-ball vertices. Weights stay positive and sum to 1; the iterate is
/// reconstructible as sum of weight * vertex.
class ActiveSet {
 public:
  ActiveSet(Eigen::Index dimension, double radius, Atom start);

  const std::vector<std::pair<Atom, double>>& atoms() const { return atoms_; }
  double radius() const { return radius_; }

  double weight_of(const Atom& a) const;

  /// Shifts weight gamma from `away` onto `toward`, dropping atoms whose
  /// weight falls below the cleanup threshold and renormalizing to sum 1.
  void transfer_weight(const Atom& toward, const Atom& away, double gamma);

  Eigen::VectorXd reconstruct() const;

  double weight_sum() const;

  static constexpr double kDropThreshold = 1e-12;

 private:
  Eigen::Index dimension_;
  double radius_;
  std::vector<std::pair<Atom, double>> atoms_;  // kept sorted by Atom
};

/// Objective value and gradient of the (regularized) squared loss at v.
std::pair<double, Eigen::VectorXd> objective_and_gradient(const OracleProblem& p,
                                                          const Eigen::Ref<const Eigen::VectorXd>& v);

/// Linear minimization over l1-ball vertices: the signed coordinate with the
/// largest |gradient| entry, stepping against the gradient sign. A zero
/// gradient returns +radius * e_1 (any vertex is optimal).
Atom lmo_l1(const Eigen::Ref<const Eigen::VectorXd>& gradient, double radius);

Eigen::VectorXd atom_vector(const Atom& a, Eigen::Index dimension, double radius);

/// Linear minimization over the l2-ball: -radius * g / ||g||; the zero
/// gradient maps to the center, which forces a zero Frank-Wolfe gap.
Eigen::VectorXd lmo_l2(const Eigen::Ref<const Eigen::VectorXd>& gradient, double radius);

/// Exact minimizer of gamma -> f(x + gamma d) clipped to [0, gamma_max].
double line_search_quadratic(const OracleProblem& p, const Eigen::Ref<const Eigen::VectorXd>& x,
                             const Eigen::Ref<const Eigen::VectorXd>& d, double gamma_max);

/// Pairwise Frank-Wolfe over the l1-ball of the problem radius, starting at
/// the vertex +radius * e_{start_atom}.
OracleSolution pfw_solve(const OracleProblem& p, Eigen::Index start_atom = 0);

/// Vanilla Frank-Wolfe (conditional gradients) over the l2-ball, starting at
/// the center.
OracleSolution fw_solve(const OracleProblem& p);

/// Monotone Nesterov accelerated gradient descent, unconstrained, with step
/// size 1/L from a power-iteration estimate of 2*sigma_max(A)^2/m + lambda.
OracleSolution agd_solve(const OracleProblem& p);

/// Dispatches on p.region.
OracleSolution solve(const OracleProblem& p);

}  // namespace oavi
