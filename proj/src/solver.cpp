#include "oavi/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oavi/errors.hpp"

namespace oavi {

namespace {

constexpr double kStallRelativeDecrease = 1e-12;
constexpr int kAgdStallWindow = 5;

bool stalled(double objective_before, double objective_after) {
  return objective_before - objective_after <= kStallRelativeDecrease * std::abs(objective_before);
}

// Power-iteration estimate of the largest squared singular value of A,
// inflated slightly so 1/L remains a safe step size.
double smoothness_constant(const OracleProblem& p) {
  const auto& A = p.design;
  const Eigen::Index k = A.cols();
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(k, 1.0, 1.0 + 0.01 * static_cast<double>(k - 1));
  v.normalize();
  double rayleigh = 0.0;
  for (int it = 0; it < 200; ++it) {
    Eigen::VectorXd w = A.transpose() * (A * v);
    const double norm = w.norm();
    if (norm <= 0.0) break;
    const double next = v.dot(w);
    v = w / norm;
    if (std::abs(next - rayleigh) <= 1e-12 * std::abs(next)) {
      rayleigh = next;
      break;
    }
    rayleigh = next;
  }
  const double sigma_sq = std::max(rayleigh, 0.0);
  return 1.01 * (2.0 * sigma_sq / static_cast<double>(p.num_rows())) + p.lambda;
}

}  // namespace

std::string to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::VanishingReached: return "vanishing-reached";
    case TerminationReason::GapBelowEpsilon: return "gap-below-epsilon";
    case TerminationReason::Stalled: return "stalled";
    case TerminationReason::IterationCap: return "iteration-cap";
  }
  return "unknown";
}

void OracleProblem::validate() const {
  if (design.rows() < 1 || design.cols() < 1) {
    throw std::invalid_argument("oracle problem needs m >= 1 and k >= 1");
  }
  if (target.size() != design.rows()) {
    throw std::invalid_argument("target length does not match design rows");
  }
  if (lambda < 0.0 || epsilon < 0.0 || psi < 0.0) {
    throw std::invalid_argument("lambda, epsilon, and psi must be nonnegative");
  }
  if (region != FeasibleRegion::Unconstrained && radius < 1.0) {
    throw std::invalid_argument("ball radius tau - 1 must be >= 1 (tau >= 2)");
  }
}

std::pair<double, Eigen::VectorXd> objective_and_gradient(
    const OracleProblem& p, const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() != p.num_cols()) {
    throw std::invalid_argument("iterate dimension does not match design columns");
  }
  const double m = static_cast<double>(p.num_rows());
  const Eigen::VectorXd residual = p.design * v + p.target;
  const double value = residual.squaredNorm() / m + 0.5 * p.lambda * v.squaredNorm();
  Eigen::VectorXd gradient = (2.0 / m) * (p.design.transpose() * residual) + p.lambda * v;
  return {value, std::move(gradient)};
}

Atom lmo_l1(const Eigen::Ref<const Eigen::VectorXd>& gradient, double radius) {
  if (radius <= 0.0) throw std::invalid_argument("lmo radius must be positive");
  Eigen::Index best = 0;
  gradient.cwiseAbs().maxCoeff(&best);
  if (gradient(best) == 0.0) return Atom{0, +1};
  return Atom{best, gradient(best) > 0.0 ? -1 : +1};
}

Eigen::VectorXd atom_vector(const Atom& a, Eigen::Index dimension, double radius) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dimension);
  v(a.index) = a.sign * radius;
  return v;
}

Eigen::VectorXd lmo_l2(const Eigen::Ref<const Eigen::VectorXd>& gradient, double radius) {
  if (radius <= 0.0) throw std::invalid_argument("lmo radius must be positive");
  const double norm = gradient.norm();
  if (norm == 0.0) return Eigen::VectorXd::Zero(gradient.size());
  return (-radius / norm) * gradient;
}

double line_search_quadratic(const OracleProblem& p, const Eigen::Ref<const Eigen::VectorXd>& x,
                             const Eigen::Ref<const Eigen::VectorXd>& d, double gamma_max) {
  if (!x.allFinite() || !d.allFinite() || !std::isfinite(gamma_max) || gamma_max < 0.0) {
    throw NumericError("line search received non-finite inputs");
  }
  const double m = static_cast<double>(p.num_rows());
  const Eigen::VectorXd residual = p.design * x + p.target;
  const Eigen::VectorXd step = p.design * d;
  const double slope =
      (2.0 / m) * step.dot(residual) + p.lambda * x.dot(d);  // <grad f(x), d>
  const double curvature = 2.0 * step.squaredNorm() / m + p.lambda * d.squaredNorm();
  if (curvature > 0.0) {
    return std::clamp(-slope / curvature, 0.0, gamma_max);
  }
  return slope < 0.0 ? gamma_max : 0.0;
}

ActiveSet::ActiveSet(Eigen::Index dimension, double radius, Atom start)
    : dimension_(dimension), radius_(radius) {
  if (start.index < 0 || start.index >= dimension || (start.sign != 1 && start.sign != -1)) {
    throw std::invalid_argument("infeasible start atom");
  }
  atoms_.emplace_back(start, 1.0);
}

double ActiveSet::weight_of(const Atom& a) const {
  for (const auto& [atom, weight] : atoms_) {
    if (atom == a) return weight;
  }
  return 0.0;
}

double ActiveSet::weight_sum() const {
  double sum = 0.0;
  for (const auto& [atom, weight] : atoms_) sum += weight;
  return sum;
}

void ActiveSet::transfer_weight(const Atom& toward, const Atom& away, double gamma) {
  auto find = [this](const Atom& a) {
    return std::find_if(atoms_.begin(), atoms_.end(),
                        [&](const auto& entry) { return entry.first == a; });
  };
  auto away_it = find(away);
  if (away_it == atoms_.end() || away_it->second + 1e-15 < gamma) {
    throw std::logic_error("weight transfer exceeds away-atom weight");
  }
  away_it->second -= gamma;
  auto toward_it = find(toward);
  if (toward_it == atoms_.end()) {
    toward_it = atoms_.insert(std::upper_bound(atoms_.begin(), atoms_.end(), toward,
                                               [](const Atom& a, const auto& entry) {
                                                 return a < entry.first;
                                               }),
                              {toward, 0.0});
  }
  toward_it->second += gamma;
  std::erase_if(atoms_, [](const auto& entry) { return entry.second < kDropThreshold; });
  const double sum = weight_sum();
  if (sum <= 0.0) throw std::logic_error("active set lost all weight");
  for (auto& entry : atoms_) entry.second /= sum;
}

Eigen::VectorXd ActiveSet::reconstruct() const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dimension_);
  for (const auto& [atom, weight] : atoms_) x(atom.index) += weight * atom.sign * radius_;
  return x;
}

OracleSolution pfw_solve(const OracleProblem& p, Eigen::Index start_atom) {
  p.validate();
  if (p.region != FeasibleRegion::L1Ball) {
    throw std::invalid_argument("pfw_solve requires the l1-ball region");
  }
  const Eigen::Index k = p.num_cols();
  ActiveSet active(k, p.radius, Atom{start_atom, +1});
  Eigen::VectorXd x = active.reconstruct();

  OracleSolution solution;
  solution.reason = TerminationReason::IterationCap;
  double objective = 0.0;
  double gap = 0.0;
  int t = 0;
  for (; t < p.max_iterations; ++t) {
    auto [value, gradient] = objective_and_gradient(p, x);
    objective = value;
    const Atom fw_atom = lmo_l1(gradient, p.radius);
    const Eigen::VectorXd s = atom_vector(fw_atom, k, p.radius);
    gap = gradient.dot(x - s);
    if (objective <= p.psi) {
      solution.reason = TerminationReason::VanishingReached;
      break;
    }
    if (gap <= p.epsilon) {
      solution.reason = TerminationReason::GapBelowEpsilon;
      break;
    }
    // Away vertex: active atom maximizing <grad, v>; the sorted active set
    // makes the first strict maximum the lowest atom.
    Atom away_atom{};
    double away_score = -std::numeric_limits<double>::infinity();
    for (const auto& [atom, weight] : active.atoms()) {
      const double score = gradient(atom.index) * atom.sign * p.radius;
      if (score > away_score) {
        away_score = score;
        away_atom = atom;
      }
    }
    const Eigen::VectorXd v = atom_vector(away_atom, k, p.radius);
    const Eigen::VectorXd direction = s - v;
    const double gamma_max = active.weight_of(away_atom);
    const double gamma = line_search_quadratic(p, x, direction, gamma_max);
    active.transfer_weight(fw_atom, away_atom, gamma);
    x = active.reconstruct();
    const double next_objective = objective_and_gradient(p, x).first;
    if (stalled(objective, next_objective)) {
      objective = next_objective;
      solution.reason = TerminationReason::Stalled;
      ++t;
      break;
    }
  }
  // Guard against accumulated rounding so the returned iterate honors the
  // ball contract exactly.
  const double l1 = x.lpNorm<1>();
  if (l1 > p.radius) x *= p.radius / l1;
  auto [value, gradient] = objective_and_gradient(p, x);
  const Eigen::VectorXd s = atom_vector(lmo_l1(gradient, p.radius), k, p.radius);
  solution.coefficients = std::move(x);
  solution.objective = value;
  solution.fw_gap = gradient.dot(solution.coefficients - s);
  solution.iterations = t;
  return solution;
}

OracleSolution fw_solve(const OracleProblem& p) {
  p.validate();
  if (p.region != FeasibleRegion::L2Ball) {
    throw std::invalid_argument("fw_solve requires the l2-ball region");
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(p.num_cols());

  OracleSolution solution;
  solution.reason = TerminationReason::IterationCap;
  int t = 0;
  for (; t < p.max_iterations; ++t) {
    auto [value, gradient] = objective_and_gradient(p, x);
    const Eigen::VectorXd s = lmo_l2(gradient, p.radius);
    const double gap = gradient.dot(x - s);
    if (value <= p.psi) {
      solution.reason = TerminationReason::VanishingReached;
      break;
    }
    if (gap <= p.epsilon) {
      solution.reason = TerminationReason::GapBelowEpsilon;
      break;
    }
    const Eigen::VectorXd direction = s - x;
    const double gamma = line_search_quadratic(p, x, direction, 1.0);
    x += gamma * direction;
    const double next_objective = objective_and_gradient(p, x).first;
    if (stalled(value, next_objective)) {
      solution.reason = TerminationReason::Stalled;
      ++t;
      break;
    }
  }
  auto [value, gradient] = objective_and_gradient(p, x);
  const Eigen::VectorXd s = lmo_l2(gradient, p.radius);
  solution.coefficients = std::move(x);
  solution.objective = value;
  solution.fw_gap = gradient.dot(solution.coefficients - s);
  solution.iterations = t;
  return solution;
}

OracleSolution agd_solve(const OracleProblem& p) {
  p.validate();
  if (p.region != FeasibleRegion::Unconstrained) {
    throw std::invalid_argument("agd_solve requires the unconstrained region");
  }
  const Eigen::Index k = p.num_cols();
  const double L = smoothness_constant(p);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd y = x;
  double momentum = 1.0;
  double objective = objective_and_gradient(p, x).first;

  OracleSolution solution;
  solution.reason = TerminationReason::IterationCap;
  int slow_iterations = 0;
  int t = 0;
  for (; t < p.max_iterations; ++t) {
    if (objective <= p.psi) {
      solution.reason = TerminationReason::VanishingReached;
      break;
    }
    if (L <= 0.0) {  // constant objective; nothing to descend
      solution.reason = TerminationReason::Stalled;
      break;
    }
    const Eigen::VectorXd z = y - objective_and_gradient(p, y).second / L;
    const double z_objective = objective_and_gradient(p, z).first;
    // Monotone variant: fall back to the previous point when the accelerated
    // step overshoots, so the objective never increases.
    Eigen::VectorXd x_next = z_objective <= objective ? z : x;
    const double next_objective = std::min(z_objective, objective);
    const double momentum_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    y = x_next + (momentum / momentum_next) * (z - x_next) +
        ((momentum - 1.0) / momentum_next) * (x_next - x);
    x = std::move(x_next);
    momentum = momentum_next;

    slow_iterations = stalled(objective, next_objective) ? slow_iterations + 1 : 0;
    objective = next_objective;
    if (slow_iterations >= kAgdStallWindow) {
      solution.reason = TerminationReason::Stalled;
      ++t;
      break;
    }
  }
  solution.coefficients = std::move(x);
  solution.objective = objective;
  solution.iterations = t;
  return solution;
}

OracleSolution solve(const OracleProblem& p) {
  switch (p.region) {
    case FeasibleRegion::L1Ball: return pfw_solve(p);
    case FeasibleRegion::L2Ball: return fw_solve(p);
    case FeasibleRegion::Unconstrained: return agd_solve(p);
  }
  throw std::logic_error("unknown feasible region");
}

}  // namespace oavi
