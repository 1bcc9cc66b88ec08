#include "oavi/fitter.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <unordered_set>

#include "oavi/errors.hpp"

namespace oavi {

std::string to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::Pfw: return "pfw";
    case OracleKind::Cg: return "cg";
    case OracleKind::Agd: return "agd";
  }
  return "unknown";
}

OracleKind oracle_kind_from_string(const std::string& name) {
  if (name == "pfw") return OracleKind::Pfw;
  if (name == "cg") return OracleKind::Cg;
  if (name == "agd") return OracleKind::Agd;
  throw ConfigError("unknown oracle kind '" + name + "' (expected pfw, cg, or agd)");
}

void OaviConfig::validate() const {
  if (psi < 0.0) throw ConfigError("psi must be nonnegative");
  const double eps = effective_epsilon();
  if (eps < 0.0 || eps > psi) throw ConfigError("epsilon must lie in [0, psi]");
  if (lambda < 0.0) throw ConfigError("lambda must be nonnegative");
  if (tau < 2.0) throw ConfigError("tau must be at least 2");
  if (max_degree < 1) throw ConfigError("max_degree must be at least 1");
  if (max_oracle_iterations < 1) throw ConfigError("max_oracle_iterations must be positive");
}

std::vector<Term> build_border(const std::vector<Term>& order_ideal, int degree,
                               int num_variables) {
  if (degree < 1) throw std::invalid_argument("border degree must be >= 1");
  std::vector<Term> border;
  if (degree == 1) {
    for (int j = 0; j < num_variables; ++j) border.push_back(Term::unit(num_variables, j));
    return border;
  }
  std::vector<Term> degree_one;
  std::unordered_set<Term, TermHash> previous_degree;
  for (const Term& t : order_ideal) {
    if (t.degree() == 1) degree_one.push_back(t);
    if (t.degree() == degree - 1) previous_degree.insert(t);
  }
  std::unordered_set<Term, TermHash> candidates;
  for (const Term& t : previous_degree) {
    for (const Term& s : degree_one) candidates.insert(multiply(s, t));
  }
  for (const Term& u : candidates) {
    // u survives iff every maximal divisor u / x_j lies in O_{d-1}; the order
    // ideal is divisor-closed, so this covers all lower-degree divisors.
    bool keep = true;
    for (int j = 0; j < num_variables && keep; ++j) {
      if (u.exponent(j) > 0 && previous_degree.count(divide_by_variable(u, j)) == 0) {
        keep = false;
      }
    }
    if (keep) border.push_back(u);
  }
  std::sort(border.begin(), border.end(), deglex_less);
  return border;
}

OracleOutcome oracle_call(const Eigen::Ref<const PointSet>& points,
                          const std::vector<Term>& order_ideal, const Term& t,
                          const OaviConfig& config, EvaluationCache& cache) {
  const auto m = points.rows();
  const auto k = static_cast<Eigen::Index>(order_ideal.size());
  for (const Term& u : order_ideal) {
    if (deglex_compare(u, t) != std::strong_ordering::less) {
      throw std::logic_error("candidate leading term " + to_string(t) +
                             " is not DegLex-larger than the order ideal");
    }
  }

  OracleProblem problem;
  problem.design.resize(m, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    problem.design.col(i) = evaluate_term(order_ideal[static_cast<std::size_t>(i)], points, cache);
  }
  problem.target = evaluate_term(t, points, cache);
  problem.lambda = config.lambda;
  problem.epsilon = config.effective_epsilon();
  problem.psi = config.psi;
  problem.max_iterations = config.max_oracle_iterations;
  switch (config.oracle) {
    case OracleKind::Pfw:
      problem.region = FeasibleRegion::L1Ball;
      problem.radius = config.tau - 1.0;
      break;
    case OracleKind::Cg:
      problem.region = FeasibleRegion::L2Ball;
      problem.radius = config.tau - 1.0;
      break;
    case OracleKind::Agd:
      problem.region = FeasibleRegion::Unconstrained;
      break;
  }

  OracleSolution solution = solve(problem);

  std::vector<Term> support = order_ideal;
  support.push_back(t);
  Eigen::VectorXd coefficients(k + 1);
  coefficients.head(k) = solution.coefficients;
  coefficients(k) = 1.0;

  OracleOutcome outcome{Polynomial(std::move(support), std::move(coefficients)),
                        std::move(solution), 0.0, 0.0};
  const Eigen::VectorXd residual = problem.design * outcome.solution.coefficients + problem.target;
  outcome.mse = residual.squaredNorm() / static_cast<double>(m);
  outcome.regularized_objective =
      outcome.mse + 0.5 * config.lambda * outcome.solution.coefficients.squaredNorm();
  return outcome;
}

GeneratorSet fit(const Eigen::Ref<const PointSet>& points, const OaviConfig& config) {
  config.validate();
  validate_points(points);
  const auto start_time = std::chrono::steady_clock::now();
  const int n = static_cast<int>(points.cols());

  GeneratorSet result;
  EvaluationCache cache(n);
  result.order_ideal.push_back(Term::constant(n));
  evaluate_term(result.order_ideal.front(), points, cache);

  int degree = 1;
  for (; degree <= config.max_degree; ++degree) {
    const std::vector<Term> border = build_border(result.order_ideal, degree, n);
    if (border.empty()) break;
    for (const Term& u : border) evaluate_term(u, points, cache);
    for (const Term& u : border) {
      OracleOutcome outcome = oracle_call(points, result.order_ideal, u, config, cache);
      ++result.stats.oracle_calls;
      if (outcome.solution.reason == TerminationReason::IterationCap) {
        ++result.stats.solver_cap_hits;
      }
      if (outcome.regularized_objective <= config.psi) {
        result.generators.push_back(GeneratorInfo{std::move(outcome.polynomial), outcome.mse,
                                                  outcome.regularized_objective,
                                                  outcome.solution.reason});
      } else {
        result.order_ideal.push_back(u);
      }
    }
    result.stats.max_degree_reached = degree;
  }
  if (degree > config.max_degree) {
    result.stats.degree_cap_hit = !build_border(result.order_ideal, degree, n).empty();
  }
  result.stats.fit_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
  return result;
}

bool check_maximality(const GeneratorSet& result, const Eigen::Ref<const PointSet>& points,
                      const OaviConfig& config) {
  if (config.lambda != 0.0) {
    throw std::invalid_argument("check_maximality applies to lambda = 0 fits");
  }
  const double threshold = config.psi - config.effective_epsilon();
  const auto m = points.rows();
  EvaluationCache cache(static_cast<int>(points.cols()));
  for (const Term& t : result.order_ideal) evaluate_term(t, points, cache);

  for (std::size_t i = 1; i < result.order_ideal.size(); ++i) {
    Eigen::MatrixXd design(m, static_cast<Eigen::Index>(i));
    for (std::size_t j = 0; j < i; ++j) {
      design.col(static_cast<Eigen::Index>(j)) = cache.at(result.order_ideal[j]);
    }
    const Eigen::VectorXd target = cache.at(result.order_ideal[i]);
    const Eigen::VectorXd best = design.completeOrthogonalDecomposition().solve(-target);
    const double optimal_mse =
        (design * best + target).squaredNorm() / static_cast<double>(m);
    if (optimal_mse <= threshold) return false;
  }
  return true;
}

}  // namespace oavi
