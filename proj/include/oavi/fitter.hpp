#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "oavi/evaluation.hpp"
#include "oavi/solver.hpp"
#include "oavi/term.hpp"

namespace oavi {

enum class OracleKind {
  Pfw,  // Pairwise Frank-Wolfe over the l1-ball of radius tau - 1
  Cg,   // vanilla Conditional Gradients over the l2-ball of radius tau - 1
  Agd,  // accelerated gradient descent, unconstrained
};

std::string to_string(OracleKind kind);
OracleKind oracle_kind_from_string(const std::string& name);

struct OaviConfig {
  double psi = 0.1;                     // vanishing tolerance
  std::optional<double> epsilon;        // oracle accuracy; defaults to psi / 2
  double lambda = 0.0;                  // l2 regularization of tail coefficients
  double tau = 50.0;                    // coefficient-norm bound, >= 2
  int max_degree = 10;
  OracleKind oracle = OracleKind::Pfw;
  int max_oracle_iterations = 10000;

  double effective_epsilon() const { return epsilon.value_or(psi / 2.0); }

  /// Throws ConfigError unless psi >= epsilon >= 0, tau >= 2, max_degree >= 1.
  void validate() const;
};

struct GeneratorInfo {
  Polynomial polynomial;
  double mse_at_fit = 0.0;               // (1/m) ||g(X)||^2 on the training points
  double regularized_objective = 0.0;    // mse + (lambda/2) ||tail coefficients||^2
  TerminationReason solver_reason = TerminationReason::IterationCap;
};

struct FitStats {
  int max_degree_reached = 0;
  bool degree_cap_hit = false;        // the cap stopped a fit whose border was nonempty
  int oracle_calls = 0;
  int solver_cap_hits = 0;            // oracle returned best-effort at the iteration cap
  double fit_seconds = 0.0;
};

/// Output of a fit: generators G and the order ideal O (ascending in DegLex,
/// starting at the constant term 1).
struct GeneratorSet {
  std::vector<GeneratorInfo> generators;
  std::vector<Term> order_ideal;
  FitStats stats;

  int num_generators() const { return static_cast<int>(generators.size()); }
  int order_ideal_size() const { return static_cast<int>(order_ideal.size()); }
};

/// Candidate leading terms of degree d: degree-1 terms for d = 1, otherwise
/// the products O_1 * O_{d-1} whose degree-(d-1) divisors all lie in the order
/// ideal (equivalently, products not divisible by any generator leading
/// term). Returned ascending in DegLex; may be empty.
std::vector<Term> build_border(const std::vector<Term>& order_ideal, int degree,
                               int num_variables);

struct OracleOutcome {
  Polynomial polynomial;
  OracleSolution solution;
  double mse = 0.0;
  double regularized_objective = 0.0;
};

/// One ORACLE call: solve the least-squares instance with design O(X) and
/// target t(X) under the configured region, and assemble the candidate
/// generator with leading term t and tail support O.
OracleOutcome oracle_call(const Eigen::Ref<const PointSet>& points,
                          const std::vector<Term>& order_ideal, const Term& t,
                          const OaviConfig& config, EvaluationCache& cache);

/// Degree-by-degree construction of generators of the psi-approximately
/// vanishing ideal of the points. Within a degree pass the order ideal grows,
/// and later oracle calls in the same pass see the grown set.
GeneratorSet fit(const Eigen::Ref<const PointSet>& points, const OaviConfig& config);

/// Diagnostic for lambda = 0 fits: for every order-ideal term beyond the
/// constant, the exact least-squares residual over the preceding terms must
/// exceed psi - epsilon, i.e. no approximately vanishing polynomial with
/// terms only in O was missed. Rank-deficient systems go through the
/// minimum-norm route.
bool check_maximality(const GeneratorSet& result, const Eigen::Ref<const PointSet>& points,
                      const OaviConfig& config);

}  // namespace oavi
