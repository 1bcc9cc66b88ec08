#pragma once

#include <Eigen/Dense>
#include <unordered_map>
#include <vector>

#include "oavi/term.hpp"

namespace oavi {

/// A point set is a dense m x n matrix, one point per row. Preprocessed data
/// lives in [0, 1]^n; the algebra only needs entries in [-1, 1]^n.
using PointSet = Eigen::MatrixXd;

/// Throws NumericError on non-finite entries, DataError on an empty set.
void validate_points(const Eigen::Ref<const PointSet>& points);

/// Caches evaluation vectors t(X) keyed by term. Non-constant terms record the
/// factorization (parent, degree-1 variable) whose element-wise product
/// produced them, so each new term costs O(m). Single writer during a fit.
class EvaluationCache {
 public:
  explicit EvaluationCache(int num_variables) : num_variables_(num_variables) {}

  int num_variables() const { return num_variables_; }

  bool contains(const Term& t) const { return vectors_.count(t) > 0; }

  const Eigen::VectorXd& at(const Term& t) const;

  void insert(const Term& t, Eigen::VectorXd values);

  std::size_t size() const { return vectors_.size(); }

 private:
  int num_variables_;
  std::unordered_map<Term, Eigen::VectorXd, TermHash> vectors_;
};

/// Evaluates t over the points. Degree 0 yields the all-ones vector, degree 1
/// the matching data column; higher degrees multiply the cached parent
/// (t divided by its lowest positive-exponent variable) with that variable's
/// column. The parent must already be cached: callers evaluate borders degree
/// by degree, and a missing parent throws std::logic_error.
const Eigen::VectorXd& evaluate_term(const Term& t, const Eigen::Ref<const PointSet>& points,
                                     EvaluationCache& cache);

/// A polynomial with support strictly ascending in DegLex and the leading
/// coefficient fixed to 1. Zero coefficients on non-leading terms are kept:
/// the support records which terms the oracle saw, not which it used.
class Polynomial {
 public:
  Polynomial(std::vector<Term> support, Eigen::VectorXd coefficients);

  /// The single-term polynomial t (coefficient 1).
  static Polynomial monomial(const Term& t);

  const std::vector<Term>& support() const { return support_; }
  const Eigen::VectorXd& coefficients() const { return coefficients_; }

  const Term& leading_term() const { return support_.back(); }
  int degree() const { return leading_term().degree(); }
  int num_variables() const { return support_.back().num_variables(); }

  /// Coefficients of the non-leading terms (everything but the trailing 1).
  Eigen::VectorXd tail_coefficients() const {
    return coefficients_.head(coefficients_.size() - 1);
  }

 private:
  std::vector<Term> support_;
  Eigen::VectorXd coefficients_;
};

/// f(X) using cached term vectors; evaluates any missing support terms,
/// which requires their parents to be cached already.
Eigen::VectorXd evaluate_polynomial(const Polynomial& f, const Eigen::Ref<const PointSet>& points,
                                    EvaluationCache& cache);

/// Convenience overload with a private cache: walks each support term's
/// divisor chain down to the constant so parents are always available.
Eigen::VectorXd evaluate_polynomial(const Polynomial& f, const Eigen::Ref<const PointSet>& points);

/// Mean squared error (1/m) * ||f(X)||_2^2.
double mse(const Polynomial& f, const Eigen::Ref<const PointSet>& points);
double mse(const Polynomial& f, const Eigen::Ref<const PointSet>& points, EvaluationCache& cache);

}  // namespace oavi
