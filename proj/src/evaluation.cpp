#include "oavi/evaluation.hpp"

#include <algorithm>
#include <stdexcept>

#include "oavi/errors.hpp"

namespace oavi {

void validate_points(const Eigen::Ref<const PointSet>& points) {
  if (points.rows() < 1 || points.cols() < 1) {
    throw DataError("point set must contain at least one point and one variable");
  }
  if (!points.allFinite()) {
    throw NumericError("point set contains non-finite entries");
  }
}

const Eigen::VectorXd& EvaluationCache::at(const Term& t) const {
  auto it = vectors_.find(t);
  if (it == vectors_.end()) {
    throw std::logic_error("term " + to_string(t) + " not in evaluation cache");
  }
  return it->second;
}

void EvaluationCache::insert(const Term& t, Eigen::VectorXd values) {
  if (t.num_variables() != num_variables_) {
    throw std::invalid_argument("term arity does not match cache");
  }
  vectors_.emplace(t, std::move(values));
}

const Eigen::VectorXd& evaluate_term(const Term& t, const Eigen::Ref<const PointSet>& points,
                                     EvaluationCache& cache) {
  if (cache.contains(t)) return cache.at(t);
  if (t.num_variables() != points.cols()) {
    throw std::invalid_argument("term arity does not match point dimension");
  }
  const auto m = points.rows();
  if (t.degree() == 0) {
    cache.insert(t, Eigen::VectorXd::Ones(m));
  } else if (t.degree() == 1) {
    cache.insert(t, points.col(t.lowest_variable()));
  } else {
    const int var = t.lowest_variable();
    const Term parent = divide_by_variable(t, var);
    if (!cache.contains(parent)) {
      throw std::logic_error("parent " + to_string(parent) + " of " + to_string(t) +
                             " not cached; evaluate terms in ascending degree order");
    }
    cache.insert(t, cache.at(parent).cwiseProduct(points.col(var)));
  }
  return cache.at(t);
}

Polynomial::Polynomial(std::vector<Term> support, Eigen::VectorXd coefficients)
    : support_(std::move(support)), coefficients_(std::move(coefficients)) {
  if (support_.empty()) throw std::invalid_argument("polynomial needs at least one term");
  if (static_cast<Eigen::Index>(support_.size()) != coefficients_.size()) {
    throw std::invalid_argument("support size and coefficient count differ");
  }
  for (std::size_t i = 1; i < support_.size(); ++i) {
    if (deglex_compare(support_[i - 1], support_[i]) != std::strong_ordering::less) {
      throw std::invalid_argument("polynomial support must be strictly ascending in DegLex");
    }
  }
  if (coefficients_(coefficients_.size() - 1) != 1.0) {
    throw std::invalid_argument("leading coefficient must be 1");
  }
}

Polynomial Polynomial::monomial(const Term& t) {
  Eigen::VectorXd one(1);
  one << 1.0;
  return Polynomial({t}, std::move(one));
}

Eigen::VectorXd evaluate_polynomial(const Polynomial& f, const Eigen::Ref<const PointSet>& points,
                                    EvaluationCache& cache) {
  Eigen::VectorXd result = Eigen::VectorXd::Zero(points.rows());
  const auto& coeffs = f.coefficients();
  for (std::size_t i = 0; i < f.support().size(); ++i) {
    const double c = coeffs(static_cast<Eigen::Index>(i));
    if (c == 0.0) continue;
    result += c * evaluate_term(f.support()[i], points, cache);
  }
  return result;
}

Eigen::VectorXd evaluate_polynomial(const Polynomial& f,
                                    const Eigen::Ref<const PointSet>& points) {
  EvaluationCache cache(static_cast<int>(points.cols()));
  // Close the support under the parent factorization so evaluate_term always
  // finds its parent, then evaluate ancestors in ascending order.
  std::vector<Term> closure;
  for (const Term& t : f.support()) {
    Term u = t;
    closure.push_back(u);
    while (u.degree() > 1) {
      u = divide_by_variable(u, u.lowest_variable());
      closure.push_back(u);
    }
  }
  std::sort(closure.begin(), closure.end(), deglex_less);
  closure.erase(std::unique(closure.begin(), closure.end()), closure.end());
  for (const Term& t : closure) evaluate_term(t, points, cache);
  return evaluate_polynomial(f, points, cache);
}

double mse(const Polynomial& f, const Eigen::Ref<const PointSet>& points,
           EvaluationCache& cache) {
  return evaluate_polynomial(f, points, cache).squaredNorm() / static_cast<double>(points.rows());
}

double mse(const Polynomial& f, const Eigen::Ref<const PointSet>& points) {
  return evaluate_polynomial(f, points).squaredNorm() / static_cast<double>(points.rows());
}

}  // namespace oavi
