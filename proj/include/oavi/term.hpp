#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace oavi {

/// A monomial over n variables, stored as an exponent tuple with a cached
/// total degree. Immutable value type; hashable by its exponent tuple.
class Term {
 public:
  Term() = default;

  explicit Term(std::vector<int> exponents);

  /// The constant monomial 1 over n variables.
  static Term constant(int num_variables);

  /// The degree-1 monomial x_{variable} (0-based index).
  static Term unit(int num_variables, int variable);

  int degree() const { return degree_; }
  int num_variables() const { return static_cast<int>(exponents_.size()); }
  int exponent(int variable) const { return exponents_[static_cast<std::size_t>(variable)]; }
  const std::vector<int>& exponents() const { return exponents_; }

  bool is_constant() const { return degree_ == 0; }

  /// Index of the lowest variable with a positive exponent, or -1 for the
  /// constant term. Fixes the parent factorization used by evaluation caches.
  int lowest_variable() const;

  bool operator==(const Term& other) const { return exponents_ == other.exponents_; }

 private:
  std::vector<int> exponents_;
  int degree_ = 0;
};

/// Degree-lexicographic comparison. Total degree decides first; on ties the
/// first variable (lowest index) whose exponents differ decides, and the term
/// with the *smaller* exponent there is the larger term. This reproduces the
/// chain x < y < x^2 < xy < y^2 with variables read in data-column order.
std::strong_ordering deglex_compare(const Term& a, const Term& b);

inline bool deglex_less(const Term& a, const Term& b) {
  return deglex_compare(a, b) == std::strong_ordering::less;
}

/// Exponent-wise sum; degrees add.
Term multiply(const Term& a, const Term& b);

/// True iff a divides b, i.e. a's exponents are <= b's exponent-wise.
bool divides(const Term& a, const Term& b);

/// Quotient b / x_j for a variable with positive exponent in b.
Term divide_by_variable(const Term& b, int variable);

/// Renders e.g. "x1^2*x3"; the constant term renders as "1".
std::string to_string(const Term& t);

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept {
    // FNV-1a over the exponent tuple.
    std::uint64_t h = 1469598103934665603ull;
    for (int e : t.exponents()) {
      h ^= static_cast<std::uint64_t>(e);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace oavi
