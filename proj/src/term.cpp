#include "oavi/term.hpp"

#include <numeric>
#include <stdexcept>

namespace oavi {

namespace {

void require_same_arity(const Term& a, const Term& b) {
  if (a.num_variables() != b.num_variables()) {
    throw std::invalid_argument("terms defined over different variable counts: " +
                                std::to_string(a.num_variables()) + " vs " +
                                std::to_string(b.num_variables()));
  }
}

}  // namespace

Term::Term(std::vector<int> exponents) : exponents_(std::move(exponents)) {
  for (int e : exponents_) {
    if (e < 0) throw std::invalid_argument("negative exponent in term");
  }
  degree_ = std::accumulate(exponents_.begin(), exponents_.end(), 0);
}

Term Term::constant(int num_variables) {
  return Term(std::vector<int>(static_cast<std::size_t>(num_variables), 0));
}

Term Term::unit(int num_variables, int variable) {
  std::vector<int> e(static_cast<std::size_t>(num_variables), 0);
  e.at(static_cast<std::size_t>(variable)) = 1;
  return Term(std::move(e));
}

int Term::lowest_variable() const {
  for (int i = 0; i < num_variables(); ++i) {
    if (exponents_[static_cast<std::size_t>(i)] > 0) return i;
  }
  return -1;
}

std::strong_ordering deglex_compare(const Term& a, const Term& b) {
  require_same_arity(a, b);
  if (a.degree() != b.degree()) return a.degree() <=> b.degree();
  for (int i = 0; i < a.num_variables(); ++i) {
    if (a.exponent(i) != b.exponent(i)) {
      // Smaller exponent on the earliest differing variable wins the tie.
      return b.exponent(i) <=> a.exponent(i);
    }
  }
  return std::strong_ordering::equal;
}

Term multiply(const Term& a, const Term& b) {
  require_same_arity(a, b);
  std::vector<int> e(a.exponents());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += b.exponents()[i];
  return Term(std::move(e));
}

bool divides(const Term& a, const Term& b) {
  require_same_arity(a, b);
  for (int i = 0; i < a.num_variables(); ++i) {
    if (a.exponent(i) > b.exponent(i)) return false;
  }
  return true;
}

Term divide_by_variable(const Term& b, int variable) {
  if (variable < 0 || variable >= b.num_variables() || b.exponent(variable) == 0) {
    throw std::invalid_argument("term is not divisible by variable x" +
                                std::to_string(variable + 1));
  }
  std::vector<int> e(b.exponents());
  e[static_cast<std::size_t>(variable)] -= 1;
  return Term(std::move(e));
}

std::string to_string(const Term& t) {
  if (t.is_constant()) return "1";
  std::string out;
  for (int i = 0; i < t.num_variables(); ++i) {
    const int e = t.exponent(i);
    if (e == 0) continue;
    if (!out.empty()) out += '*';
    out += 'x';
    out += std::to_string(i + 1);
    if (e > 1) {
      out += '^';
      out += std::to_string(e);
    }
  }
  return out;
}

}  // namespace oavi
