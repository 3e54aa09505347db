#pragma once

#include "pfcalc/exactring.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace pfcalc {

/// Hard capacity of a Monomial. Callers enforce the (smaller, configurable)
/// size guard on top of this.
inline constexpr std::size_t kMaxVars = 48;

class SizeGuardExceeded : public Error {
 public:
  using Error::Error;
};

/// Ordered variable names with positive weights for the standard grading.
class VarSet {
 public:
  VarSet() = default;
  explicit VarSet(std::vector<std::string> names, std::vector<unsigned> weights = {});

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  unsigned weight(std::size_t i) const { return weights_[i]; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<unsigned>& weights() const { return weights_; }
  /// Index of `name`, or -1.
  long index_of(const std::string& name) const;

  /// Concatenation; names must stay distinct.
  VarSet operator+(const VarSet& other) const;
  /// Subset of variables at the given positions, in that order.
  VarSet select(const std::vector<std::size_t>& positions) const;

  friend bool operator==(const VarSet&, const VarSet&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<unsigned> weights_;
};

/// Dense exponent vector.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t nvars);
  Monomial(std::initializer_list<unsigned> exps);
  explicit Monomial(const std::vector<unsigned>& exps);

  std::size_t size() const { return n_; }
  unsigned operator[](std::size_t i) const { return e_[i]; }
  void set(std::size_t i, unsigned e);
  unsigned total_degree() const { return deg_; }
  unsigned weighted_degree(const std::vector<unsigned>& weights) const;
  std::uint64_t support_mask() const;
  bool is_one() const { return deg_ == 0; }

  bool divides(const Monomial& other) const;
  friend Monomial operator*(const Monomial& a, const Monomial& b);
  /// a / b; requires b | a.
  friend Monomial operator/(const Monomial& a, const Monomial& b);
  static Monomial lcm(const Monomial& a, const Monomial& b);
  static bool coprime(const Monomial& a, const Monomial& b);

  std::vector<unsigned> exponents() const;

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.n_ == b.n_ && a.deg_ == b.deg_ && a.e_ == b.e_;
  }
  /// Plain lexicographic comparison of exponent vectors (storage order).
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    return a.e_ <=> b.e_;
  }

 private:
  std::array<std::uint16_t, kMaxVars> e_{};
  std::uint8_t n_ = 0;
  std::uint32_t deg_ = 0;
};

struct MonomialOrder {
  enum class Kind { Lex, Grevlex, Elimination };
  Kind kind = Kind::Grevlex;
  /// Number of leading variables forming the eliminated block.
  std::size_t block = 0;

  static MonomialOrder lex() { return {Kind::Lex, 0}; }
  static MonomialOrder grevlex() { return {Kind::Grevlex, 0}; }
  static MonomialOrder elimination(std::size_t block) { return {Kind::Elimination, block}; }
  std::string to_string() const;
  friend bool operator==(const MonomialOrder&, const MonomialOrder&) = default;
};

/// Compares monomials under an order, using the VarSet weights for the
/// degree parts of grevlex and elimination orders.
class MonomialComparator {
 public:
  MonomialComparator(const VarSet& vars, MonomialOrder order);
  /// Negative, zero or positive as a <, =, > b.
  int compare(const Monomial& a, const Monomial& b) const;
  bool greater(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }
  const MonomialOrder& order() const { return order_; }
  const std::vector<unsigned>& weights() const { return weights_; }

 private:
  int grevlex_range(const Monomial& a, const Monomial& b, std::size_t lo, std::size_t hi) const;
  std::vector<unsigned> weights_;
  MonomialOrder order_;
};

/// Sparse multivariate polynomial over a BaseRing.
class MultiPoly {
 public:
  using TermMap = std::map<Monomial, RingElem>;

  MultiPoly();
  MultiPoly(BaseRing ring, VarSet vars);
  static MultiPoly constant(BaseRing ring, VarSet vars, const RingElem& c);
  static MultiPoly variable(BaseRing ring, VarSet vars, std::size_t index);
  static MultiPoly variable(BaseRing ring, VarSet vars, const std::string& name);
  static MultiPoly term(BaseRing ring, VarSet vars, const RingElem& c, const Monomial& m);

  const BaseRing& ring() const { return ring_; }
  const VarSet& vars() const { return *vars_; }
  std::size_t nvars() const { return vars_ ? vars_->size() : 0; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  RingElem coefficient(const Monomial& m) const;
  bool is_constant() const;

  /// Adds c*m in place.
  void add_term(const Monomial& m, const RingElem& c);

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& b);
  MultiPoly& operator-=(const MultiPoly& b);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  MultiPoly scaled(const RingElem& c) const;
  MultiPoly times_monomial(const Monomial& m) const;
  MultiPoly pow(unsigned e) const;

  friend bool operator==(const MultiPoly& a, const MultiPoly& b);
  friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

  /// -1 for the zero polynomial.
  long total_degree() const;
  long weighted_degree() const;
  bool is_weighted_homogeneous() const;
  /// Largest exponent of variable i.
  unsigned degree_in(std::size_t i) const;

  /// Leading term data under an order; throws on zero.
  Monomial leading_monomial(const MonomialComparator& cmp) const;
  RingElem leading_coefficient(const MonomialComparator& cmp) const;
  /// Terms sorted decreasing under the comparator.
  std::vector<std::pair<Monomial, RingElem>> sorted_terms(const MonomialComparator& cmp) const;

  /// Substitutes images[i] for variable i; images share a target VarSet.
  MultiPoly substitute(const std::vector<MultiPoly>& images) const;
  /// Evaluates at a point of the base ring.
  RingElem evaluate(const std::vector<RingElem>& point) const;
  /// Same terms viewed over another VarSet; `positions[i]` is where old
  /// variable i lands.
  MultiPoly embed(const VarSet& target, const std::vector<std::size_t>& positions) const;
  /// Maps coefficients through `f` into `target`.
  MultiPoly map_coefficients(const BaseRing& target, const std::function<RingElem(const RingElem&)>& f) const;
  /// Coefficient of t^k of the given variable as a polynomial (same VarSet).
  MultiPoly coefficient_of_power(std::size_t var, unsigned k) const;

  /// Canonical text, e.g. "3*x^2*y - 1/2*z".
  std::string to_string() const;

 private:
  void check_compatible(const MultiPoly& b) const;

  BaseRing ring_;
  std::shared_ptr<const VarSet> vars_;
  TermMap terms_;
};

/// Parses the text syntax over `ring` with variables `vars`. For quotient
/// rings the name "t" denotes the ring generator unless it is a variable.
MultiPoly parse_poly(const std::string& text, const BaseRing& ring, const VarSet& vars);

/// All monomials of total degree d in n variables, lex-decreasing
/// (x1^d first).
std::vector<Monomial> monomials_of_degree(std::size_t n, unsigned d);

/// Monomial text such as "x^2*y", "1" for the empty monomial.
std::string monomial_to_string(const Monomial& m, const VarSet& vars);

}  // namespace pfcalc
