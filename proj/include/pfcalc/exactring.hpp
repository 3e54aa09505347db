#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace pfcalc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RingMismatch : public Error {
 public:
  using Error::Error;
};

class NotAUnit : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

bool is_prime(std::uint64_t n);
bool is_prime(const mpz_class& n);

/// Coefficient rings supported by the library: ZZ, QQ, F_p and k[t]/(f) for
/// k in {QQ, F_p}. A BaseRing is a cheap handle to an immutable descriptor.
class BaseRing {
 public:
  enum class Kind { Integers, Rationals, PrimeField, Quotient };

  /// Defaults to ZZ.
  BaseRing();

  static BaseRing integers();
  static BaseRing rationals();
  static BaseRing prime_field(std::uint64_t p);
  /// k[t]/(f). `modulus` lists coefficients from t^0 upwards in the
  /// coefficient field `base`; the leading coefficient must be a unit and
  /// is normalized to 1.
  static BaseRing quotient(const BaseRing& base, const std::vector<mpq_class>& modulus);
  /// Accepts "ZZ", "QQ", "Fp(7)", "QQ[t]/(t^2)", "Fp(2)[t]/(t^2+t+1)".
  static BaseRing parse(const std::string& tag);

  Kind kind() const;
  /// Prime for F_p and F_p[t]/(f); 0 otherwise.
  std::uint64_t prime() const;
  std::uint64_t characteristic() const;
  bool is_field() const;
  bool is_domain() const;
  /// For quotient rings, the coefficient field k; otherwise *this.
  BaseRing coefficient_field() const;
  /// Degree of the modulus for quotient rings, 1 otherwise. This is the
  /// dimension of the ring over coefficient_field() when that is a field.
  std::size_t extension_degree() const;
  /// Monic modulus coefficients (t^0 first) for quotient rings.
  const std::vector<mpq_class>& modulus() const;
  const std::string& tag() const;

  friend bool operator==(const BaseRing& a, const BaseRing& b);
  friend bool operator!=(const BaseRing& a, const BaseRing& b) { return !(a == b); }

 private:
  struct Data;
  explicit BaseRing(std::shared_ptr<const Data> d);
  std::shared_ptr<const Data> d_;
  friend class RingElem;
};

/// An element of a BaseRing in canonical form. Quotient-ring elements hold a
/// residue polynomial of degree < deg f; F_p residues lie in [0, p).
class RingElem {
 public:
  using Residues = std::vector<std::uint64_t>;
  using Rationals = std::vector<mpq_class>;
  using Payload = std::variant<mpz_class, mpq_class, std::uint64_t, Rationals, Residues>;

  /// Integer zero.
  RingElem();
  RingElem(const BaseRing& ring, long value);
  RingElem(const BaseRing& ring, const mpz_class& value);
  /// Image of a rational number; throws NotAUnit if the denominator is not
  /// invertible in the ring.
  RingElem(const BaseRing& ring, const mpq_class& value);

  static RingElem zero(const BaseRing& ring) { return RingElem(ring, 0L); }
  static RingElem one(const BaseRing& ring) { return RingElem(ring, 1L); }
  /// The class of t in k[t]/(f).
  static RingElem generator(const BaseRing& ring);
  /// Quotient-ring element from coordinates in the basis 1, t, t^2, ...
  static RingElem from_coordinates(const BaseRing& ring, const std::vector<mpq_class>& coords);

  const BaseRing& ring() const { return ring_; }
  const Payload& payload() const { return v_; }

  bool is_zero() const;
  bool is_one() const;
  bool is_unit() const;

  RingElem operator-() const;
  friend RingElem operator+(const RingElem& a, const RingElem& b);
  friend RingElem operator-(const RingElem& a, const RingElem& b);
  friend RingElem operator*(const RingElem& a, const RingElem& b);
  RingElem& operator+=(const RingElem& b);
  RingElem& operator-=(const RingElem& b);
  RingElem& operator*=(const RingElem& b);
  RingElem pow(unsigned long e) const;
  RingElem inverse() const;

  friend bool operator==(const RingElem& a, const RingElem& b);
  friend bool operator!=(const RingElem& a, const RingElem& b) { return !(a == b); }

  /// Coordinates over coefficient_field() (a single entry unless quotient).
  std::vector<mpq_class> coordinates() const;
  /// Integer value; only for ZZ elements.
  const mpz_class& as_integer() const;
  /// Rational value; only for QQ elements.
  const mpq_class& as_rational() const;
  /// Residue value; only for F_p elements.
  std::uint64_t as_residue() const;

  /// Coefficient syntax: "5", "-1/2", "t", "(1+t)".
  std::string to_string() const;
  /// True when to_string() needs parentheses inside a product.
  bool needs_parens() const;

 private:
  RingElem(BaseRing ring, Payload v) : ring_(std::move(ring)), v_(std::move(v)) {}
  void check_same(const RingElem& b) const;

  BaseRing ring_;
  Payload v_;
};

/// The map ZZ -> K_p: QQ for p = 0 and F_p for p prime.
class FractionFieldReduction {
 public:
  FractionFieldReduction(const BaseRing& source, std::uint64_t p);
  const BaseRing& target() const { return target_; }
  RingElem operator()(const RingElem& z) const;

 private:
  BaseRing target_;
};

BaseRing fraction_field_reduction(const BaseRing& r, std::uint64_t p);

// Field policies used by the linear-algebra and Groebner templates.

struct RationalField {
  using Scalar = mpq_class;
  Scalar zero() const { return 0; }
  Scalar one() const { return 1; }
  Scalar from_int(long v) const { return v; }
  Scalar from_rational(const mpq_class& q) const { return q; }
  bool is_zero(const Scalar& a) const { return sgn(a) == 0; }
  bool is_one(const Scalar& a) const { return a == 1; }
  Scalar add(const Scalar& a, const Scalar& b) const { return a + b; }
  Scalar sub(const Scalar& a, const Scalar& b) const { return a - b; }
  Scalar mul(const Scalar& a, const Scalar& b) const { return a * b; }
  Scalar neg(const Scalar& a) const { return -a; }
  Scalar inv(const Scalar& a) const { return 1 / a; }
  std::uint64_t characteristic() const { return 0; }
  mpq_class to_rational(const Scalar& a) const { return a; }
  BaseRing ring() const { return BaseRing::rationals(); }
  std::string to_string(const Scalar& a) const { return a.get_str(); }
};

class PrimeField {
 public:
  using Scalar = std::uint64_t;
  explicit PrimeField(std::uint64_t p);
  std::uint64_t prime() const { return p_; }
  Scalar zero() const { return 0; }
  Scalar one() const { return 1 % p_; }
  Scalar from_int(long v) const;
  Scalar from_integer(const mpz_class& v) const;
  Scalar from_rational(const mpq_class& q) const;
  bool is_zero(Scalar a) const { return a == 0; }
  bool is_one(Scalar a) const { return a == 1; }
  Scalar add(Scalar a, Scalar b) const {
    Scalar s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Scalar sub(Scalar a, Scalar b) const { return a >= b ? a - b : a + p_ - b; }
  Scalar mul(Scalar a, Scalar b) const { return (a * b) % p_; }
  Scalar neg(Scalar a) const { return a == 0 ? 0 : p_ - a; }
  Scalar inv(Scalar a) const;
  Scalar pow(Scalar a, std::uint64_t e) const;
  std::uint64_t characteristic() const { return p_; }
  mpq_class to_rational(Scalar a) const { return mpz_class(static_cast<unsigned long>(a)); }
  BaseRing ring() const { return BaseRing::prime_field(p_); }
  std::string to_string(Scalar a) const { return std::to_string(a); }

 private:
  std::uint64_t p_;
};

/// Largest prime accepted for F_p, so that products of residues fit in 64 bits.
inline constexpr std::uint64_t kMaxPrime = 4294967291ULL;

/// Calls `fn(RationalField{})` or `fn(PrimeField{p})` for field rings.
template <class Fn>
decltype(auto) with_field(const BaseRing& ring, Fn&& fn) {
  switch (ring.kind()) {
    case BaseRing::Kind::Rationals:
      return fn(RationalField{});
    case BaseRing::Kind::PrimeField:
      return fn(PrimeField(ring.prime()));
    default:
      throw Error("coefficient ring " + ring.tag() + " is not QQ or F_p");
  }
}

template <class F>
typename F::Scalar to_scalar(const F& field, const RingElem& e) {
  if constexpr (std::is_same_v<F, RationalField>) {
    if (e.ring().kind() == BaseRing::Kind::Rationals) return e.as_rational();
    if (e.ring().kind() == BaseRing::Kind::Integers) return mpq_class(e.as_integer());
  } else {
    if (e.ring().kind() == BaseRing::Kind::PrimeField) return e.as_residue() % field.prime();
    if (e.ring().kind() == BaseRing::Kind::Integers) return field.from_integer(e.as_integer());
    if (e.ring().kind() == BaseRing::Kind::Rationals) return field.from_rational(e.as_rational());
  }
  throw RingMismatch("cannot map element of " + e.ring().tag() + " into " + field.ring().tag());
}

template <class F>
RingElem from_scalar(const F& field, const typename F::Scalar& s) {
  if constexpr (std::is_same_v<F, RationalField>) {
    return RingElem(BaseRing::rationals(), s);
  } else {
    return RingElem(field.ring(), mpz_class(static_cast<unsigned long>(s)));
  }
}

}  // namespace pfcalc
