#include "pfcalc/exactring.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace pfcalc {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    if (n % q == 0) return n == q;
  }
  return mpz_probab_prime_p(mpz_class(static_cast<unsigned long>(n)).get_mpz_t(), 30) > 0;
}

bool is_prime(const mpz_class& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

// ---------------------------------------------------------------------------
// PrimeField

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
  if (p < 2 || p > kMaxPrime || !is_prime(p)) {
    throw Error("F_p requires a prime p <= " + std::to_string(kMaxPrime) + ", got " +
                std::to_string(p));
  }
}

PrimeField::Scalar PrimeField::from_int(long v) const {
  long r = v % static_cast<long>(p_);
  return static_cast<Scalar>(r < 0 ? r + static_cast<long>(p_) : r);
}

PrimeField::Scalar PrimeField::from_integer(const mpz_class& v) const {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), p_);
  return r.get_ui();
}

PrimeField::Scalar PrimeField::from_rational(const mpq_class& q) const {
  Scalar den = from_integer(q.get_den());
  if (den == 0) {
    throw NotAUnit("denominator of " + q.get_str() + " vanishes mod " + std::to_string(p_));
  }
  return mul(from_integer(q.get_num()), inv(den));
}

PrimeField::Scalar PrimeField::pow(Scalar a, std::uint64_t e) const {
  Scalar r = one();
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

PrimeField::Scalar PrimeField::inv(Scalar a) const {
  if (a % p_ == 0) throw NotAUnit("0 is not invertible in F_" + std::to_string(p_));
  return pow(a, p_ - 2);
}

// ---------------------------------------------------------------------------
// Univariate helpers over a coefficient field, used for quotient rings.

namespace {

template <class F>
using UPoly = std::vector<typename F::Scalar>;

template <class F>
void trim(const F& k, UPoly<F>& a) {
  while (!a.empty() && k.is_zero(a.back())) a.pop_back();
}

template <class F>
UPoly<F> upoly_mul(const F& k, const UPoly<F>& a, const UPoly<F>& b) {
  if (a.empty() || b.empty()) return {};
  UPoly<F> r(a.size() + b.size() - 1, k.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (k.is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = k.add(r[i + j], k.mul(a[i], b[j]));
  }
  trim(k, r);
  return r;
}

template <class F>
UPoly<F> upoly_sub(const F& k, UPoly<F> a, const UPoly<F>& b) {
  if (a.size() < b.size()) a.resize(b.size(), k.zero());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = k.sub(a[i], b[i]);
  trim(k, a);
  return a;
}

/// Division with remainder; returns {quotient, remainder}.
template <class F>
std::pair<UPoly<F>, UPoly<F>> upoly_divmod(const F& k, UPoly<F> a, const UPoly<F>& b) {
  UPoly<F> q;
  if (a.size() < b.size()) return {q, a};
  q.assign(a.size() - b.size() + 1, k.zero());
  auto lead_inv = k.inv(b.back());
  for (std::size_t i = a.size(); i-- >= b.size();) {
    auto c = k.mul(a[i], lead_inv);
    if (k.is_zero(c)) continue;
    std::size_t shift = i - (b.size() - 1);
    q[shift] = c;
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] = k.sub(a[shift + j], k.mul(c, b[j]));
  }
  trim(k, a);
  trim(k, q);
  return {q, a};
}

/// Returns {g, s} with s*a = g mod b, g monic gcd(a, b).
template <class F>
std::pair<UPoly<F>, UPoly<F>> upoly_gcdex(const F& k, UPoly<F> a, UPoly<F> b) {
  UPoly<F> s0{k.one()}, s1;
  trim(k, a);
  trim(k, b);
  while (!b.empty()) {
    auto [q, r] = upoly_divmod(k, a, b);
    auto s2 = upoly_sub(k, s0, upoly_mul(k, q, s1));
    a = std::move(b);
    b = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (!a.empty()) {
    auto c = k.inv(a.back());
    for (auto& x : a) x = k.mul(x, c);
    for (auto& x : s0) x = k.mul(x, c);
  }
  return {a, s0};
}

template <class F>
UPoly<F> upoly_powmod(const F& k, UPoly<F> base, mpz_class e, const UPoly<F>& m) {
  UPoly<F> r{k.one()};
  base = upoly_divmod(k, base, m).second;
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = upoly_divmod(k, upoly_mul(k, r, base), m).second;
    base = upoly_divmod(k, upoly_mul(k, base, base), m).second;
    e >>= 1;
  }
  return r;
}

/// Rabin's irreducibility test over F_p.
bool irreducible_mod_p(const PrimeField& k, const UPoly<PrimeField>& f) {
  const std::size_t n = f.size() - 1;
  if (n <= 1) return n == 1;
  const UPoly<PrimeField> x{0, 1};
  std::vector<std::size_t> prime_divisors;
  for (std::size_t q = 2, m = n; q <= m; ++q) {
    if (m % q == 0) {
      prime_divisors.push_back(q);
      while (m % q == 0) m /= q;
    }
  }
  const mpz_class p(static_cast<unsigned long>(k.prime()));
  for (std::size_t q : prime_divisors) {
    mpz_class e;
    mpz_pow_ui(e.get_mpz_t(), p.get_mpz_t(), n / q);
    auto h = upoly_sub(k, upoly_powmod(k, x, e, f), x);
    auto g = upoly_gcdex(k, f, h).first;
    if (g.size() != 1) return false;
  }
  mpz_class e;
  mpz_pow_ui(e.get_mpz_t(), p.get_mpz_t(), n);
  auto h = upoly_sub(k, upoly_powmod(k, x, e, f), x);
  return upoly_divmod(k, h, f).second.empty();
}

// Integer polynomial helpers for Kronecker's irreducibility test over QQ.

using ZPoly = std::vector<mpz_class>;

mpz_class zpoly_eval(const ZPoly& f, const mpz_class& a) {
  mpz_class r = 0;
  for (std::size_t i = f.size(); i-- > 0;) r = r * a + f[i];
  return r;
}

/// Exact division test over ZZ: true if g divides f.
bool zpoly_divides(const ZPoly& g, ZPoly f) {
  if (g.empty()) return false;
  while (f.size() >= g.size()) {
    if (sgn(f.back()) == 0) {
      f.pop_back();
      continue;
    }
    if (!mpz_divisible_p(f.back().get_mpz_t(), g.back().get_mpz_t())) return false;
    mpz_class c = f.back() / g.back();
    std::size_t shift = f.size() - g.size();
    for (std::size_t j = 0; j < g.size(); ++j) f[shift + j] -= c * g[j];
    f.pop_back();
  }
  return std::all_of(f.begin(), f.end(), [](const mpz_class& c) { return sgn(c) == 0; });
}

std::vector<mpz_class> signed_divisors(mpz_class v) {
  v = abs(v);
  std::vector<mpz_class> out;
  for (mpz_class d = 1; d * d <= v; ++d) {
    if (mpz_divisible_p(v.get_mpz_t(), d.get_mpz_t())) {
      out.push_back(d);
      if (d * d != v) out.push_back(v / d);
    }
  }
  std::vector<mpz_class> all;
  for (auto& d : out) {
    all.push_back(d);
    all.push_back(-d);
  }
  return all;
}

/// Lagrange interpolation through (xs[i], ys[i]) returning rational coefficients.
std::vector<mpq_class> interpolate(const std::vector<mpz_class>& xs, const std::vector<mpz_class>& ys) {
  const std::size_t n = xs.size();
  std::vector<mpq_class> result(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<mpq_class> basis{1};
    mpq_class denom = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      std::vector<mpq_class> next(basis.size() + 1, 0);
      for (std::size_t k = 0; k < basis.size(); ++k) {
        next[k + 1] += basis[k];
        next[k] -= basis[k] * xs[j];
      }
      basis = std::move(next);
      denom *= mpq_class(xs[i] - xs[j]);
    }
    for (std::size_t k = 0; k < n; ++k) result[k] += basis[k] * ys[i] / denom;
  }
  return result;
}

/// Kronecker's method: true if the primitive integer polynomial f has no
/// factor of degree 1..deg/2.
bool irreducible_over_q(const ZPoly& f) {
  const std::size_t n = f.size() - 1;
  if (n <= 1) return true;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    std::vector<mpz_class> xs;
    std::vector<std::vector<mpz_class>> choices;
    for (long a = 0; xs.size() < k + 1; a = a > 0 ? -a : -a + 1) {
      mpz_class v = zpoly_eval(f, a);
      if (sgn(v) == 0) return false;
      xs.emplace_back(a);
      choices.push_back(signed_divisors(v));
    }
    std::vector<std::size_t> idx(k + 1, 0);
    while (true) {
      std::vector<mpz_class> ys;
      for (std::size_t i = 0; i <= k; ++i) ys.push_back(choices[i][idx[i]]);
      auto g = interpolate(xs, ys);
      while (!g.empty() && sgn(g.back()) == 0) g.pop_back();
      bool integral = g.size() == k + 1 &&
                      std::all_of(g.begin(), g.end(), [](const mpq_class& c) { return c.get_den() == 1; });
      if (integral) {
        ZPoly gz;
        for (auto& c : g) gz.push_back(c.get_num());
        if (zpoly_divides(gz, f)) return false;
      }
      std::size_t pos = 0;
      while (pos <= k && ++idx[pos] == choices[pos].size()) idx[pos++] = 0;
      if (pos > k) break;
    }
  }
  return true;
}

std::string format_upoly(const std::vector<mpq_class>& c, const std::string& var, bool ascending) {
  std::ostringstream os;
  bool first = true;
  auto emit = [&](std::size_t i) {
    if (sgn(c[i]) == 0) return;
    mpq_class a = abs(c[i]);
    bool neg = sgn(c[i]) < 0;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    if (i == 0) {
      os << a.get_str();
      return;
    }
    if (a != 1) os << a.get_str() << "*";
    os << var;
    if (i > 1) os << "^" << i;
  };
  if (ascending) {
    for (std::size_t i = 0; i < c.size(); ++i) emit(i);
  } else {
    for (std::size_t i = c.size(); i-- > 0;) emit(i);
  }
  if (first) os << "0";
  return os.str();
}

/// Parses a univariate polynomial in `var` with rational coefficients.
std::vector<mpq_class> parse_upoly(const std::string& text, const std::string& var) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  }
  std::vector<mpq_class> out;
  std::size_t i = 0;
  auto fail = [&]() { throw ParseError("cannot parse polynomial '" + text + "' in " + var); };
  if (s.empty()) fail();
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    }
    mpq_class coef = 1;
    bool have_coef = false;
    std::size_t start = i;
    while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/')) ++i;
    if (i > start) {
      coef = mpq_class(s.substr(start, i - start));
      coef.canonicalize();
      have_coef = true;
      if (i < s.size() && s[i] == '*') ++i;
    }
    std::size_t power = 0;
    if (s.compare(i, var.size(), var) == 0) {
      i += var.size();
      power = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::size_t ps = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == ps) fail();
        power = std::stoul(s.substr(ps, i - ps));
      }
    } else if (!have_coef) {
      fail();
    } else if (i > 0 && s[i - 1] == '*') {
      fail();
    }
    if (i < s.size() && s[i] != '+' && s[i] != '-') fail();
    if (out.size() <= power) out.resize(power + 1, 0);
    out[power] += sign * coef;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// BaseRing

struct BaseRing::Data {
  Kind kind = Kind::Integers;
  std::uint64_t p = 0;
  Kind base_kind = Kind::Integers;
  std::vector<mpq_class> modulus;  // monic, ascending
  bool domain = true;
  std::string tag;
};

BaseRing::BaseRing() : BaseRing(integers()) {}

BaseRing::BaseRing(std::shared_ptr<const Data> d) : d_(std::move(d)) {}

BaseRing BaseRing::integers() {
  static const auto data = [] {
    auto d = std::make_shared<Data>();
    d->kind = Kind::Integers;
    d->tag = "ZZ";
    return d;
  }();
  return BaseRing(data);
}

BaseRing BaseRing::rationals() {
  static const auto data = [] {
    auto d = std::make_shared<Data>();
    d->kind = Kind::Rationals;
    d->tag = "QQ";
    return d;
  }();
  return BaseRing(data);
}

BaseRing BaseRing::prime_field(std::uint64_t p) {
  PrimeField check(p);
  auto d = std::make_shared<Data>();
  d->kind = Kind::PrimeField;
  d->p = p;
  d->tag = "Fp(" + std::to_string(p) + ")";
  return BaseRing(d);
}

BaseRing BaseRing::quotient(const BaseRing& base, const std::vector<mpq_class>& modulus) {
  if (base.kind() != Kind::Rationals && base.kind() != Kind::PrimeField) {
    throw Error("quotient rings need base QQ or F_p, got " + base.tag());
  }
  auto d = std::make_shared<Data>();
  d->kind = Kind::Quotient;
  d->base_kind = base.kind();
  d->p = base.prime();
  std::vector<mpq_class> m = modulus;
  if (base.kind() == Kind::PrimeField) {
    PrimeField k(base.prime());
    for (auto& c : m) c = mpq_class(mpz_class(static_cast<unsigned long>(k.from_rational(c))));
  }
  while (!m.empty() && sgn(m.back()) == 0) m.pop_back();
  if (m.size() < 2) throw Error("quotient modulus must have degree >= 1");
  if (base.kind() == Kind::PrimeField) {
    PrimeField k(base.prime());
    auto li = k.inv(k.from_rational(m.back()));
    UPoly<PrimeField> mp;
    for (auto& c : m) {
      auto v = k.mul(k.from_rational(c), li);
      c = mpq_class(mpz_class(static_cast<unsigned long>(v)));
      mp.push_back(v);
    }
    d->domain = irreducible_mod_p(k, mp);
  } else {
    mpq_class lead = m.back();
    for (auto& c : m) c /= lead;
    mpz_class den = 1;
    for (auto& c : m) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
    ZPoly z;
    for (auto& c : m) z.push_back(mpq_class(c * den).get_num());
    d->domain = irreducible_over_q(z);
  }
  d->modulus = std::move(m);
  d->tag = base.tag() + "[t]/(" + format_upoly(d->modulus, "t", false) + ")";
  d->tag.erase(std::remove(d->tag.begin(), d->tag.end(), ' '), d->tag.end());
  return BaseRing(d);
}

BaseRing BaseRing::parse(const std::string& raw) {
  std::string tag;
  for (char ch : raw) {
    if (!std::isspace(static_cast<unsigned char>(ch))) tag += ch;
  }
  auto bad = [&]() -> BaseRing { throw ParseError("unknown ring tag '" + raw + "'"); };
  BaseRing base;
  std::size_t pos = 0;
  if (tag.rfind("ZZ", 0) == 0) {
    base = integers();
    pos = 2;
  } else if (tag.rfind("QQ", 0) == 0) {
    base = rationals();
    pos = 2;
  } else if (tag.rfind("Fp(", 0) == 0) {
    std::size_t close = tag.find(')');
    if (close == std::string::npos) return bad();
    std::string digits = tag.substr(3, close - 3);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) return bad();
    mpz_class p(digits);
    if (p > kMaxPrime || !is_prime(p)) throw Error("Fp(" + digits + "): modulus is not an admissible prime");
    base = prime_field(p.get_ui());
    pos = close + 1;
  } else {
    return bad();
  }
  if (pos == tag.size()) return base;
  if (tag.compare(pos, 5, "[t]/(") != 0 || tag.back() != ')') return bad();
  if (base.kind() == Kind::Integers) throw Error("quotients of ZZ are not supported: " + raw);
  std::string body = tag.substr(pos + 5, tag.size() - pos - 6);
  return quotient(base, parse_upoly(body, "t"));
}

BaseRing::Kind BaseRing::kind() const { return d_->kind; }
std::uint64_t BaseRing::prime() const { return d_->p; }
std::uint64_t BaseRing::characteristic() const { return d_->p; }

bool BaseRing::is_field() const {
  switch (d_->kind) {
    case Kind::Integers:
      return false;
    case Kind::Rationals:
    case Kind::PrimeField:
      return true;
    case Kind::Quotient:
      return d_->domain;
  }
  return false;
}

bool BaseRing::is_domain() const { return d_->domain; }

BaseRing BaseRing::coefficient_field() const {
  if (d_->kind != Kind::Quotient) return *this;
  return d_->base_kind == Kind::Rationals ? rationals() : prime_field(d_->p);
}

std::size_t BaseRing::extension_degree() const {
  return d_->kind == Kind::Quotient ? d_->modulus.size() - 1 : 1;
}

const std::vector<mpq_class>& BaseRing::modulus() const { return d_->modulus; }
const std::string& BaseRing::tag() const { return d_->tag; }

bool operator==(const BaseRing& a, const BaseRing& b) {
  if (a.d_ == b.d_) return true;
  return a.d_->kind == b.d_->kind && a.d_->p == b.d_->p && a.d_->modulus == b.d_->modulus;
}

// ---------------------------------------------------------------------------
// RingElem

namespace {

/// Reduces a quotient payload given as coordinates (possibly too long).
RingElem::Payload reduce_quotient(const BaseRing& ring, std::vector<mpq_class> coords) {
  const auto& m = ring.modulus();
  const std::size_t deg = m.size() - 1;
  if (ring.coefficient_field().kind() == BaseRing::Kind::Rationals) {
    for (std::size_t i = coords.size(); i-- > deg;) {
      if (sgn(coords[i]) == 0) continue;
      mpq_class c = coords[i];
      for (std::size_t j = 0; j <= deg; ++j) coords[i - deg + j] -= c * m[j];
    }
    coords.resize(deg, 0);
    return coords;
  }
  PrimeField k(ring.prime());
  RingElem::Residues r(std::max(coords.size(), deg), 0);
  for (std::size_t i = 0; i < coords.size(); ++i) r[i] = k.from_rational(coords[i]);
  for (std::size_t i = r.size(); i-- > deg;) {
    if (r[i] == 0) continue;
    auto c = r[i];
    for (std::size_t j = 0; j <= deg; ++j) {
      r[i - deg + j] = k.sub(r[i - deg + j], k.mul(c, k.from_rational(m[j])));
    }
  }
  r.resize(deg);
  return r;
}

}  // namespace

RingElem::RingElem() : ring_(BaseRing::integers()), v_(mpz_class(0)) {}

RingElem::RingElem(const BaseRing& ring, long value) : RingElem(ring, mpz_class(value)) {}

RingElem::RingElem(const BaseRing& ring, const mpz_class& value) : ring_(ring) {
  switch (ring.kind()) {
    case BaseRing::Kind::Integers:
      v_ = value;
      break;
    case BaseRing::Kind::Rationals:
      v_ = mpq_class(value);
      break;
    case BaseRing::Kind::PrimeField:
      v_ = PrimeField(ring.prime()).from_integer(value);
      break;
    case BaseRing::Kind::Quotient:
      v_ = reduce_quotient(ring, {mpq_class(value)});
      break;
  }
}

RingElem::RingElem(const BaseRing& ring, const mpq_class& raw) : ring_(ring) {
  mpq_class value = raw;
  value.canonicalize();
  switch (ring.kind()) {
    case BaseRing::Kind::Integers:
      if (value.get_den() != 1) throw NotAUnit("denominator of " + value.get_str() + " is not a unit in ZZ");
      v_ = mpz_class(value.get_num());
      break;
    case BaseRing::Kind::Rationals:
      v_ = value;
      break;
    case BaseRing::Kind::PrimeField:
      v_ = PrimeField(ring.prime()).from_rational(value);
      break;
    case BaseRing::Kind::Quotient:
      v_ = reduce_quotient(ring, {value});
      break;
  }
}

RingElem RingElem::generator(const BaseRing& ring) {
  if (ring.kind() != BaseRing::Kind::Quotient) throw Error("ring " + ring.tag() + " has no generator t");
  return from_coordinates(ring, {0, 1});
}

RingElem RingElem::from_coordinates(const BaseRing& ring, const std::vector<mpq_class>& coords) {
  if (ring.kind() != BaseRing::Kind::Quotient) {
    if (coords.size() > 1) throw Error("coordinates of length > 1 for " + ring.tag());
    return RingElem(ring, coords.empty() ? mpq_class(0) : coords[0]);
  }
  std::vector<mpq_class> c = coords;
  for (auto& x : c) x.canonicalize();
  return RingElem(ring, reduce_quotient(ring, c));
}

void RingElem::check_same(const RingElem& b) const {
  if (ring_ != b.ring_) throw RingMismatch("ring mismatch: " + ring_.tag() + " vs " + b.ring_.tag());
}

bool RingElem::is_zero() const {
  return std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, mpz_class> || std::is_same_v<T, mpq_class>) {
          return sgn(v) == 0;
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
          return v == 0;
        } else if constexpr (std::is_same_v<T, Rationals>) {
          return std::all_of(v.begin(), v.end(), [](const mpq_class& c) { return sgn(c) == 0; });
        } else {
          return std::all_of(v.begin(), v.end(), [](std::uint64_t c) { return c == 0; });
        }
      },
      v_);
}

bool RingElem::is_one() const { return *this == one(ring_); }

bool RingElem::is_unit() const {
  switch (ring_.kind()) {
    case BaseRing::Kind::Integers: {
      const auto& z = std::get<mpz_class>(v_);
      return z == 1 || z == -1;
    }
    case BaseRing::Kind::Rationals:
    case BaseRing::Kind::PrimeField:
      return !is_zero();
    case BaseRing::Kind::Quotient:
      try {
        (void)inverse();
        return true;
      } catch (const NotAUnit&) {
        return false;
      }
  }
  return false;
}

RingElem RingElem::operator-() const { return zero(ring_) - *this; }

RingElem operator+(const RingElem& a, const RingElem& b) {
  RingElem r = a;
  r += b;
  return r;
}

RingElem operator-(const RingElem& a, const RingElem& b) {
  RingElem r = a;
  r -= b;
  return r;
}

RingElem operator*(const RingElem& a, const RingElem& b) {
  RingElem r = a;
  r *= b;
  return r;
}

RingElem& RingElem::operator+=(const RingElem& b) {
  check_same(b);
  switch (ring_.kind()) {
    case BaseRing::Kind::Integers:
      std::get<mpz_class>(v_) += std::get<mpz_class>(b.v_);
      break;
    case BaseRing::Kind::Rationals:
      std::get<mpq_class>(v_) += std::get<mpq_class>(b.v_);
      break;
    case BaseRing::Kind::PrimeField: {
      PrimeField k(ring_.prime());
      v_ = k.add(std::get<std::uint64_t>(v_), std::get<std::uint64_t>(b.v_));
      break;
    }
    case BaseRing::Kind::Quotient:
      if (auto* q = std::get_if<Rationals>(&v_)) {
        const auto& o = std::get<Rationals>(b.v_);
        for (std::size_t i = 0; i < q->size(); ++i) (*q)[i] += o[i];
      } else {
        PrimeField k(ring_.prime());
        auto& r = std::get<Residues>(v_);
        const auto& o = std::get<Residues>(b.v_);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = k.add(r[i], o[i]);
      }
      break;
  }
  return *this;
}

RingElem& RingElem::operator-=(const RingElem& b) {
  check_same(b);
  switch (ring_.kind()) {
    case BaseRing::Kind::Integers:
      std::get<mpz_class>(v_) -= std::get<mpz_class>(b.v_);
      break;
    case BaseRing::Kind::Rationals:
      std::get<mpq_class>(v_) -= std::get<mpq_class>(b.v_);
      break;
    case BaseRing::Kind::PrimeField: {
      PrimeField k(ring_.prime());
      v_ = k.sub(std::get<std::uint64_t>(v_), std::get<std::uint64_t>(b.v_));
      break;
    }
    case BaseRing::Kind::Quotient:
      if (auto* q = std::get_if<Rationals>(&v_)) {
        const auto& o = std::get<Rationals>(b.v_);
        for (std::size_t i = 0; i < q->size(); ++i) (*q)[i] -= o[i];
      } else {
        PrimeField k(ring_.prime());
        auto& r = std::get<Residues>(v_);
        const auto& o = std::get<Residues>(b.v_);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = k.sub(r[i], o[i]);
      }
      break;
  }
  return *this;
}

RingElem& RingElem::operator*=(const RingElem& b) {
  check_same(b);
  switch (ring_.kind()) {
    case BaseRing::Kind::Integers:
      std::get<mpz_class>(v_) *= std::get<mpz_class>(b.v_);
      break;
    case BaseRing::Kind::Rationals:
      std::get<mpq_class>(v_) *= std::get<mpq_class>(b.v_);
      break;
    case BaseRing::Kind::PrimeField: {
      PrimeField k(ring_.prime());
      v_ = k.mul(std::get<std::uint64_t>(v_), std::get<std::uint64_t>(b.v_));
      break;
    }
    case BaseRing::Kind::Quotient: {
      auto x = coordinates();
      auto y = b.coordinates();
      std::vector<mpq_class> prod(x.size() + y.size(), 0);
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (sgn(x[i]) == 0) continue;
        for (std::size_t j = 0; j < y.size(); ++j) prod[i + j] += x[i] * y[j];
      }
      v_ = reduce_quotient(ring_, std::move(prod));
      break;
    }
  }
  return *this;
}

RingElem RingElem::pow(unsigned long e) const {
  RingElem r = one(ring_);
  RingElem b = *this;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

RingElem RingElem::inverse() const {
  auto fail = [&]() -> RingElem { throw NotAUnit(to_string() + " is not a unit in " + ring_.tag()); };
  switch (ring_.kind()) {
    case BaseRing::Kind::Integers:
      if (!is_unit()) return fail();
      return *this;
    case BaseRing::Kind::Rationals:
      if (is_zero()) return fail();
      return RingElem(ring_, mpq_class(1 / std::get<mpq_class>(v_)));
    case BaseRing::Kind::PrimeField:
      if (is_zero()) return fail();
      return RingElem(ring_, Payload(PrimeField(ring_.prime()).inv(std::get<std::uint64_t>(v_))));
    case BaseRing::Kind::Quotient: {
      auto run = [&](const auto& k) -> RingElem {
        using F = std::decay_t<decltype(k)>;
        UPoly<F> a, m;
        for (auto& c : coordinates()) a.push_back(k.from_rational(c));
        for (auto& c : ring_.modulus()) m.push_back(k.from_rational(c));
        auto [g, s] = upoly_gcdex(k, a, m);
        if (g.size() != 1) return fail();
        std::vector<mpq_class> coords;
        for (auto& c : s) coords.push_back(k.to_rational(c));
        return from_coordinates(ring_, coords);
      };
      return with_field(ring_.coefficient_field(), run);
    }
  }
  return fail();
}

bool operator==(const RingElem& a, const RingElem& b) { return a.ring_ == b.ring_ && a.v_ == b.v_; }

std::vector<mpq_class> RingElem::coordinates() const {
  return std::visit(
      [](const auto& v) -> std::vector<mpq_class> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, mpz_class>) {
          return {mpq_class(v)};
        } else if constexpr (std::is_same_v<T, mpq_class>) {
          return {v};
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
          return {mpq_class(mpz_class(static_cast<unsigned long>(v)))};
        } else if constexpr (std::is_same_v<T, Rationals>) {
          return v;
        } else {
          std::vector<mpq_class> out;
          for (auto c : v) out.emplace_back(mpz_class(static_cast<unsigned long>(c)));
          return out;
        }
      },
      v_);
}

const mpz_class& RingElem::as_integer() const {
  if (auto* z = std::get_if<mpz_class>(&v_)) return *z;
  throw RingMismatch("element of " + ring_.tag() + " is not an integer");
}

const mpq_class& RingElem::as_rational() const {
  if (auto* q = std::get_if<mpq_class>(&v_)) return *q;
  throw RingMismatch("element of " + ring_.tag() + " is not a rational");
}

std::uint64_t RingElem::as_residue() const {
  if (auto* r = std::get_if<std::uint64_t>(&v_)) return *r;
  throw RingMismatch("element of " + ring_.tag() + " is not a residue");
}

std::string RingElem::to_string() const {
  switch (ring_.kind()) {
    case BaseRing::Kind::Integers:
      return std::get<mpz_class>(v_).get_str();
    case BaseRing::Kind::Rationals:
      return std::get<mpq_class>(v_).get_str();
    case BaseRing::Kind::PrimeField:
      return std::to_string(std::get<std::uint64_t>(v_));
    case BaseRing::Kind::Quotient: {
      std::string s = format_upoly(coordinates(), "t", true);
      return needs_parens() ? "(" + s + ")" : s;
    }
  }
  return "?";
}

bool RingElem::needs_parens() const {
  if (ring_.kind() != BaseRing::Kind::Quotient) return false;
  auto c = coordinates();
  return std::count_if(c.begin(), c.end(), [](const mpq_class& x) { return sgn(x) != 0; }) > 1;
}

// ---------------------------------------------------------------------------

FractionFieldReduction::FractionFieldReduction(const BaseRing& source, std::uint64_t p)
    : target_(fraction_field_reduction(source, p)) {}

RingElem FractionFieldReduction::operator()(const RingElem& z) const { return RingElem(target_, z.as_integer()); }

BaseRing fraction_field_reduction(const BaseRing& r, std::uint64_t p) {
  if (r.kind() != BaseRing::Kind::Integers) throw Error("fraction_field_reduction expects ZZ, got " + r.tag());
  if (p == 0) return BaseRing::rationals();
  if (!is_prime(p)) throw Error("K_p requires p prime or zero, got " + std::to_string(p));
  return BaseRing::prime_field(p);
}

}  // namespace pfcalc
