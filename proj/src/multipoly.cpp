#include "pfcalc/multipoly.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace pfcalc {

// ---------------------------------------------------------------------------
// VarSet

VarSet::VarSet(std::vector<std::string> names, std::vector<unsigned> weights)
    : names_(std::move(names)), weights_(std::move(weights)) {
  if (weights_.empty()) weights_.assign(names_.size(), 1);
  if (weights_.size() != names_.size()) throw Error("VarSet: weights and names differ in length");
  if (names_.size() > kMaxVars) {
    throw SizeGuardExceeded("VarSet: " + std::to_string(names_.size()) + " variables exceed capacity " +
                            std::to_string(kMaxVars));
  }
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (!seen.insert(n).second) throw Error("VarSet: duplicate variable '" + n + "'");
  }
  for (auto w : weights_) {
    if (w == 0) throw Error("VarSet: weights must be >= 1");
  }
}

long VarSet::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<long>(i);
  return -1;
}

VarSet VarSet::operator+(const VarSet& other) const {
  auto n = names_;
  auto w = weights_;
  n.insert(n.end(), other.names_.begin(), other.names_.end());
  w.insert(w.end(), other.weights_.begin(), other.weights_.end());
  return VarSet(n, w);
}

VarSet VarSet::select(const std::vector<std::size_t>& positions) const {
  std::vector<std::string> n;
  std::vector<unsigned> w;
  for (auto p : positions) {
    n.push_back(names_.at(p));
    w.push_back(weights_.at(p));
  }
  return VarSet(n, w);
}

// ---------------------------------------------------------------------------
// Monomial

Monomial::Monomial(std::size_t nvars) {
  if (nvars > kMaxVars) throw SizeGuardExceeded("monomial with " + std::to_string(nvars) + " variables");
  n_ = static_cast<std::uint8_t>(nvars);
}

Monomial::Monomial(std::initializer_list<unsigned> exps) : Monomial(std::vector<unsigned>(exps)) {}

Monomial::Monomial(const std::vector<unsigned>& exps) : Monomial(exps.size()) {
  for (std::size_t i = 0; i < exps.size(); ++i) set(i, exps[i]);
}

void Monomial::set(std::size_t i, unsigned e) {
  if (e > 0xFFFF) throw SizeGuardExceeded("exponent " + std::to_string(e) + " out of range");
  deg_ = deg_ - e_[i] + e;
  e_[i] = static_cast<std::uint16_t>(e);
}

unsigned Monomial::weighted_degree(const std::vector<unsigned>& weights) const {
  unsigned d = 0;
  for (std::size_t i = 0; i < n_; ++i) d += weights[i] * e_[i];
  return d;
}

std::uint64_t Monomial::support_mask() const {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < n_; ++i)
    if (e_[i]) m |= std::uint64_t{1} << i;
  return m;
}

bool Monomial::divides(const Monomial& other) const {
  if (deg_ > other.deg_) return false;
  for (std::size_t i = 0; i < n_; ++i)
    if (e_[i] > other.e_[i]) return false;
  return true;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial r(a.n_);
  for (std::size_t i = 0; i < a.n_; ++i) {
    unsigned e = unsigned(a.e_[i]) + b.e_[i];
    if (e > 0xFFFF) throw SizeGuardExceeded("exponent overflow");
    r.e_[i] = static_cast<std::uint16_t>(e);
  }
  r.deg_ = a.deg_ + b.deg_;
  return r;
}

Monomial operator/(const Monomial& a, const Monomial& b) {
  Monomial r(a.n_);
  for (std::size_t i = 0; i < a.n_; ++i) r.e_[i] = static_cast<std::uint16_t>(a.e_[i] - b.e_[i]);
  r.deg_ = a.deg_ - b.deg_;
  return r;
}

Monomial Monomial::lcm(const Monomial& a, const Monomial& b) {
  Monomial r(a.n_);
  for (std::size_t i = 0; i < a.n_; ++i) {
    r.e_[i] = std::max(a.e_[i], b.e_[i]);
    r.deg_ += r.e_[i];
  }
  return r;
}

bool Monomial::coprime(const Monomial& a, const Monomial& b) { return (a.support_mask() & b.support_mask()) == 0; }

std::vector<unsigned> Monomial::exponents() const { return std::vector<unsigned>(e_.begin(), e_.begin() + n_); }

// ---------------------------------------------------------------------------
// Orders

std::string MonomialOrder::to_string() const {
  switch (kind) {
    case Kind::Lex:
      return "lex";
    case Kind::Grevlex:
      return "grevlex";
    case Kind::Elimination:
      return "elim(" + std::to_string(block) + ")";
  }
  return "?";
}

MonomialComparator::MonomialComparator(const VarSet& vars, MonomialOrder order)
    : weights_(vars.weights()), order_(order) {
  if (order_.kind == MonomialOrder::Kind::Elimination && order_.block > vars.size()) {
    throw Error("elimination block larger than the number of variables");
  }
}

int MonomialComparator::grevlex_range(const Monomial& a, const Monomial& b, std::size_t lo, std::size_t hi) const {
  unsigned da = 0, db = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    da += weights_[i] * a[i];
    db += weights_[i] * b[i];
  }
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t i = hi; i-- > lo;) {
    if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;
  }
  return 0;
}

int MonomialComparator::compare(const Monomial& a, const Monomial& b) const {
  const std::size_t n = a.size();
  switch (order_.kind) {
    case MonomialOrder::Kind::Lex:
      for (std::size_t i = 0; i < n; ++i)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
      return 0;
    case MonomialOrder::Kind::Grevlex:
      return grevlex_range(a, b, 0, n);
    case MonomialOrder::Kind::Elimination:
      if (int c = grevlex_range(a, b, 0, order_.block); c != 0) return c;
      return grevlex_range(a, b, order_.block, n);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// MultiPoly

namespace {
const std::shared_ptr<const VarSet>& empty_vars() {
  static const auto v = std::make_shared<const VarSet>();
  return v;
}
}  // namespace

MultiPoly::MultiPoly() : vars_(empty_vars()) {}

MultiPoly::MultiPoly(BaseRing ring, VarSet vars)
    : ring_(std::move(ring)), vars_(std::make_shared<const VarSet>(std::move(vars))) {}

MultiPoly MultiPoly::constant(BaseRing ring, VarSet vars, const RingElem& c) {
  MultiPoly p(ring, vars);
  p.add_term(Monomial(p.nvars()), c);
  return p;
}

MultiPoly MultiPoly::variable(BaseRing ring, VarSet vars, std::size_t index) {
  MultiPoly p(ring, vars);
  if (index >= p.nvars()) throw Error("variable index out of range");
  Monomial m(p.nvars());
  m.set(index, 1);
  p.add_term(m, RingElem::one(p.ring_));
  return p;
}

MultiPoly MultiPoly::variable(BaseRing ring, VarSet vars, const std::string& name) {
  long i = vars.index_of(name);
  if (i < 0) throw Error("unknown variable '" + name + "'");
  return variable(std::move(ring), std::move(vars), static_cast<std::size_t>(i));
}

MultiPoly MultiPoly::term(BaseRing ring, VarSet vars, const RingElem& c, const Monomial& m) {
  MultiPoly p(ring, vars);
  p.add_term(m, c);
  return p;
}

RingElem MultiPoly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? RingElem::zero(ring_) : it->second;
}

bool MultiPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

void MultiPoly::add_term(const Monomial& m, const RingElem& c) {
  if (m.size() != nvars()) throw Error("monomial length does not match the variable set");
  if (c.ring() != ring_) throw RingMismatch("coefficient ring " + c.ring().tag() + " vs " + ring_.tag());
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void MultiPoly::check_compatible(const MultiPoly& b) const {
  if (ring_ != b.ring_) throw RingMismatch("polynomial rings differ: " + ring_.tag() + " vs " + b.ring_.tag());
  if (vars_ != b.vars_ && !(vars() == b.vars())) throw RingMismatch("polynomial variable sets differ");
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& b) {
  if (terms_.empty() && nvars() == 0 && b.nvars() > 0) *this = MultiPoly(b.ring_, b.vars());
  check_compatible(b);
  for (const auto& [m, c] : b.terms_) add_term(m, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& b) {
  if (terms_.empty() && nvars() == 0 && b.nvars() > 0) *this = MultiPoly(b.ring_, b.vars());
  check_compatible(b);
  for (const auto& [m, c] : b.terms_) add_term(m, -c);
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  a.check_compatible(b);
  MultiPoly r(a.ring_, a.vars());
  r.vars_ = a.vars_;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
  return r;
}

MultiPoly MultiPoly::scaled(const RingElem& c) const {
  MultiPoly r(ring_, vars());
  r.vars_ = vars_;
  for (const auto& [m, a] : terms_) r.add_term(m, a * c);
  return r;
}

MultiPoly MultiPoly::times_monomial(const Monomial& mono) const {
  MultiPoly r(ring_, vars());
  r.vars_ = vars_;
  for (const auto& [m, a] : terms_) r.terms_.emplace(m * mono, a);
  return r;
}

MultiPoly MultiPoly::pow(unsigned e) const {
  MultiPoly r = constant(ring_, vars(), RingElem::one(ring_));
  MultiPoly b = *this;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
  if (a.ring_ != b.ring_) return false;
  if (a.nvars() != b.nvars()) return false;
  if (a.vars_ != b.vars_ && a.vars_ && b.vars_ && !(a.vars() == b.vars())) return false;
  return a.terms_ == b.terms_;
}

long MultiPoly::total_degree() const {
  long d = -1;
  for (const auto& [m, c] : terms_) d = std::max<long>(d, m.total_degree());
  return d;
}

long MultiPoly::weighted_degree() const {
  long d = -1;
  for (const auto& [m, c] : terms_) d = std::max<long>(d, m.weighted_degree(vars().weights()));
  return d;
}

bool MultiPoly::is_weighted_homogeneous() const {
  long d = -1;
  for (const auto& [m, c] : terms_) {
    long w = m.weighted_degree(vars().weights());
    if (d >= 0 && w != d) return false;
    d = w;
  }
  return true;
}

unsigned MultiPoly::degree_in(std::size_t i) const {
  unsigned d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m[i]);
  return d;
}

Monomial MultiPoly::leading_monomial(const MonomialComparator& cmp) const {
  if (terms_.empty()) throw Error("leading monomial of the zero polynomial");
  const Monomial* best = nullptr;
  for (const auto& [m, c] : terms_)
    if (!best || cmp.greater(m, *best)) best = &m;
  return *best;
}

RingElem MultiPoly::leading_coefficient(const MonomialComparator& cmp) const {
  return terms_.at(leading_monomial(cmp));
}

std::vector<std::pair<Monomial, RingElem>> MultiPoly::sorted_terms(const MonomialComparator& cmp) const {
  std::vector<std::pair<Monomial, RingElem>> out(terms_.begin(), terms_.end());
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) { return cmp.greater(a.first, b.first); });
  return out;
}

MultiPoly MultiPoly::substitute(const std::vector<MultiPoly>& images) const {
  if (images.size() != nvars()) throw Error("substitute: need one image per variable");
  if (images.empty()) return *this;
  const MultiPoly& proto = images.front();
  MultiPoly result(ring_, proto.vars());
  // Cache powers of each image.
  std::vector<std::vector<MultiPoly>> powers(images.size());
  auto power = [&](std::size_t i, unsigned e) -> const MultiPoly& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(constant(ring_, proto.vars(), RingElem::one(ring_)));
    while (cache.size() <= e) cache.push_back(cache.back() * images[i]);
    return cache[e];
  };
  for (const auto& [m, c] : terms_) {
    MultiPoly t = constant(ring_, proto.vars(), c);
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i]) t = t * power(i, m[i]);
    result += t;
  }
  return result;
}

RingElem MultiPoly::evaluate(const std::vector<RingElem>& point) const {
  if (point.size() != nvars()) throw Error("evaluate: point has wrong length");
  RingElem r = RingElem::zero(ring_);
  for (const auto& [m, c] : terms_) {
    RingElem t = c;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i]) t *= point[i].pow(m[i]);
    r += t;
  }
  return r;
}

MultiPoly MultiPoly::embed(const VarSet& target, const std::vector<std::size_t>& positions) const {
  if (positions.size() != nvars()) throw Error("embed: need one position per variable");
  MultiPoly r(ring_, target);
  for (const auto& [m, c] : terms_) {
    Monomial t(target.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!m[i]) continue;
      if (positions[i] >= target.size()) throw Error("embed: position out of range");
      t.set(positions[i], t[positions[i]] + m[i]);
    }
    r.add_term(t, c);
  }
  return r;
}

MultiPoly MultiPoly::map_coefficients(const BaseRing& target,
                                      const std::function<RingElem(const RingElem&)>& f) const {
  MultiPoly r(target, vars());
  for (const auto& [m, c] : terms_) r.add_term(m, f(c));
  return r;
}

MultiPoly MultiPoly::coefficient_of_power(std::size_t var, unsigned k) const {
  MultiPoly r(ring_, vars());
  r.vars_ = vars_;
  for (const auto& [m, c] : terms_) {
    if (m[var] != k) continue;
    Monomial t = m;
    t.set(var, 0);
    r.terms_.emplace(t, c);
  }
  return r;
}

std::string monomial_to_string(const Monomial& m, const VarSet& vars) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m[i]) continue;
    if (!s.empty()) s += "*";
    s += vars.name(i);
    if (m[i] > 1) s += "^" + std::to_string(m[i]);
  }
  return s.empty() ? "1" : s;
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<const TermMap::value_type*> order;
  for (const auto& t : terms_) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) {
    if (a->first.total_degree() != b->first.total_degree()) return a->first.total_degree() > b->first.total_degree();
    return a->first > b->first;
  });
  std::ostringstream os;
  bool first = true;
  for (auto* t : order) {
    const Monomial& m = t->first;
    std::string c = t->second.to_string();
    bool neg = false;
    if (!t->second.needs_parens() && !c.empty() && c[0] == '-') {
      neg = true;
      c.erase(0, 1);
    }
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    if (m.is_one()) {
      os << c;
    } else {
      if (c != "1") os << c << "*";
      os << monomial_to_string(m, vars());
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class PolyParser {
 public:
  PolyParser(const std::string& text, const BaseRing& ring, const VarSet& vars)
      : text_(text), ring_(ring), vars_(vars) {}

  MultiPoly parse() {
    MultiPoly p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw ParseError("polynomial '" + text_ + "' at offset " + std::to_string(pos_) + ": " + what);
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  MultiPoly constant(const RingElem& c) { return MultiPoly::constant(ring_, vars_, c); }

  MultiPoly expr() {
    MultiPoly acc = term();
    while (true) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  MultiPoly term() {
    MultiPoly acc = unary();
    while (true) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        MultiPoly d = unary();
        if (!d.is_constant() || d.is_zero()) fail("division by a non-constant or zero");
        acc = acc.scaled(d.coefficient(Monomial(vars_.size())).inverse());
      } else {
        return acc;
      }
    }
  }

  MultiPoly unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  MultiPoly power() {
    MultiPoly base = atom();
    if (accept('^')) {
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ == start) fail("expected exponent");
      base = base.pow(static_cast<unsigned>(std::stoul(text_.substr(start, pos_ - start))));
    }
    return base;
  }

  MultiPoly atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      MultiPoly p = expr();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return constant(RingElem(ring_, mpz_class(text_.substr(start, pos_ - start))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string name = text_.substr(start, pos_ - start);
      long idx = vars_.index_of(name);
      if (idx >= 0) return MultiPoly::variable(ring_, vars_, static_cast<std::size_t>(idx));
      if (name == "t" && ring_.kind() == BaseRing::Kind::Quotient) return constant(RingElem::generator(ring_));
      pos_ = start;
      fail("unknown variable '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& text_;
  const BaseRing& ring_;
  const VarSet& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

MultiPoly parse_poly(const std::string& text, const BaseRing& ring, const VarSet& vars) {
  return PolyParser(text, ring, vars).parse();
}

std::vector<Monomial> monomials_of_degree(std::size_t n, unsigned d) {
  std::vector<Monomial> out;
  if (n == 0) {
    if (d == 0) out.emplace_back(0);
    return out;
  }
  Monomial m(n);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
    if (i + 1 == n) {
      m.set(i, left);
      out.push_back(m);
      return;
    }
    for (unsigned e = left + 1; e-- > 0;) {
      m.set(i, e);
      rec(i + 1, left - e);
    }
    m.set(i, 0);
  };
  rec(0, d);
  return out;
}

}  // namespace pfcalc
