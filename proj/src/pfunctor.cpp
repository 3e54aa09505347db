#include "pfcalc/pfunctor.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace pfcalc {

namespace {

const BaseRing& ZZ() {
  static const BaseRing r = BaseRing::integers();
  return r;
}

MultiPoly zero_poly(const VarSet& v) { return MultiPoly(ZZ(), v); }
MultiPoly one_poly(const VarSet& v) { return MultiPoly::constant(ZZ(), v, RingElem::one(ZZ())); }

std::string module_text(const FPModule& M) {
  std::string base = M.ngens == 1 ? "ZZ" : "ZZ^" + std::to_string(M.ngens);
  if (M.relations.empty()) return base;
  if (M.ngens == 1 && M.relations.size() == 1) return "ZZ/" + M.relations[0][0].to_string();
  std::string s = base + "/<";
  for (std::size_t i = 0; i < M.relations.size(); ++i) {
    if (i) s += ",";
    s += "(";
    for (std::size_t j = 0; j < M.ngens; ++j) s += (j ? "," : "") + M.relations[i][j].to_string();
    s += ")";
  }
  return s + ">";
}

}  // namespace

// ---------------------------------------------------------------- FunctorExpr

FunctorExpr FunctorExpr::constant(const FPModule& M) {
  if (M.ring != ZZ()) throw Error("Const: module must be over ZZ");
  return FunctorExpr(std::make_shared<Node>(Node{Kind::Const, 0, M, {}}));
}
FunctorExpr FunctorExpr::id() { return FunctorExpr(std::make_shared<Node>(Node{Kind::Id, 0, {}, {}})); }
FunctorExpr FunctorExpr::sym(unsigned d) { return FunctorExpr(std::make_shared<Node>(Node{Kind::Sym, d, {}, {}})); }
FunctorExpr FunctorExpr::ext(unsigned d) { return FunctorExpr(std::make_shared<Node>(Node{Kind::Ext, d, {}, {}})); }

FunctorExpr FunctorExpr::tensor(std::vector<FunctorExpr> children) {
  if (children.empty()) throw Error("Tensor: needs at least one factor");
  for (const auto& c : children)
    if (!c.is_free()) throw Error("Tensor: factor " + c.to_string() + " has torsion");
  return FunctorExpr(std::make_shared<Node>(Node{Kind::Tensor, 0, {}, std::move(children)}));
}

FunctorExpr FunctorExpr::direct_sum(std::vector<FunctorExpr> children) {
  if (children.empty()) throw Error("DirectSum: needs at least one summand");
  return FunctorExpr(std::make_shared<Node>(Node{Kind::DirectSum, 0, {}, std::move(children)}));
}

FunctorExpr FunctorExpr::compose(const FunctorExpr& outer, const FunctorExpr& inner) {
  if (!inner.is_free()) throw Error("Compose: inner functor " + inner.to_string() + " has torsion");
  return FunctorExpr(std::make_shared<Node>(Node{Kind::Compose, 0, {}, {outer, inner}}));
}

FunctorExpr FunctorExpr::shift(unsigned m, const FunctorExpr& child) {
  return FunctorExpr(std::make_shared<Node>(Node{Kind::Shift, m, {}, {child}}));
}

FunctorExpr FunctorExpr::dual(const FunctorExpr& child) {
  if (!child.is_free()) throw Error("Dual: " + child.to_string() + " does not take free values");
  return FunctorExpr(std::make_shared<Node>(Node{Kind::Dual, 0, {}, {child}}));
}

unsigned FunctorExpr::degree() const {
  switch (kind()) {
    case Kind::Const: return 0;
    case Kind::Id: return 1;
    case Kind::Sym:
    case Kind::Ext: return param();
    case Kind::Tensor: {
      unsigned s = 0;
      for (const auto& c : children()) s += c.degree();
      return s;
    }
    case Kind::DirectSum: {
      unsigned s = 0;
      for (const auto& c : children()) s = std::max(s, c.degree());
      return s;
    }
    case Kind::Compose: return children()[0].degree() * children()[1].degree();
    case Kind::Shift:
    case Kind::Dual: return children()[0].degree();
  }
  return 0;
}

bool FunctorExpr::is_free() const {
  switch (kind()) {
    case Kind::Const: return module().is_free();
    case Kind::DirectSum:
      return std::all_of(children().begin(), children().end(), [](const FunctorExpr& c) { return c.is_free(); });
    case Kind::Compose:
    case Kind::Shift: return children()[0].is_free();
    default: return true;
  }
}

std::string FunctorExpr::to_string() const {
  auto list = [&](const std::string& head) {
    std::string s = head + "(";
    for (std::size_t i = 0; i < children().size(); ++i) s += (i ? ", " : "") + children()[i].to_string();
    return s + ")";
  };
  switch (kind()) {
    case Kind::Const: return "Const(" + module_text(module()) + ")";
    case Kind::Id: return "Id";
    case Kind::Sym: return "Sym(" + std::to_string(param()) + ")";
    case Kind::Ext: return "Ext(" + std::to_string(param()) + ")";
    case Kind::Tensor: return list("Tensor");
    case Kind::DirectSum: return list("DirectSum");
    case Kind::Compose: return list("Compose");
    case Kind::Shift: return "Shift(" + std::to_string(param()) + ", " + children()[0].to_string() + ")";
    case Kind::Dual: return list("Dual");
  }
  return {};
}

// --------------------------------------------------------------------- parser

namespace {

class ExprParser {
 public:
  explicit ExprParser(const std::string& s) : s_(s) {}

  FunctorExpr parse() {
    auto e = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected text");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("functor expression: " + what + " at position " + std::to_string(pos_) + " in '" + s_ + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(const std::string& tok) {
    skip();
    if (s_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(const std::string& tok) {
    if (!eat(tok)) fail("expected '" + tok + "'");
  }
  std::string ident() {
    skip();
    std::size_t b = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (b == pos_) fail("expected a name");
    return s_.substr(b, pos_ - b);
  }
  long integer() {
    skip();
    std::size_t b = pos_;
    if (pos_ < s_.size() && s_[pos_] == '-') ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (b == pos_ || (pos_ == b + 1 && s_[b] == '-')) fail("expected an integer");
    return std::stol(s_.substr(b, pos_ - b));
  }

  FunctorExpr sum() {
    std::vector<FunctorExpr> parts{product()};
    while (eat("(+)")) parts.push_back(product());
    return parts.size() == 1 ? parts[0] : FunctorExpr::direct_sum(std::move(parts));
  }
  FunctorExpr product() {
    std::vector<FunctorExpr> parts{atom()};
    while (eat("(x)")) parts.push_back(atom());
    return parts.size() == 1 ? parts[0] : FunctorExpr::tensor(std::move(parts));
  }
  std::vector<FunctorExpr> arglist() {
    std::vector<FunctorExpr> out{sum()};
    while (eat(",")) out.push_back(sum());
    expect(")");
    return out;
  }
  FunctorExpr atom() {
    skip();
    if (eat("(")) {
      auto e = sum();
      expect(")");
      return e;
    }
    std::string name = ident();
    if (name == "Id") return FunctorExpr::id();
    expect("(");
    if (name == "Sym" || name == "Ext") {
      long d = integer();
      if (d < 0) fail("negative degree");
      expect(")");
      return name == "Sym" ? FunctorExpr::sym(static_cast<unsigned>(d)) : FunctorExpr::ext(static_cast<unsigned>(d));
    }
    if (name == "Shift") {
      long m = integer();
      if (m < 0) fail("negative shift rank");
      expect(",");
      auto c = sum();
      expect(")");
      return FunctorExpr::shift(static_cast<unsigned>(m), c);
    }
    if (name == "Const") {
      auto M = module();
      expect(")");
      return FunctorExpr::constant(M);
    }
    auto args = arglist();
    if (name == "Tensor") return FunctorExpr::tensor(std::move(args));
    if (name == "DirectSum") return FunctorExpr::direct_sum(std::move(args));
    if (name == "Dual") {
      if (args.size() != 1) fail("Dual takes one argument");
      return FunctorExpr::dual(args[0]);
    }
    if (name == "Compose") {
      if (args.size() < 2) fail("Compose takes at least two arguments");
      FunctorExpr e = args.back();
      for (std::size_t i = args.size() - 1; i-- > 0;) e = FunctorExpr::compose(args[i], e);
      return e;
    }
    fail("unknown functor '" + name + "'");
  }

  // ZZ, ZZ^k, ZZ/m, ZZ^k/<(a,b),(c,d)>
  FPModule module() {
    expect("ZZ");
    std::size_t k = 1;
    if (eat("^")) {
      long v = integer();
      if (v < 0) fail("negative rank");
      k = static_cast<std::size_t>(v);
    }
    std::vector<std::vector<long>> rows;
    if (eat("/")) {
      if (eat("<")) {
        do {
          expect("(");
          std::vector<long> row{integer()};
          while (eat(",")) row.push_back(integer());
          expect(")");
          if (row.size() != k) fail("relation length differs from rank");
          rows.push_back(row);
        } while (eat(","));
        expect(">");
      } else {
        if (k != 1) fail("ZZ^k/m is ambiguous; use ZZ^k/<(...)>");
        rows.push_back({integer()});
      }
    }
    return FPModule::integral(k, rows);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

FunctorExpr FunctorExpr::parse(const std::string& text) { return ExprParser(text).parse(); }

// ---------------------------------------------------------------- PolyMatrix

PolyMatrix::PolyMatrix(const BaseRing& r, const VarSet& v, std::size_t rws, std::size_t cls)
    : rows(rws), cols(cls), vars(v), ring(r), entries(rws * cls, MultiPoly(r, v)) {}

PolyMatrix PolyMatrix::identity(const BaseRing& r, const VarSet& v, std::size_t n) {
  PolyMatrix m(r, v, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = MultiPoly::constant(r, v, RingElem::one(r));
  return m;
}

PolyMatrix PolyMatrix::from_integers(const std::vector<std::vector<long>>& a, const VarSet& v) {
  return from_integers(a, a.empty() ? 0 : a[0].size(), v);
}

PolyMatrix PolyMatrix::from_integers(const std::vector<std::vector<long>>& a, std::size_t c, const VarSet& v) {
  PolyMatrix m(ZZ(), v, a.size(), c);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != c) throw Error("from_integers: ragged matrix");
    for (std::size_t j = 0; j < c; ++j)
      if (a[i][j]) m.at(i, j) = MultiPoly::constant(ZZ(), v, RingElem(ZZ(), a[i][j]));
  }
  return m;
}

PolyMatrix PolyMatrix::generic(std::size_t rws, std::size_t cls, const std::string& stem) {
  std::vector<std::string> names;
  bool wide = rws >= 10 || cls >= 10;
  for (std::size_t i = 1; i <= rws; ++i)
    for (std::size_t j = 1; j <= cls; ++j)
      names.push_back(stem + std::to_string(i) + (wide ? "_" : "") + std::to_string(j));
  VarSet v(names);
  PolyMatrix m(ZZ(), v, rws, cls);
  for (std::size_t k = 0; k < names.size(); ++k) m.entries[k] = MultiPoly::variable(ZZ(), v, k);
  return m;
}

PolyMatrix PolyMatrix::transpose() const {
  PolyMatrix t(ring, vars, cols, rows);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
  return t;
}

PolyMatrix PolyMatrix::substitute(const std::vector<MultiPoly>& images) const {
  VarSet target = images.empty() ? vars : images.front().vars();
  PolyMatrix r(ring, target, rows, cols);
  for (std::size_t k = 0; k < entries.size(); ++k) r.entries[k] = entries[k].substitute(images);
  return r;
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols != b.rows) throw Error("PolyMatrix product: dimension mismatch");
  PolyMatrix r(a.ring, a.vars, a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t l = 0; l < a.cols; ++l) {
      const auto& x = a.at(i, l);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols; ++j)
        if (!b.at(l, j).is_zero()) r.at(i, j) += x * b.at(l, j);
    }
  return r;
}

IntMatrix PolyMatrix::to_integers() const {
  IntMatrix m(rows, std::vector<mpz_class>(cols, 0));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const auto& e = at(i, j);
      if (e.is_zero()) continue;
      if (!e.is_constant()) throw Error("to_integers: entry " + e.to_string() + " is not constant");
      m[i][j] = e.coefficient(Monomial(e.nvars())).as_integer();
    }
  return m;
}

// ----------------------------------------------------------------- evaluation

namespace {

std::vector<std::vector<std::size_t>> subsets(std::size_t n, unsigned d) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (cur.size() == d) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

std::size_t binom(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::size_t rank_at(const FunctorExpr& e, std::size_t n);

std::size_t rank_at(const FunctorExpr& e, std::size_t n) {
  using K = FunctorExpr::Kind;
  switch (e.kind()) {
    case K::Const: return e.module().ngens;
    case K::Id: return n;
    case K::Sym: return e.param() == 0 ? 1 : binom(n + e.param() - 1, e.param());
    case K::Ext: return binom(n, e.param());
    case K::Tensor: {
      std::size_t r = 1;
      for (const auto& c : e.children()) r *= rank_at(c, n);
      return r;
    }
    case K::DirectSum: {
      std::size_t r = 0;
      for (const auto& c : e.children()) r += rank_at(c, n);
      return r;
    }
    case K::Compose: return rank_at(e.children()[0], rank_at(e.children()[1], n));
    case K::Shift: return rank_at(e.children()[0], n + e.param());
    case K::Dual: return rank_at(e.children()[0], n);
  }
  return 0;
}

// Determinant by expansion along the first column.
MultiPoly det(const PolyMatrix& m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
  if (rows.empty()) return one_poly(m.vars);
  if (rows.size() == 1) return m.at(rows[0], cols[0]);
  MultiPoly acc = zero_poly(m.vars);
  std::vector<std::size_t> rest_cols(cols.begin() + 1, cols.end());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& a = m.at(rows[k], cols[0]);
    if (a.is_zero()) continue;
    std::vector<std::size_t> rest_rows = rows;
    rest_rows.erase(rest_rows.begin() + static_cast<std::ptrdiff_t>(k));
    MultiPoly t = a * det(m, rest_rows, rest_cols);
    if (k % 2) acc -= t;
    else acc += t;
  }
  return acc;
}

PolyMatrix apply_sym(unsigned d, const PolyMatrix& phi) {
  const std::size_t ns = phi.cols, nt = phi.rows;
  auto src = monomials_of_degree(ns, d);
  auto tgt = monomials_of_degree(nt, d);
  PolyMatrix out(ZZ(), phi.vars, tgt.size(), src.size());
  if (src.empty() || tgt.empty()) return out;
  if (d == 0) {
    out.at(0, 0) = one_poly(phi.vars);
    return out;
  }
  std::map<Monomial, std::size_t> tindex;
  for (std::size_t i = 0; i < tgt.size(); ++i) tindex[tgt[i]] = i;

  // Expand in k[f_1..f_nt, vars] and read off coefficients of f^gamma.
  std::vector<std::string> names;
  for (std::size_t i = 0; i < nt; ++i) names.push_back("#f" + std::to_string(i));
  VarSet W = VarSet(names) + phi.vars;
  std::vector<std::size_t> shift(phi.vars.size());
  for (std::size_t i = 0; i < shift.size(); ++i) shift[i] = nt + i;
  std::vector<std::vector<MultiPoly>> pw(ns);
  for (std::size_t j = 0; j < ns; ++j) {
    MultiPoly L(ZZ(), W);
    for (std::size_t i = 0; i < nt; ++i) {
      if (phi.at(i, j).is_zero()) continue;
      L += phi.at(i, j).embed(W, shift) * MultiPoly::variable(ZZ(), W, i);
    }
    pw[j].push_back(one_poly(W));
    for (unsigned e = 1; e <= d; ++e) pw[j].push_back(pw[j].back() * L);
  }
  for (std::size_t b = 0; b < src.size(); ++b) {
    MultiPoly prod = one_poly(W);
    for (std::size_t j = 0; j < ns && !prod.is_zero(); ++j)
      if (src[b][j]) prod = prod * pw[j][src[b][j]];
    for (const auto& [m, c] : prod.terms()) {
      Monomial g(nt), rest(phi.vars.size());
      for (std::size_t i = 0; i < nt; ++i) g.set(i, m[i]);
      for (std::size_t i = 0; i < rest.size(); ++i) rest.set(i, m[nt + i]);
      out.at(tindex.at(g), b).add_term(rest, c);
    }
  }
  return out;
}

PolyMatrix apply_ext(unsigned d, const PolyMatrix& phi) {
  auto src = subsets(phi.cols, d);
  auto tgt = subsets(phi.rows, d);
  PolyMatrix out(ZZ(), phi.vars, tgt.size(), src.size());
  for (std::size_t a = 0; a < tgt.size(); ++a)
    for (std::size_t b = 0; b < src.size(); ++b) out.at(a, b) = det(phi, tgt[a], src[b]);
  return out;
}

PolyMatrix kronecker(const PolyMatrix& a, const PolyMatrix& b) {
  PolyMatrix out(ZZ(), a.vars, a.rows * b.rows, a.cols * b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) {
      const auto& x = a.at(i, j);
      if (x.is_zero()) continue;
      for (std::size_t k = 0; k < b.rows; ++k)
        for (std::size_t l = 0; l < b.cols; ++l)
          if (!b.at(k, l).is_zero()) out.at(i * b.rows + k, j * b.cols + l) = x * b.at(k, l);
    }
  return out;
}

PolyMatrix apply_rec(const FunctorExpr& e, const PolyMatrix& phi) {
  using K = FunctorExpr::Kind;
  switch (e.kind()) {
    case K::Const: return PolyMatrix::identity(ZZ(), phi.vars, e.module().ngens);
    case K::Id: return phi;
    case K::Sym: return apply_sym(e.param(), phi);
    case K::Ext: return apply_ext(e.param(), phi);
    case K::Tensor: {
      PolyMatrix acc = apply_rec(e.children()[0], phi);
      for (std::size_t i = 1; i < e.children().size(); ++i) acc = kronecker(acc, apply_rec(e.children()[i], phi));
      return acc;
    }
    case K::DirectSum: {
      std::vector<PolyMatrix> blocks;
      std::size_t r = 0, c = 0;
      for (const auto& ch : e.children()) {
        blocks.push_back(apply_rec(ch, phi));
        r += blocks.back().rows;
        c += blocks.back().cols;
      }
      PolyMatrix out(ZZ(), phi.vars, r, c);
      std::size_t r0 = 0, c0 = 0;
      for (const auto& b : blocks) {
        for (std::size_t i = 0; i < b.rows; ++i)
          for (std::size_t j = 0; j < b.cols; ++j) out.at(r0 + i, c0 + j) = b.at(i, j);
        r0 += b.rows;
        c0 += b.cols;
      }
      return out;
    }
    case K::Compose: return apply_rec(e.children()[0], apply_rec(e.children()[1], phi));
    case K::Shift: {
      const std::size_t m = e.param();
      PolyMatrix big(ZZ(), phi.vars, m + phi.rows, m + phi.cols);
      for (std::size_t i = 0; i < m; ++i) big.at(i, i) = one_poly(phi.vars);
      for (std::size_t i = 0; i < phi.rows; ++i)
        for (std::size_t j = 0; j < phi.cols; ++j) big.at(m + i, m + j) = phi.at(i, j);
      return apply_rec(e.children()[0], big);
    }
    case K::Dual: return apply_rec(e.children()[0], phi.transpose()).transpose();
  }
  throw Error("apply_law: unknown node");
}

std::string wrap(const std::string& s) {
  return s.find_first_of("*^/(+ ") == std::string::npos ? s : "(" + s + ")";
}

std::vector<std::string> labels_rec(const FunctorExpr& e, const std::vector<std::string>& gens) {
  using K = FunctorExpr::Kind;
  std::vector<std::string> out;
  switch (e.kind()) {
    case K::Const:
      for (std::size_t i = 1; i <= e.module().ngens; ++i) out.push_back("c" + std::to_string(i));
      return out;
    case K::Id: return gens;
    case K::Sym:
      for (const auto& m : monomials_of_degree(gens.size(), e.param())) {
        std::string s;
        for (std::size_t i = 0; i < gens.size(); ++i) {
          if (!m[i]) continue;
          if (!s.empty()) s += "*";
          s += wrap(gens[i]);
          if (m[i] > 1) s += "^" + std::to_string(m[i]);
        }
        out.push_back(s.empty() ? "1" : s);
      }
      return out;
    case K::Ext:
      for (const auto& S : subsets(gens.size(), e.param())) {
        std::string s;
        for (auto i : S) s += (s.empty() ? "" : "/\\") + wrap(gens[i]);
        out.push_back(s.empty() ? "1" : s);
      }
      return out;
    case K::Tensor: {
      out = {""};
      for (const auto& c : e.children()) {
        auto ls = labels_rec(c, gens);
        std::vector<std::string> next;
        for (const auto& a : out)
          for (const auto& b : ls) next.push_back(a.empty() ? wrap(b) : a + "(x)" + wrap(b));
        out = std::move(next);
      }
      return out;
    }
    case K::DirectSum:
      for (std::size_t k = 0; k < e.children().size(); ++k)
        for (const auto& l : labels_rec(e.children()[k], gens)) out.push_back("[" + std::to_string(k + 1) + "]" + l);
      return out;
    case K::Compose: return labels_rec(e.children()[0], labels_rec(e.children()[1], gens));
    case K::Shift: {
      std::vector<std::string> g;
      for (std::size_t i = 1; i <= e.param(); ++i) g.push_back("u" + std::to_string(i));
      g.insert(g.end(), gens.begin(), gens.end());
      return labels_rec(e.children()[0], g);
    }
    case K::Dual:
      for (const auto& l : labels_rec(e.children()[0], gens)) out.push_back(wrap(l) + "*");
      return out;
  }
  return out;
}

FPModule module_rec(const FunctorExpr& e, std::size_t n) {
  using K = FunctorExpr::Kind;
  switch (e.kind()) {
    case K::Const: return e.module();
    case K::DirectSum: {
      FPModule M = module_rec(e.children()[0], n);
      for (std::size_t i = 1; i < e.children().size(); ++i) M = M.direct_sum(module_rec(e.children()[i], n));
      return M;
    }
    case K::Compose: return module_rec(e.children()[0], rank_at(e.children()[1], n));
    case K::Shift: return module_rec(e.children()[0], n + e.param());
    default: return FPModule::free(ZZ(), rank_at(e, n));
  }
}

std::mutex cache_mutex;
std::unordered_map<std::string, FunctorEval> eval_cache;

}  // namespace

FunctorEval evaluate(const FunctorExpr& expr, std::size_t n) {
  const std::string key = expr.to_string() + "#" + std::to_string(n);
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = eval_cache.find(key);
    if (it != eval_cache.end()) return it->second;
  }
  std::vector<std::string> gens;
  for (std::size_t i = 1; i <= n; ++i) gens.push_back("e" + std::to_string(i));
  FunctorEval ev{expr, n, module_rec(expr, n), labels_rec(expr, gens)};
  if (ev.labels.size() != ev.module.ngens) throw Error("evaluate: label count mismatch for " + key);
  std::lock_guard<std::mutex> lock(cache_mutex);
  eval_cache[key] = ev;
  return ev;
}

PolyMatrix apply_law(const FunctorExpr& expr, const PolyMatrix& phi) {
  PolyMatrix out = apply_rec(expr, phi);
  if (out.rows != rank_at(expr, phi.rows) || out.cols != rank_at(expr, phi.cols))
    throw Error("apply_law: shape mismatch for " + expr.to_string());
  return out;
}

PolyMatrix symbolic_law(const FunctorExpr& expr, std::size_t n_src, std::size_t n_tgt) {
  return apply_law(expr, PolyMatrix::generic(n_tgt, n_src, "phi"));
}

FunctorEval dual(const FunctorExpr& expr, std::size_t n) { return evaluate(FunctorExpr::dual(expr), n); }

// -------------------------------------------------------- homogeneous parts

namespace {

std::vector<std::vector<mpz_class>> column_image(const IntMatrix& m, std::size_t dim) {
  RationalField k;
  EchelonBasis<RationalField> eb(k, dim);
  std::vector<std::vector<mpz_class>> out;
  for (std::size_t j = 0; j < dim; ++j) {
    std::vector<mpq_class> col(dim);
    std::vector<mpz_class> icol(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      col[i] = m[i][j];
      icol[i] = m[i][j];
    }
    if (eb.insert(col)) out.push_back(icol);
  }
  return out;
}

PolyMatrix diag_t(std::size_t m, std::size_t n, const VarSet& tv, bool ones_first) {
  PolyMatrix d(ZZ(), tv, m + n, m + n);
  for (std::size_t i = 0; i < m + n; ++i) {
    bool first = i < m;
    if (first == ones_first) d.at(i, i) = one_poly(tv);
    else if (tv.size()) d.at(i, i) = MultiPoly::variable(ZZ(), tv, 0);
  }
  return d;
}

}  // namespace

std::map<unsigned, std::vector<std::vector<mpz_class>>> homogeneous_parts(const FunctorExpr& expr, std::size_t n) {
  VarSet tv({"t"});
  PolyMatrix Mt = apply_law(expr, diag_t(0, n, tv, true));
  const std::size_t dim = Mt.rows;
  long top = -1;
  for (const auto& e : Mt.entries) top = std::max(top, e.total_degree());
  std::map<unsigned, std::vector<std::vector<mpz_class>>> parts;
  for (long i = 0; i <= top; ++i) {
    IntMatrix C(dim, std::vector<mpz_class>(dim, 0));
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c)
        C[r][c] = Mt.at(r, c).coefficient(Monomial{static_cast<unsigned>(i)}).as_integer();
    auto img = column_image(C, dim);
    if (!img.empty()) parts[static_cast<unsigned>(i)] = std::move(img);
  }
  return parts;
}

// ------------------------------------------------------------------- shifting

ShiftDecomposition shift_decompose(const FunctorExpr& expr, unsigned m, std::size_t n) {
  ShiftDecomposition sd;
  sd.m = m;
  sd.n = n;
  sd.idempotent = apply_law(expr, diag_t(m, n, VarSet{}, false)).to_integers();
  const std::size_t N = sd.idempotent.size();
  IntMatrix one_minus_e = sd.idempotent;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) one_minus_e[i][j] = (i == j ? 1 : 0) - sd.idempotent[i][j];
  sd.p_part = integer_kernel(one_minus_e, N);
  sd.q_part = integer_kernel(sd.idempotent, N);
  if (sd.p_part.size() + sd.q_part.size() != N) throw ConsistencyError("shift_decompose: e is not idempotent");

  // Degrees on Q: Sh(P)(t id_V) = P(diag(I_m, t I_n)) restricted to ker e.
  VarSet tv({"t"});
  PolyMatrix Mt = apply_law(expr, diag_t(m, n, tv, true));
  for (const auto& v : sd.q_part) {
    for (std::size_t i = 0; i < N; ++i) {
      MultiPoly acc(ZZ(), tv);
      for (std::size_t j = 0; j < N; ++j)
        if (sgn(v[j]) != 0) acc += Mt.at(i, j).scaled(RingElem(ZZ(), v[j]));
      sd.q_degree = std::max(sd.q_degree, acc.total_degree());
    }
  }
  if (!sd.q_part.empty() && sd.q_degree >= static_cast<long>(expr.degree()))
    throw ConsistencyError("shift_decompose: Q part of " + expr.to_string() + " has degree " +
                           std::to_string(sd.q_degree) + ", not below " + std::to_string(expr.degree()));
  return sd;
}

std::size_t q_fiber_dimension(const FunctorExpr& expr, const ShiftDecomposition& sd, std::uint64_t p) {
  FPModule M = evaluate(expr, sd.m + sd.n).module;
  const std::size_t N = M.ngens;
  IntMatrix stacked = M.integer_relations();
  for (std::size_t j = 0; j < N; ++j) {
    std::vector<mpz_class> col(N);
    for (std::size_t i = 0; i < N; ++i) col[i] = sd.idempotent[i][j];
    stacked.push_back(col);
  }
  return N - rank_over(stacked, p);
}

// ---------------------------------------------------------- dimension polys

long DimPolynomial::degree() const {
  return static_cast<long>(binomial_coeffs.size()) - 1;
}

std::string DimPolynomial::to_string() const {
  BaseRing QQ = BaseRing::rationals();
  VarSet v({"n"});
  MultiPoly f(QQ, v);
  for (std::size_t k = 0; k < monomial_coeffs.size(); ++k)
    if (sgn(monomial_coeffs[k]) != 0) f.add_term(Monomial{static_cast<unsigned>(k)}, RingElem(QQ, monomial_coeffs[k]));
  return f.to_string();
}

DimPolynomial fit_dimension_polynomial(const std::vector<long>& values, unsigned max_degree) {
  DimPolynomial out;
  out.values = values;
  // Forward differences at 0 give the coefficients in the basis C(n, k).
  std::vector<mpz_class> row(values.begin(), values.end());
  std::vector<mpz_class> diffs;
  while (!row.empty()) {
    diffs.push_back(row[0]);
    for (std::size_t i = 0; i + 1 < row.size(); ++i) row[i] = row[i + 1] - row[i];
    row.pop_back();
  }
  for (std::size_t k = max_degree + 1; k < diffs.size(); ++k)
    if (sgn(diffs[k]) != 0)
      throw ConsistencyError("dimension values do not fit a polynomial of degree <= " + std::to_string(max_degree));
  if (diffs.size() > max_degree + 1) diffs.resize(max_degree + 1);
  while (!diffs.empty() && sgn(diffs.back()) == 0) diffs.pop_back();
  out.binomial_coeffs = diffs;
  // Expand C(n, k) = n (n-1) ... (n-k+1) / k!.
  out.monomial_coeffs.assign(diffs.size(), 0);
  std::vector<mpq_class> falling{1};
  mpz_class fact = 1;
  for (std::size_t k = 0; k < diffs.size(); ++k) {
    if (k > 0) {
      std::vector<mpq_class> next(falling.size() + 1, 0);
      for (std::size_t i = 0; i < falling.size(); ++i) {
        next[i + 1] += falling[i];
        next[i] -= falling[i] * static_cast<long>(k - 1);
      }
      falling = std::move(next);
      fact *= static_cast<long>(k);
    }
    for (std::size_t i = 0; i < falling.size(); ++i) out.monomial_coeffs[i] += diffs[k] * falling[i] / fact;
  }
  for (auto& c : out.monomial_coeffs) c.canonicalize();
  return out;
}

DimReport dimension_function(const FunctorExpr& expr, const std::vector<std::uint64_t>& primes, std::size_t window) {
  if (window < expr.degree() + 1)
    throw Error("dimension_function: window " + std::to_string(window) + " is below degree + 1 = " +
                std::to_string(expr.degree() + 1));
  std::vector<std::uint64_t> ps{0};
  for (auto p : primes) {
    if (p != 0 && !is_prime(mpz_class(static_cast<unsigned long>(p))))
      throw Error("dimension_function: " + std::to_string(p) + " is not prime");
    if (p != 0) ps.push_back(p);
  }
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());

  std::vector<ShiftDecomposition> shifts;
  for (std::size_t n = 0; n < window; ++n) shifts.push_back(shift_decompose(expr, 1, n));

  DimReport rep;
  rep.expr = expr;
  rep.window = window;
  for (auto p : ps) {
    std::vector<long> direct, rec;
    for (std::size_t n = 0; n <= window; ++n)
      direct.push_back(static_cast<long>(fiber_dimension(evaluate(expr, n).module, p)));
    rec.push_back(direct[0]);
    for (std::size_t n = 0; n < window; ++n)
      rec.push_back(rec.back() + static_cast<long>(q_fiber_dimension(expr, shifts[n], p)));
    if (rec != direct) {
      std::ostringstream os;
      os << "dimension_function: direct and recursive dimensions differ for " << expr.to_string() << " at p = " << p;
      throw ConsistencyError(os.str());
    }
    rep.per_prime[p] = fit_dimension_polynomial(direct, expr.degree());
    rep.recursion_values[p] = rec;
  }
  for (auto p : ps)
    if (p != 0 && !(rep.per_prime[p] == rep.per_prime[0])) rep.flagged.push_back(p);
  return rep;
}

}  // namespace pfcalc
