#include "commands.hpp"

#include "pfcalc/coordring.hpp"
#include "pfcalc/schur.hpp"

#include <algorithm>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

namespace pfcalc::cli {

using nlohmann::json;

namespace {

// Typed access to a config object; rejects keys outside the command's schema.
class Config {
 public:
  Config(const json& j, const std::string& command, std::vector<std::string> allowed) : j_(j) {
    if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
    for (const auto& [k, v] : j.items())
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
        throw ConfigError("config: unknown key '" + k + "' for command " + command);
  }

  bool has(const std::string& k) const { return j_.contains(k); }
  const json& at(const std::string& k) const {
    if (!j_.contains(k)) throw ConfigError("config: missing required key '" + k + "'");
    return j_.at(k);
  }

  std::uint64_t uint(const std::string& k) const {
    const json& v = at(k);
    if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError("config: key '" + k + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
  }
  std::uint64_t uint(const std::string& k, std::uint64_t def) const { return has(k) ? uint(k) : def; }

  std::string str(const std::string& k) const {
    const json& v = at(k);
    if (!v.is_string()) throw ConfigError("config: key '" + k + "' must be a string");
    return v.get<std::string>();
  }
  std::string str(const std::string& k, const std::string& def) const { return has(k) ? str(k) : def; }

  std::vector<std::string> strings(const std::string& k) const {
    const json& v = at(k);
    if (!v.is_array()) throw ConfigError("config: key '" + k + "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto& e : v) {
      if (!e.is_string()) throw ConfigError("config: key '" + k + "' must be an array of strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }

  std::vector<std::uint64_t> primes(const std::string& k) const {
    const json& v = at(k);
    if (!v.is_array()) throw ConfigError("config: key '" + k + "' must be an array of primes");
    std::vector<std::uint64_t> out;
    for (const auto& e : v) {
      if (!e.is_number_integer() || e.get<long long>() < 2 || !is_prime(e.get<std::uint64_t>()))
        throw ConfigError("config: key '" + k + "' contains " + e.dump() + ", which is not a prime");
      out.push_back(e.get<std::uint64_t>());
    }
    return out;
  }

  BaseRing ring(const std::string& k, const std::string& def) const {
    const std::string tag = str(k, def);
    try {
      return BaseRing::parse(tag);
    } catch (const Error& e) {
      throw ConfigError("config: key '" + k + "': " + e.what());
    }
  }

  BaseRing field(const std::string& k) const {
    BaseRing r = ring(k, "QQ");
    if (r.kind() != BaseRing::Kind::Rationals && r.kind() != BaseRing::Kind::PrimeField)
      throw ConfigError("config: key '" + k + "' must be QQ or Fp(p), got " + r.tag());
    return r;
  }

  MonomialOrder order(const std::string& k) const {
    const std::string o = str(k, "grevlex");
    if (o == "grevlex") return MonomialOrder::grevlex();
    if (o == "lex") return MonomialOrder::lex();
    throw ConfigError("config: key '" + k + "' must be \"grevlex\" or \"lex\"");
  }

  FunctorExpr functor(const std::string& k) const {
    try {
      return FunctorExpr::parse(str(k));
    } catch (const Error& e) {
      throw ConfigError("config: key '" + k + "': " + e.what());
    }
  }

  VarSet vars(const std::string& k) const {
    auto names = strings(k);
    if (names.empty()) throw ConfigError("config: key '" + k + "' must list at least one variable");
    try {
      return VarSet(names);
    } catch (const Error& e) {
      throw ConfigError("config: key '" + k + "': " + e.what());
    }
  }

  MultiPoly poly(const std::string& k, const std::string& text, const BaseRing& r, const VarSet& v) const {
    try {
      return parse_poly(text, r, v);
    } catch (const Error& e) {
      throw ConfigError("config: key '" + k + "': " + e.what());
    }
  }

  std::vector<MultiPoly> polys(const std::string& k, const BaseRing& r, const VarSet& v) const {
    std::vector<MultiPoly> out;
    for (const auto& t : strings(k)) out.push_back(poly(k, t, r, v));
    return out;
  }

  PolyTransformation transformation() const {
    const json& src = at("source");
    if (!src.is_array() || src.empty()) throw ConfigError("config: key 'source' must be a non-empty array");
    std::vector<SourceComponent> comps;
    for (const auto& c : src) {
      if (!c.is_object()) throw ConfigError("config: entries of 'source' must be objects {name, degree}");
      for (const auto& [kk, vv] : c.items())
        if (kk != "name" && kk != "degree") throw ConfigError("config: unknown key 'source." + kk + "'");
      if (!c.contains("name") || !c["name"].is_string()) throw ConfigError("config: key 'source.name' must be a string");
      unsigned d = 1;
      if (c.contains("degree")) {
        if (!c["degree"].is_number_integer() || c["degree"].get<long long>() < 1)
          throw ConfigError("config: key 'source.degree' must be a positive integer");
        d = c["degree"].get<unsigned>();
      }
      comps.push_back({c["name"].get<std::string>(), d});
    }
    try {
      return PolyTransformation(comps, str("rule"));
    } catch (const SizeGuardExceeded&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(std::string("config: key 'rule': ") + e.what());
    }
  }

 private:
  const json& j_;
};

std::string prime_label(std::uint64_t p) { return p == 0 ? "0" : std::to_string(p); }

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

std::string poly_list(const std::vector<MultiPoly>& G) {
  std::vector<std::string> s;
  for (const auto& g : G) s.push_back(g.to_string());
  return "[" + join(s, ", ") + "]";
}

// A relation entry: an element of R written as a polynomial in t (only
// quotient rings may use t).
RingElem ring_element(const std::string& text, const BaseRing& R) {
  VarSet T({"t"});
  if (R.kind() == BaseRing::Kind::Quotient) {
    MultiPoly f = parse_poly(text, R.coefficient_field(), T);
    RingElem out = RingElem::zero(R), gen = RingElem::generator(R);
    for (const auto& [m, c] : f.terms()) {
      std::vector<mpq_class> coords(R.extension_degree(), 0);
      coords[0] = c.coordinates()[0];
      out += RingElem::from_coordinates(R, coords) * gen.pow(m[0]);
    }
    return out;
  }
  MultiPoly f = parse_poly(text, R, T);
  if (f.degree_in(0) > 0) throw ConfigError("config: key 'relations': t is only available in quotient rings");
  return f.coefficient(Monomial(1));
}

Report ring_of_module(const Config& c) {
  BaseRing R = c.ring("ring", "ZZ");
  const std::size_t n = c.uint("ngens");
  std::vector<std::vector<RingElem>> rels;
  if (c.has("relations")) {
    const json& rj = c.at("relations");
    if (!rj.is_array()) throw ConfigError("config: key 'relations' must be an array of rows");
    for (const auto& row : rj) {
      if (!row.is_array() || row.size() != n)
        throw ConfigError("config: key 'relations' rows must have ngens = " + std::to_string(n) + " entries");
      std::vector<RingElem> r;
      for (const auto& e : row) {
        std::string text = e.is_string() ? e.get<std::string>() : e.dump();
        try {
          r.push_back(ring_element(text, R));
        } catch (const ConfigError&) {
          throw;
        } catch (const Error& ex) {
          throw ConfigError(std::string("config: key 'relations': ") + ex.what());
        }
      }
      rels.push_back(r);
    }
  }
  FPModule M(R, n, rels);
  const unsigned lo = static_cast<unsigned>(c.uint("min_degree", 0)), hi = static_cast<unsigned>(c.uint("max_degree", 6));
  if (lo > hi) throw ConfigError("config: key 'min_degree' exceeds 'max_degree'");
  Report r;
  r.fields = {{"ring", R.tag()}, {"ngens", std::to_string(n)}, {"relations", std::to_string(rels.size())}};
  r.columns = {"degree", "dimension", "basis"};
  for (unsigned d = lo; d <= hi; ++d) {
    auto piece = graded_piece(M, d);
    r.rows.push_back({std::to_string(d), std::to_string(piece.dimension()), poly_list(piece.basis)});
  }
  return r;
}

Report schur_table(const Config& c) {
  const std::size_t n = c.uint("n");
  const unsigned d = static_cast<unsigned>(c.uint("d"));
  if (n == 0) throw ConfigError("config: key 'n' must be positive");
  BaseRing R = c.ring("ring", "ZZ");
  SchurAlgebra A(n, d, R);
  Report r;
  r.fields = {{"n", std::to_string(n)}, {"d", std::to_string(d)}, {"ring", R.tag()},
              {"dimension", std::to_string(A.dimension())}};
  r.columns = {"alpha", "beta", "gamma", "coefficient"};
  for (const auto& sc : A.structure_table())
    r.rows.push_back({A.alpha_to_string(sc.alpha), A.alpha_to_string(sc.beta), A.alpha_to_string(sc.gamma),
                      RingElem(R, sc.c).to_string()});
  return r;
}

Report dimfn(const Config& c) {
  FunctorExpr P = c.functor("functor");
  auto primes = c.has("primes") ? c.primes("primes") : std::vector<std::uint64_t>{};
  const std::size_t window = c.uint("window", P.degree() + 2);
  DimReport rep = dimension_function(P, primes, window);
  Report r;
  r.fields = {{"functor", P.to_string()}, {"degree", std::to_string(P.degree())}, {"window", std::to_string(window)},
              {"generic", rep.generic().to_string()}};
  std::vector<std::string> flagged;
  for (auto p : rep.flagged) flagged.push_back(std::to_string(p));
  r.fields.push_back({"flagged", "[" + join(flagged, ", ") + "]"});
  r.columns = {"prime"};
  for (std::size_t n = 0; n < window; ++n) r.columns.push_back("f(" + std::to_string(n) + ")");
  r.columns.push_back("recursion_agrees");
  r.columns.push_back("polynomial");
  r.columns.push_back("binomial_coeffs");
  for (const auto& [p, poly] : rep.per_prime) {
    std::vector<std::string> row{prime_label(p)};
    for (std::size_t n = 0; n < window; ++n) row.push_back(std::to_string(poly.values[n]));
    row.push_back(rep.recursion_values.at(p) == poly.values ? "yes" : "no");
    row.push_back(poly.to_string());
    std::vector<std::string> bc;
    for (const auto& b : poly.binomial_coeffs) bc.push_back(b.get_str());
    row.push_back("[" + join(bc, ", ") + "]");
    r.rows.push_back(row);
  }
  return r;
}

Report image_closure_cmd(const Config& c, const RunOptions& o) {
  auto a = c.transformation();
  const std::size_t n = c.uint("n");
  BaseRing K = c.field("field");
  auto X = image_closure(a, n, K, o.geometry);
  Report r;
  r.fields = {{"rule", a.rule().to_string()}, {"n", std::to_string(n)}, {"field", K.tag()},
              {"ambient", std::to_string(X.vars.size())}, {"dimension", std::to_string(X.dimension())},
              {"codimension", std::to_string(static_cast<long>(X.vars.size()) - X.dimension())}};
  r.columns = {"index", "generator", "weighted_homogeneous"};
  for (std::size_t i = 0; i < X.gb.generators.size(); ++i)
    r.rows.push_back({std::to_string(i + 1), X.gb.generators[i].to_string(),
                      X.gb.generators[i].is_weighted_homogeneous() ? "yes" : "no"});
  return r;
}

Report dim_per_prime_cmd(const Config& c, const RunOptions& o) {
  auto a = c.transformation();
  const std::size_t n = c.uint("n");
  auto rows = dimension_per_prime(a, n, c.has("primes") ? c.primes("primes") : std::vector<std::uint64_t>{}, o.geometry);
  Report r;
  r.fields = {{"rule", a.rule().to_string()}, {"n", std::to_string(n)}};
  r.columns = {"prime", "dimension", "basis_size", "time_ms"};
  r.csv_only = {"time_ms"};
  for (const auto& d : rows) {
    std::ostringstream t;
    t << std::fixed << std::setprecision(3) << d.time_ms;
    r.rows.push_back({prime_label(d.prime), std::to_string(d.dimension), std::to_string(d.basis_size), t.str()});
  }
  return r;
}

Report good_primes_cmd(const Config& c, const RunOptions& o) {
  VarSet V = c.vars("vars");
  auto I = c.polys("ideal", BaseRing::integers(), V);
  auto primes = c.primes("primes");
  auto rep = good_primes(I, primes, c.order("order"), o.geometry);
  Report r;
  r.fields = {{"generic_basis", poly_list(rep.integer_basis)}, {"r", rep.r.get_str()},
              {"generic_dimension", std::to_string(rep.generic_dimension)}};
  r.columns = {"prime", "verdict", "dimension", "basis_size"};
  for (const auto& v : rep.verdicts)
    r.rows.push_back({prime_label(v.prime), v.good ? "good" : "bad", std::to_string(v.dimension),
                      std::to_string(v.basis.size())});
  return r;
}

Report equivariance_cmd(const Config& c, const RunOptions& o) {
  ClosedSubsetAtRank X;
  const std::size_t n = c.uint("n");
  BaseRing K = c.field("field");
  std::vector<std::pair<std::string, std::string>> extra;
  if (c.has("rule") || c.has("source")) {
    if (c.has("functor") || c.has("ideal") || c.has("vars"))
      throw ConfigError("config: give either 'source'/'rule' or 'functor'/'ideal', not both");
    auto a = c.transformation();
    X = image_closure(a, n, K, o.geometry);
    extra.push_back({"samples_equivariant", transformation_equivariant_on_samples(a, n, 10, o.seed) ? "yes" : "no"});
  } else {
    FunctorExpr P = c.functor("functor");
    VarSet V = c.has("vars") ? c.vars("vars") : functor_coordinates(P, n);
    const std::size_t N = evaluate(P, n).module.ngens;
    if (V.size() != N)
      throw ConfigError("config: key 'vars' lists " + std::to_string(V.size()) + " names but " + P.to_string() +
                        " at rank " + std::to_string(n) + " has " + std::to_string(N) + " coordinates");
    X = closed_subset(P, n, K, V, c.polys("ideal", BaseRing::integers(), V), o.geometry);
  }
  auto rep = equivariance_check(X, o.geometry);
  Report r;
  r.fields = {{"functor", X.functor.to_string()}, {"n", std::to_string(n)}, {"field", K.tag()},
              {"ideal", poly_list(X.gb.generators)}, {"holds", rep.holds ? "true" : "false"},
              {"generators_checked", std::to_string(rep.generators_checked)},
              {"scaling_skipped", rep.scaling_skipped ? "true" : "false"},
              {"scope", "checked on generators"}};
  for (const auto& e : extra) r.fields.push_back(e);
  r.columns = {"failing_generator"};
  for (const auto& f : rep.failures) r.rows.push_back({f});
  return r;
}

Report taylor_cmd(const Config& c) {
  BaseRing K = c.field("field");
  VarSet V = c.vars("vars");
  MultiPoly f = c.poly("f", c.str("f"), K, V);
  const std::size_t m = c.uint("split");
  auto t = taylor_directional(f, m);
  Report r;
  r.fields = {{"f", f.to_string()}, {"field", K.tag()}, {"split", std::to_string(m)}, {"e", std::to_string(t.e)},
              {"q", std::to_string(t.q)}};
  r.columns = {"variable", "h"};
  for (std::size_t i = 0; i < t.h.size(); ++i) r.rows.push_back({V.name(i), t.h[i].to_string()});
  return r;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"ring-of-module", "schur-table", "dimfn",        "image-closure",
                                              "dim-per-prime",  "good-primes", "equivariance", "taylor"};
  return names;
}

Report run_command(const std::string& command, const json& config, const RunOptions& opts) {
  static const std::map<std::string, std::vector<std::string>> schema{
      {"ring-of-module", {"ring", "ngens", "relations", "min_degree", "max_degree"}},
      {"schur-table", {"n", "d", "ring"}},
      {"dimfn", {"functor", "primes", "window"}},
      {"image-closure", {"source", "rule", "n", "field"}},
      {"dim-per-prime", {"source", "rule", "n", "primes"}},
      {"good-primes", {"vars", "ideal", "primes", "order"}},
      {"equivariance", {"source", "rule", "functor", "vars", "ideal", "n", "field"}},
      {"taylor", {"field", "vars", "f", "split"}},
  };
  auto it = schema.find(command);
  if (it == schema.end()) throw ConfigError("unknown command '" + command + "'");
  Config c(config, command, it->second);
  Report r;
  if (command == "ring-of-module") r = ring_of_module(c);
  else if (command == "schur-table") r = schur_table(c);
  else if (command == "dimfn") r = dimfn(c);
  else if (command == "image-closure") r = image_closure_cmd(c, opts);
  else if (command == "dim-per-prime") r = dim_per_prime_cmd(c, opts);
  else if (command == "good-primes") r = good_primes_cmd(c, opts);
  else if (command == "equivariance") r = equivariance_cmd(c, opts);
  else r = taylor_cmd(c);
  r.command = command;
  return r;
}

std::string render(const Report& r, const std::string& format) {
  std::vector<std::size_t> shown;
  for (std::size_t i = 0; i < r.columns.size(); ++i)
    if (format == "csv" || !r.csv_only.count(r.columns[i])) shown.push_back(i);

  if (format == "csv") {
    std::string s;
    for (std::size_t k = 0; k < shown.size(); ++k) s += (k ? "," : "") + csv_cell(r.columns[shown[k]]);
    s += "\n";
    for (const auto& row : r.rows) {
      for (std::size_t k = 0; k < shown.size(); ++k) s += (k ? "," : "") + csv_cell(row[shown[k]]);
      s += "\n";
    }
    return s;
  }
  if (format == "json") {
    nlohmann::ordered_json j;
    j["command"] = r.command;
    nlohmann::ordered_json fields = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.fields) fields[k] = v;
    j["fields"] = fields;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
      nlohmann::ordered_json o;
      for (auto i : shown) o[r.columns[i]] = row[i];
      rows.push_back(o);
    }
    j["rows"] = rows;
    return j.dump(2) + "\n";
  }
  if (format != "text") throw ConfigError("unknown format '" + format + "'");
  std::string s = r.command + "\n";
  for (const auto& [k, v] : r.fields) s += "  " + k + ": " + v + "\n";
  if (r.rows.empty()) return s;
  std::vector<std::size_t> width;
  for (auto i : shown) {
    std::size_t w = r.columns[i].size();
    for (const auto& row : r.rows) w = std::max(w, row[i].size());
    width.push_back(w);
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string l;
    for (std::size_t k = 0; k < shown.size(); ++k) {
      std::string cell = cells[shown[k]];
      if (k + 1 < shown.size()) cell.resize(width[k], ' ');
      l += (k ? "  " : "") + cell;
    }
    return l + "\n";
  };
  s += "\n" + line(r.columns);
  for (const auto& row : r.rows) s += line(row);
  return s;
}

}  // namespace pfcalc::cli
