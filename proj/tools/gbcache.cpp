#include "gbcache.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>

namespace pfcalc::cli {

namespace {

std::mutex io_mutex;

std::string order_tag(MonomialOrder o) { return o.to_string(); }

std::string vars_line(const VarSet& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + v.name(i) + ":" + std::to_string(v.weight(i));
  return s;
}

std::string coeff_text(const RingElem& c) {
  if (c.ring().kind() == BaseRing::Kind::PrimeField) return std::to_string(c.as_residue());
  if (c.ring().kind() == BaseRing::Kind::Integers) return c.as_integer().get_str();
  return c.as_rational().get_str();
}

std::string poly_line(const MultiPoly& f) {
  std::string s;
  bool first = true;
  for (const auto& [m, c] : f.terms()) {
    s += first ? "" : " ; ";
    first = false;
    s += coeff_text(c);
    for (std::size_t i = 0; i < m.size(); ++i) s += " " + std::to_string(m[i]);
  }
  return s;
}

std::optional<MonomialOrder> parse_order(const std::string& s) {
  for (auto o : {MonomialOrder::lex(), MonomialOrder::grevlex()})
    if (o.to_string() == s) return o;
  for (std::size_t b = 0; b <= kMaxVars; ++b)
    if (MonomialOrder::elimination(b).to_string() == s) return MonomialOrder::elimination(b);
  return std::nullopt;
}

}  // namespace

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return out.str();
}

std::string serialize_basis(const GroebnerBasis& G, const std::string& version) {
  std::string s = version + "\n" + G.ring.tag() + "\n" + order_tag(G.order) + "\n" + vars_line(G.vars) + "\n" +
                  std::to_string(G.generators.size()) + "\n";
  for (const auto& g : G.generators) s += poly_line(g) + "\n";
  return s;
}

std::optional<GroebnerBasis> deserialize_basis(const std::string& text, const std::string& version) {
  try {
    std::istringstream in(text);
    std::string line, tag, order_line, vline, count;
    if (!std::getline(in, line) || line != version) return std::nullopt;
    if (!std::getline(in, tag) || !std::getline(in, order_line) || !std::getline(in, vline) ||
        !std::getline(in, count))
      return std::nullopt;
    BaseRing ring = BaseRing::parse(tag);
    auto order = parse_order(order_line);
    if (!order) return std::nullopt;
    std::vector<std::string> names;
    std::vector<unsigned> weights;
    std::istringstream vs(vline);
    for (std::string tok; vs >> tok;) {
      auto colon = tok.rfind(':');
      if (colon == std::string::npos) return std::nullopt;
      names.push_back(tok.substr(0, colon));
      weights.push_back(static_cast<unsigned>(std::stoul(tok.substr(colon + 1))));
    }
    VarSet vars(names, weights);
    std::size_t k = std::stoul(count);
    GroebnerBasis G{ring, vars, *order, {}, {}};
    MonomialComparator cmp(vars, *order);
    for (std::size_t i = 0; i < k; ++i) {
      if (!std::getline(in, line)) return std::nullopt;
      MultiPoly f(ring, vars);
      std::istringstream ts(line);
      std::string term;
      while (std::getline(ts, term, ';')) {
        std::istringstream es(term);
        std::string c;
        if (!(es >> c)) return std::nullopt;
        Monomial m(vars.size());
        for (std::size_t v = 0; v < vars.size(); ++v) {
          unsigned e;
          if (!(es >> e)) return std::nullopt;
          m.set(v, e);
        }
        f.add_term(m, RingElem(ring, mpq_class(c)));
      }
      if (f.is_zero()) return std::nullopt;
      G.leading_monomials.push_back(f.leading_monomial(cmp));
      G.generators.push_back(f);
    }
    if (std::getline(in, line)) return std::nullopt;
    return G;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

GbCache::GbCache(std::filesystem::path dir, std::string version, std::ostream* warnings)
    : dir_(std::move(dir)), version_(std::move(version)), warn_(warnings) {
  std::filesystem::create_directories(dir_);
}

std::string GbCache::key(const std::vector<MultiPoly>& F, MonomialOrder order) const {
  std::string s = version_ + "\n" + order_tag(order) + "\n";
  if (!F.empty()) s += F[0].ring().tag() + "\n" + vars_line(F[0].vars()) + "\n";
  for (const auto& f : F) s += poly_line(f) + "\n";
  return sha256_hex(s);
}

std::optional<std::string> GbCache::raw(const std::string& key) const {
  std::lock_guard<std::mutex> lock(io_mutex);
  std::ifstream in(path_of(key), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::optional<GroebnerBasis> GbCache::lookup(const std::string& key) const {
  auto bytes = raw(key);
  if (!bytes) return std::nullopt;
  auto G = deserialize_basis(*bytes, version_);
  if (!G || serialize_basis(*G, version_) != *bytes) {
    // Old version tags are expected; anything else is damage.
    if (warn_ && bytes->rfind(version_ + "\n", 0) == 0)
      *warn_ << "warning: ignoring corrupt cache entry " << path_of(key).string() << "\n";
    return std::nullopt;
  }
  return G;
}

void GbCache::store(const std::string& key, const GroebnerBasis& G) const {
  std::lock_guard<std::mutex> lock(io_mutex);
  auto tmp = path_of(key);
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << serialize_basis(G, version_);
  }
  std::filesystem::rename(tmp, path_of(key));
}

GroebnerFn GbCache::hook() const {
  GbCache self = *this;
  return [self](const std::vector<MultiPoly>& F, MonomialOrder order, const GroebnerOptions& opts) {
    const std::string k = self.key(F, order);
    if (auto hit = self.lookup(k)) {
      std::lock_guard<std::mutex> lock(io_mutex);
      ++*self.hits_;
      return *hit;
    }
    GroebnerBasis G = buchberger(F, order, opts);
    self.store(k, G);
    std::lock_guard<std::mutex> lock(io_mutex);
    ++*self.misses_;
    return G;
  };
}

}  // namespace pfcalc::cli
