#pragma once

#include "pfcalc/geometry.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace pfcalc::cli {

/// On-disk store of Groebner bases keyed by the SHA-256 of the input
/// generators, monomial order and field tag.
class GbCache {
 public:
  static constexpr const char* kVersion = "pfcalc-gb-cache/1";

  explicit GbCache(std::filesystem::path dir, std::string version = kVersion, std::ostream* warnings = nullptr);

  std::string key(const std::vector<MultiPoly>& F, MonomialOrder order) const;
  std::optional<GroebnerBasis> lookup(const std::string& key) const;
  void store(const std::string& key, const GroebnerBasis& G) const;

  /// Raw stored bytes for a key, if present.
  std::optional<std::string> raw(const std::string& key) const;

  /// Hook for GeometryOptions::groebner: lookup, else compute and store.
  GroebnerFn hook() const;

  std::size_t hits() const { return *hits_; }
  std::size_t misses() const { return *misses_; }

 private:
  std::filesystem::path dir_;
  std::string version_;
  std::ostream* warn_;
  std::shared_ptr<std::size_t> hits_ = std::make_shared<std::size_t>(0);
  std::shared_ptr<std::size_t> misses_ = std::make_shared<std::size_t>(0);
  std::filesystem::path path_of(const std::string& key) const { return dir_ / (key + ".gb"); }
};

std::string sha256_hex(const std::string& data);

/// Line-based text form: version, ring tag, order, variables, then one line
/// per generator listing "coefficient e1 e2 ..." terms separated by " ; ".
std::string serialize_basis(const GroebnerBasis& G, const std::string& version);
/// nullopt on any malformed input or version mismatch.
std::optional<GroebnerBasis> deserialize_basis(const std::string& text, const std::string& version);

}  // namespace pfcalc::cli
