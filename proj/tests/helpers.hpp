#pragma once

#include "pfcalc/multipoly.hpp"

#include <random>
#include <string>
#include <vector>

namespace testing_util {

inline pfcalc::VarSet vars(std::initializer_list<const char*> names) {
  std::vector<std::string> v(names.begin(), names.end());
  return pfcalc::VarSet(v);
}

inline pfcalc::MultiPoly P(const std::string& text, const pfcalc::BaseRing& r, const pfcalc::VarSet& v) {
  return pfcalc::parse_poly(text, r, v);
}

inline std::vector<pfcalc::MultiPoly> Ps(std::initializer_list<const char*> texts, const pfcalc::BaseRing& r,
                                         const pfcalc::VarSet& v) {
  std::vector<pfcalc::MultiPoly> out;
  for (auto t : texts) out.push_back(P(t, r, v));
  return out;
}

/// Random polynomial with small integer coefficients and total degree <= deg.
inline pfcalc::MultiPoly random_poly(std::mt19937_64& rng, const pfcalc::BaseRing& r, const pfcalc::VarSet& v,
                                     unsigned deg, int terms, long coef_range = 5) {
  pfcalc::MultiPoly f(r, v);
  std::uniform_int_distribution<long> c(-coef_range, coef_range);
  for (int t = 0; t < terms; ++t) {
    pfcalc::Monomial m(v.size());
    unsigned left = std::uniform_int_distribution<unsigned>(0, deg)(rng);
    for (unsigned k = 0; k < left; ++k) {
      std::size_t i = std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng);
      m.set(i, m[i] + 1);
    }
    f.add_term(m, pfcalc::RingElem(r, c(rng)));
  }
  return f;
}

}  // namespace testing_util
