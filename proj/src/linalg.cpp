#include "pfcalc/linalg.hpp"

namespace pfcalc {

std::size_t bareiss_rank(IntMatrix m) {
  const std::size_t rows = m.size();
  if (rows == 0) return 0;
  const std::size_t cols = m[0].size();
  mpz_class prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && sgn(m[piv][c]) == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[r], m[piv]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        m[i][j] = m[r][c] * m[i][j] - m[i][c] * m[r][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      m[i][c] = 0;
    }
    prev = m[r][c];
    ++r;
  }
  return r;
}

std::size_t rank_over(const IntMatrix& m, std::uint64_t p) {
  if (p == 0) return bareiss_rank(m);
  PrimeField k(p);
  if (m.empty()) return 0;
  DenseMatrix<PrimeField> a(k, m.size(), m[0].size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) a(i, j) = k.from_integer(m[i][j]);
  return rank(a);
}

std::vector<mpz_class> smith_invariants(IntMatrix m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::vector<mpz_class> diag;
  std::size_t t = 0;
  while (t < rows && t < cols) {
    // Choose the smallest nonzero entry in the remaining block as pivot.
    std::size_t pi = rows, pj = cols;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (sgn(m[i][j]) != 0 && (pi == rows || abs(m[i][j]) < abs(m[pi][pj]))) {
          pi = i;
          pj = j;
        }
    if (pi == rows) break;
    std::swap(m[t], m[pi]);
    for (auto& row : m) std::swap(row[t], row[pj]);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (sgn(m[i][t]) == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), m[i][t].get_mpz_t(), m[t][t].get_mpz_t());
        for (std::size_t j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
        if (sgn(m[i][t]) != 0) {
          std::swap(m[t], m[i]);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (sgn(m[t][j]) == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), m[t][j].get_mpz_t(), m[t][t].get_mpz_t());
        for (std::size_t i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
        if (sgn(m[t][j]) != 0) {
          for (auto& row : m) std::swap(row[t], row[j]);
          clean = false;
        }
      }
      if (clean) {
        // The pivot must divide every remaining entry.
        for (std::size_t i = t + 1; i < rows && clean; ++i)
          for (std::size_t j = t + 1; j < cols; ++j)
            if (!mpz_divisible_p(m[i][j].get_mpz_t(), m[t][t].get_mpz_t())) {
              for (std::size_t jj = t; jj < cols; ++jj) m[t][jj] += m[i][jj];
              clean = false;
              break;
            }
      }
    }
    diag.push_back(abs(m[t][t]));
    ++t;
  }
  return diag;
}

std::vector<std::vector<mpz_class>> integer_kernel(const IntMatrix& m, std::size_t ncols) {
  // Row-reduce [m^T | I] with unimodular row operations; rows whose left part
  // vanishes span the kernel.
  const std::size_t nrel = m.size();
  std::vector<std::vector<mpz_class>> a(ncols, std::vector<mpz_class>(nrel + ncols, 0));
  for (std::size_t j = 0; j < ncols; ++j) {
    for (std::size_t i = 0; i < nrel; ++i) a[j][i] = m[i][j];
    a[j][nrel + j] = 1;
  }
  std::size_t r = 0;
  for (std::size_t c = 0; c < nrel && r < ncols; ++c) {
    while (true) {
      std::size_t piv = ncols;
      for (std::size_t i = r; i < ncols; ++i)
        if (sgn(a[i][c]) != 0 && (piv == ncols || abs(a[i][c]) < abs(a[piv][c]))) piv = i;
      if (piv == ncols) break;
      std::swap(a[r], a[piv]);
      bool done = true;
      for (std::size_t i = r + 1; i < ncols; ++i) {
        if (sgn(a[i][c]) == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), a[i][c].get_mpz_t(), a[r][c].get_mpz_t());
        for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] -= q * a[r][j];
        if (sgn(a[i][c]) != 0) done = false;
      }
      if (done) {
        ++r;
        break;
      }
    }
  }
  std::vector<std::vector<mpz_class>> kernel;
  for (std::size_t i = r; i < ncols; ++i) {
    kernel.emplace_back(a[i].begin() + static_cast<std::ptrdiff_t>(nrel), a[i].end());
  }
  return kernel;
}

}  // namespace pfcalc
