#include "haarshift/smith.hpp"

#include <stdexcept>
#include <utility>

namespace haarshift {

namespace {

IntMatrix identity_matrix(std::size_t n) {
  IntMatrix m(n, std::vector<Int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

struct Tracker {
  IntMatrix& a;
  IntMatrix& u;
  IntMatrix& uinv;

  // Row ops act as E*A on the left; U picks up E, U^{-1} picks up E^{-1}
  // on the right (column operations on uinv).
  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    std::swap(a[i], a[j]);
    std::swap(u[i], u[j]);
    for (auto& row : uinv) std::swap(row[i], row[j]);
  }

  void add_row(std::size_t dst, std::size_t src, const Int& c) {
    if (c == 0) return;
    for (std::size_t k = 0; k < a[dst].size(); ++k) a[dst][k] += c * a[src][k];
    for (std::size_t k = 0; k < u[dst].size(); ++k) u[dst][k] += c * u[src][k];
    for (auto& row : uinv) row[src] -= c * row[dst];
  }

  void negate_row(std::size_t i) {
    for (auto& v : a[i]) v = -v;
    for (auto& v : u[i]) v = -v;
    for (auto& row : uinv) row[i] = -row[i];
  }

  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (auto& row : a) std::swap(row[i], row[j]);
  }

  void add_col(std::size_t dst, std::size_t src, const Int& c) {
    if (c == 0) return;
    for (auto& row : a) row[dst] += c * row[src];
  }
};

}  // namespace

SmithDecomposition smith_normal_form(IntMatrix a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  for (const auto& row : a) {
    if (row.size() != cols) throw std::invalid_argument("smith_normal_form: ragged matrix");
  }

  IntMatrix u = identity_matrix(rows);
  IntMatrix uinv = identity_matrix(rows);
  Tracker t{a, u, uinv};

  const std::size_t steps = rows < cols ? rows : cols;
  for (std::size_t k = 0; k < steps; ++k) {
    for (;;) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      std::size_t pi = k, pj = k;
      bool found = false;
      for (std::size_t i = k; i < rows; ++i) {
        for (std::size_t j = k; j < cols; ++j) {
          if (a[i][j] == 0) continue;
          if (!found || mpz_cmpabs(a[i][j].get_mpz_t(), a[pi][pj].get_mpz_t()) < 0) {
            pi = i;
            pj = j;
            found = true;
          }
        }
      }
      if (!found) break;  // trailing block is zero; done with this k and all later
      t.swap_rows(k, pi);
      t.swap_cols(k, pj);

      bool reduced = true;
      for (std::size_t i = k + 1; i < rows; ++i) {
        if (a[i][k] == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a[i][k].get_mpz_t(), a[k][k].get_mpz_t());
        t.add_row(i, k, -q);
        if (a[i][k] != 0) reduced = false;
      }
      for (std::size_t j = k + 1; j < cols; ++j) {
        if (a[k][j] == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a[k][j].get_mpz_t(), a[k][k].get_mpz_t());
        t.add_col(j, k, -q);
        if (a[k][j] != 0) reduced = false;
      }
      if (!reduced) continue;

      // Pivot divides every remaining entry, or we fold an offending row in
      // and reduce again.
      bool divides_all = true;
      for (std::size_t i = k + 1; i < rows && divides_all; ++i) {
        for (std::size_t j = k + 1; j < cols; ++j) {
          if (!mpz_divisible_p(a[i][j].get_mpz_t(), a[k][k].get_mpz_t())) {
            t.add_row(k, i, 1);
            divides_all = false;
            break;
          }
        }
      }
      if (divides_all) break;
    }
    if (a[k][k] < 0) t.negate_row(k);
  }

  SmithDecomposition out;
  out.diagonal.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) out.diagonal.push_back(a[k][k]);
  out.row_ops = std::move(u);
  out.row_ops_inv = std::move(uinv);
  return out;
}

}  // namespace haarshift
