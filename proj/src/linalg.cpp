#include "enpar/linalg.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "enpar/error.hpp"

namespace enpar {

std::vector<Rat> solve_linear_sparse(int n, std::vector<std::vector<std::pair<int, Rat>>> rows_in,
                                     std::vector<Rat> rhs) {
  if (static_cast<int>(rows_in.size()) != n || static_cast<int>(rhs.size()) != n)
    fail(Err::Internal, "solve_linear_sparse: shape mismatch");

  std::vector<std::map<int, Rat>> rows(n);
  std::vector<std::set<int>> col_rows(n);
  for (int r = 0; r < n; ++r) {
    for (auto& [c, v] : rows_in[r]) {
      if (is_zero(v)) continue;
      auto it = rows[r].find(c);
      if (it == rows[r].end())
        rows[r].emplace(c, v);
      else {
        it->second += v;
        if (is_zero(it->second)) rows[r].erase(it);
      }
    }
    for (auto& [c, v] : rows[r]) col_rows[c].insert(r);
  }

  std::vector<char> row_done(n, 0), col_done(n, 0);
  std::vector<int> pivot_row_of_col(n, -1);
  std::vector<long long> col_live(n, 0);  // entries of the column in not-done rows
  for (int c = 0; c < n; ++c) col_live[c] = static_cast<long long>(col_rows[c].size());
  std::vector<int> elim_order;
  elim_order.reserve(n);

  for (int step = 0; step < n; ++step) {
    // Markowitz-style pivot: sparsest live column, then sparsest row in it.
    int pc = -1;
    long long best_live = std::numeric_limits<long long>::max();
    for (int c = 0; c < n; ++c) {
      if (col_done[c] || col_live[c] == 0) continue;
      if (col_live[c] < best_live) {
        best_live = col_live[c];
        pc = c;
        if (best_live == 1) break;
      }
    }
    if (pc < 0) fail(Err::Internal, "solve_linear_sparse: singular system");
    int pr = -1;
    size_t best_nnz = std::numeric_limits<size_t>::max();
    for (int r : col_rows[pc]) {
      if (row_done[r]) continue;
      if (rows[r].size() < best_nnz) {
        best_nnz = rows[r].size();
        pr = r;
      }
    }
    if (pr < 0) fail(Err::Internal, "solve_linear_sparse: singular system");

    const Rat piv = rows[pr][pc];
    std::vector<int> touched(col_rows[pc].begin(), col_rows[pc].end());
    for (int r : touched) {
      if (r == pr || row_done[r]) continue;
      Rat factor = rows[r][pc] / piv;
      // row r -= factor * row pr
      for (auto& [c, v] : rows[pr]) {
        auto it = rows[r].find(c);
        if (it == rows[r].end()) {
          Rat nv = -factor * v;
          if (!is_zero(nv)) {
            rows[r].emplace(c, nv);
            col_rows[c].insert(r);
            ++col_live[c];
          }
        } else {
          it->second -= factor * v;
          if (is_zero(it->second)) {
            rows[r].erase(it);
            col_rows[c].erase(r);
            --col_live[c];
          }
        }
      }
      rhs[r] -= factor * rhs[pr];
    }
    row_done[pr] = 1;
    for (auto& [c, v] : rows[pr]) --col_live[c];
    col_done[pc] = 1;
    pivot_row_of_col[pc] = pr;
    elim_order.push_back(pc);
  }

  // Back substitution in reverse elimination order.
  std::vector<Rat> x(n, Rat(0));
  std::vector<char> solved(n, 0);
  for (int k = n - 1; k >= 0; --k) {
    int c = elim_order[k];
    int r = pivot_row_of_col[c];
    Rat acc = rhs[r];
    for (auto& [cc, v] : rows[r]) {
      if (cc == c) continue;
      if (!solved[cc]) fail(Err::Internal, "solve_linear_sparse: back-substitution order");
      acc -= v * x[cc];
    }
    x[c] = acc / rows[r][c];
    solved[c] = 1;
  }
  return x;
}

std::vector<Rat> solve_linear_bareiss(std::vector<std::vector<Rat>> a, std::vector<Rat> rhs) {
  const int n = static_cast<int>(a.size());
  if (static_cast<int>(rhs.size()) != n) fail(Err::Internal, "solve_linear_bareiss: shape");

  // Scale rows to integers; work on the augmented integer matrix.
  std::vector<std::vector<Int>> m(n, std::vector<Int>(n + 1));
  for (int r = 0; r < n; ++r) {
    Int l = 1;
    for (int c = 0; c < n; ++c) lcm(l.get_mpz_t(), l.get_mpz_t(), a[r][c].get_den().get_mpz_t());
    lcm(l.get_mpz_t(), l.get_mpz_t(), rhs[r].get_den().get_mpz_t());
    for (int c = 0; c < n; ++c) {
      Rat v = a[r][c] * l;
      m[r][c] = v.get_num();
    }
    Rat v = rhs[r] * l;
    m[r][n] = v.get_num();
  }

  Int prev = 1;
  for (int k = 0; k < n; ++k) {
    if (m[k][k] == 0) {
      int swap_row = -1;
      for (int r = k + 1; r < n; ++r)
        if (m[r][k] != 0) {
          swap_row = r;
          break;
        }
      if (swap_row < 0) fail(Err::Internal, "solve_linear_bareiss: singular system");
      std::swap(m[k], m[swap_row]);
      for (int c = 0; c <= n; ++c) m[swap_row][c] = -m[swap_row][c];
    }
    for (int r = 0; r < n; ++r) {
      if (r == k) continue;
      for (int c = 0; c <= n; ++c) {
        if (c == k) continue;
        Int num = m[k][k] * m[r][c] - m[r][k] * m[k][c];
        Int q, rem;
        mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
        if (rem != 0) fail(Err::Internal, "bareiss: exact division failed");
        m[r][c] = q;
      }
      m[r][k] = 0;
    }
    prev = m[k][k];
  }

  std::vector<Rat> x(n);
  for (int r = 0; r < n; ++r) {
    Rat v(m[r][n], m[r][r]);
    v.canonicalize();
    x[r] = v;
  }
  return x;
}

}  // namespace enpar
