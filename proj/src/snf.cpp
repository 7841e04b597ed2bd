#include "hkt/snf.hpp"

#include <utility>

namespace hkt {

namespace {

IntegerMatrix identity(std::size_t n) {
  IntegerMatrix m(n, std::vector<Integer>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

struct Work {
  IntegerMatrix d, u, v;
  std::size_t rows, cols;

  void swap_rows(std::size_t i, std::size_t j) {
    std::swap(d[i], d[j]);
    std::swap(u[i], u[j]);
  }
  void swap_cols(std::size_t i, std::size_t j) {
    for (auto& r : d) std::swap(r[i], r[j]);
    for (auto& r : v) std::swap(r[i], r[j]);
  }
  // row_i -= q row_j
  void row_op(std::size_t i, std::size_t j, const Integer& q) {
    for (std::size_t c = 0; c < cols; ++c) d[i][c] -= q * d[j][c];
    for (std::size_t c = 0; c < rows; ++c) u[i][c] -= q * u[j][c];
  }
  // col_i -= q col_j
  void col_op(std::size_t i, std::size_t j, const Integer& q) {
    for (std::size_t r = 0; r < rows; ++r) d[r][i] -= q * d[r][j];
    for (std::size_t r = 0; r < cols; ++r) v[r][i] -= q * v[r][j];
  }
};

}  // namespace

SmithForm smith_normal_form(const IntegerMatrix& a, std::size_t rows, std::size_t cols) {
  Work w{a, identity(rows), identity(cols), rows, cols};
  if (w.d.empty()) w.d.assign(rows, std::vector<Integer>(cols, 0));
  std::size_t t = 0;
  for (; t < std::min(rows, cols); ++t) {
    // Smallest nonzero entry of the trailing block to the pivot.
    bool any = false;
    std::size_t pi = t, pj = t;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (w.d[i][j] != 0 && (!any || abs(w.d[i][j]) < abs(w.d[pi][pj]))) {
          any = true;
          pi = i;
          pj = j;
        }
    if (!any) break;
    w.swap_rows(t, pi);
    w.swap_cols(t, pj);
    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (w.d[i][t] == 0) continue;
        w.row_op(i, t, floor_div(w.d[i][t], w.d[t][t]));
        if (w.d[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (w.d[t][j] == 0) continue;
        w.col_op(j, t, floor_div(w.d[t][j], w.d[t][t]));
        if (w.d[t][j] != 0) clean = false;
      }
      if (!clean) {
        // Remainders are smaller than the pivot; bring the smallest one up.
        std::size_t bi = t, bj = t;
        for (std::size_t i = t + 1; i < rows; ++i)
          if (w.d[i][t] != 0 && abs(w.d[i][t]) < abs(w.d[bi][bj])) bi = i, bj = t;
        for (std::size_t j = t + 1; j < cols; ++j)
          if (w.d[t][j] != 0 && abs(w.d[t][j]) < abs(w.d[bi][bj])) bi = t, bj = j;
        w.swap_rows(t, bi);
        w.swap_cols(t, bj);
        continue;
      }
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (w.d[i][j] % w.d[t][t] != 0) {
            w.row_op(t, i, -1);  // row_t += row_i
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (w.d[t][t] < 0) {
      for (auto& x : w.d[t]) x = -x;
      for (auto& x : w.u[t]) x = -x;
    }
  }
  SmithForm out{std::move(w.u), std::move(w.d), std::move(w.v), {}, t};
  for (std::size_t i = 0; i < t; ++i) out.invariants.push_back(out.d[i][i]);
  return out;
}

IntegerMatrix multiply(const IntegerMatrix& a, const IntegerMatrix& b, std::size_t inner) {
  const std::size_t rows = a.size(), cols = b.empty() ? 0 : b.front().size();
  IntegerMatrix out(rows, std::vector<Integer>(cols, 0));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

}  // namespace hkt
