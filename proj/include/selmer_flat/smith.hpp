#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "selmer_flat/bigint.hpp"

namespace selmer_flat {

using IntMatrix = std::vector<std::vector<Int>>;

inline IntMatrix identity_matrix(std::size_t n) {
  IntMatrix m(n, std::vector<Int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

/// U * A * V = diag(d_1, ..., d_r, 0, ...) with d_1 | d_2 | ... and d_i > 0.
/// U_inv is tracked alongside U so callers can map generators back.
struct SmithForm {
  std::vector<Int> diagonal;  // length min(rows, cols); zeros trail
  IntMatrix U, U_inv, V;
};

inline SmithForm smith_normal_form(IntMatrix a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  SmithForm out{{}, identity_matrix(rows), identity_matrix(rows), identity_matrix(cols)};
  auto& U = out.U;
  auto& Ui = out.U_inv;
  auto& V = out.V;

  auto row_add = [&](std::size_t dst, std::size_t src, const Int& q) {  // row_dst += q * row_src
    if (q == 0) return;
    for (std::size_t j = 0; j < cols; ++j) a[dst][j] += q * a[src][j];
    for (std::size_t j = 0; j < rows; ++j) U[dst][j] += q * U[src][j];
    for (std::size_t i = 0; i < rows; ++i) Ui[i][src] -= q * Ui[i][dst];
  };
  auto row_swap = [&](std::size_t i, std::size_t k) {
    if (i == k) return;
    std::swap(a[i], a[k]);
    std::swap(U[i], U[k]);
    for (std::size_t r = 0; r < rows; ++r) std::swap(Ui[r][i], Ui[r][k]);
  };
  auto row_negate = [&](std::size_t i) {
    for (auto& x : a[i]) x = -x;
    for (auto& x : U[i]) x = -x;
    for (std::size_t r = 0; r < rows; ++r) Ui[r][i] = -Ui[r][i];
  };
  auto col_add = [&](std::size_t dst, std::size_t src, const Int& q) {  // col_dst += q * col_src
    if (q == 0) return;
    for (std::size_t i = 0; i < rows; ++i) a[i][dst] += q * a[i][src];
    for (std::size_t i = 0; i < cols; ++i) V[i][dst] += q * V[i][src];
  };
  auto col_swap = [&](std::size_t j, std::size_t k) {
    if (j == k) return;
    for (std::size_t i = 0; i < rows; ++i) std::swap(a[i][j], a[i][k]);
    for (std::size_t i = 0; i < cols; ++i) std::swap(V[i][j], V[i][k]);
  };
  auto abs_int = [](const Int& x) { return x < 0 ? Int(-x) : x; };

  const std::size_t steps = std::min(rows, cols);
  for (std::size_t t = 0; t < steps; ++t) {
    while (true) {
      // smallest non-zero entry of the trailing block becomes the pivot
      std::size_t pi = rows, pj = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a[i][j] != 0 && (pi == rows || abs_int(a[i][j]) < abs_int(a[pi][pj]))) {
            pi = i;
            pj = j;
          }
      if (pi == rows) break;
      row_swap(t, pi);
      col_swap(t, pj);

      bool dirty = false;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        Int q = a[i][t] / a[t][t];
        row_add(i, t, -q);
        if (a[i][t] != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        Int q = a[t][j] / a[t][t];
        col_add(j, t, -q);
        if (a[t][j] != 0) dirty = true;
      }
      if (dirty) continue;

      // divisibility condition on the trailing block
      std::size_t bad = rows;
      for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            bad = i;
            break;
          }
      if (bad == rows) break;
      row_add(t, bad, 1);
    }
    if (a[t][t] < 0) row_negate(t);
  }
  out.diagonal.resize(steps);
  for (std::size_t t = 0; t < steps; ++t) out.diagonal[t] = a[t][t];
  return out;
}

}  // namespace selmer_flat
