#include "dormant/linalg.hpp"

namespace dormant {

std::optional<AffineSolution> solve_affine(FpMatrix a, std::vector<fp_t> b, std::size_t n, fp_t p) {
  const std::size_t m = a.size();
  std::vector<int> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < m; ++col) {
    std::size_t piv = row;
    while (piv < m && a[piv][col] == 0) ++piv;
    if (piv == m) continue;
    std::swap(a[piv], a[row]);
    std::swap(b[piv], b[row]);
    const fp_t inv = fp_inv(a[row][col], p);
    for (std::size_t j = col; j < n; ++j) a[row][j] = fp_mul(a[row][j], inv, p);
    b[row] = fp_mul(b[row], inv, p);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == row || a[r][col] == 0) continue;
      const fp_t f = a[r][col];
      for (std::size_t j = col; j < n; ++j) a[r][j] = fp_sub(a[r][j], fp_mul(f, a[row][j], p), p);
      b[r] = fp_sub(b[r], fp_mul(f, b[row], p), p);
    }
    pivot_col.push_back(static_cast<int>(col));
    ++row;
  }
  for (std::size_t r = row; r < m; ++r)
    if (b[r] != 0) return std::nullopt;
  AffineSolution sol;
  sol.particular.assign(n, 0);
  std::vector<bool> is_pivot(n, false);
  for (std::size_t r = 0; r < pivot_col.size(); ++r) {
    sol.particular[pivot_col[r]] = b[r];
    is_pivot[pivot_col[r]] = true;
  }
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    std::vector<fp_t> k(n, 0);
    k[free] = 1;
    for (std::size_t r = 0; r < pivot_col.size(); ++r) k[pivot_col[r]] = fp_neg(a[r][free], p);
    sol.kernel.push_back(std::move(k));
  }
  return sol;
}

std::optional<std::vector<RatFunc>> solve_square(std::vector<std::vector<RatFunc>> m,
                                                 std::vector<RatFunc> b) {
  const std::size_t n = m.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = n;
    // Prefer the pivot of smallest size to limit coefficient growth.
    for (std::size_t r = col; r < n; ++r) {
      if (m[r][col].is_zero()) continue;
      if (piv == n || m[r][col].num().size() + m[r][col].den().size() <
                          m[piv][col].num().size() + m[piv][col].den().size())
        piv = r;
    }
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[col]);
    std::swap(b[piv], b[col]);
    const RatFunc inv = m[col][col].inverse();
    for (std::size_t j = col; j < n; ++j) m[col][j] = m[col][j] * inv;
    b[col] = b[col] * inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      const RatFunc f = m[r][col];
      for (std::size_t j = col; j < n; ++j) m[r][j] = m[r][j] - f * m[col][j];
      b[r] = b[r] - f * b[col];
    }
  }
  return b;
}

}  // namespace dormant
