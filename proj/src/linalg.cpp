#include "gconj/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "gconj/errors.hpp"

namespace gconj {

std::string vec_to_string(const Vec& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ",";
    os << v[i];
  }
  os << ")";
  return os.str();
}

std::string mat_to_string(const Mat& m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) os << "; ";
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      if (j) os << ",";
      os << m[i][j];
    }
  }
  os << "]";
  return os.str();
}

Mat mat_identity(std::size_t n) {
  Mat m(n, Vec(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Mat mat_mul(const Mat& a, const Mat& b) {
  if (a.empty() || b.empty()) return {};
  std::size_t n = a.size(), k = b.size(), m = b[0].size();
  Mat out(n, Vec(m, 0));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != k) throw InputError("mat_mul: shape mismatch");
    for (std::size_t t = 0; t < k; ++t) {
      if (a[i][t] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][t] * b[t][j];
    }
  }
  return out;
}

Vec vec_mat_mul(const Vec& v, const Mat& a) {
  if (v.size() != a.size()) throw InputError("vec_mat_mul: shape mismatch");
  if (a.empty()) return {};
  Vec out(a[0].size(), 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += v[i] * a[i][j];
  }
  return out;
}

Vec vec_add(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Vec vec_sub(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vec vec_neg(const Vec& a) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
  return out;
}

bool vec_is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

Mat mat_pow(const Mat& a, const Int& k) {
  std::size_t n = a.size();
  Mat base = a;
  Int e = k;
  if (e < 0) {
    auto inv = mat_inverse(a);
    if (!inv) throw CapabilityError("mat_pow: negative power of a non-unimodular matrix");
    base = *inv;
    e = -e;
  }
  Mat result = mat_identity(n);
  while (e > 0) {
    if (floor_mod(e, 2) == 1) result = mat_mul(result, base);
    base = mat_mul(base, base);
    e = floor_div(e, 2);
  }
  return result;
}

Int mat_det(const Mat& a) {
  // Fraction-free Gaussian elimination (Bareiss).
  std::size_t n = a.size();
  if (n == 0) return 1;
  Mat m = a;
  Int sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(m[p], m[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

std::optional<Mat> mat_inverse(const Mat& a) {
  Int d = mat_det(a);
  if (d != 1 && d != -1) return std::nullopt;
  // Solve row by row: x_i * a = e_i.
  std::size_t n = a.size();
  Mat inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec e(n, 0);
    e[i] = 1;
    auto x = solve_left(a, e);
    if (!x) return std::nullopt;
    inv[i] = *x;
  }
  return inv;
}

namespace {

// In-place row HNF with optional transform tracking.  Returns the rank.
std::size_t hnf_inplace(Mat& m, Mat* transform) {
  if (m.empty()) return 0;
  std::size_t rows = m.size(), cols = m[0].size();
  if (transform) *transform = mat_identity(rows);
  auto row_op_sub = [&](std::size_t dst, std::size_t src, const Int& q) {
    for (std::size_t j = 0; j < cols; ++j) m[dst][j] -= q * m[src][j];
    if (transform)
      for (std::size_t j = 0; j < rows; ++j) (*transform)[dst][j] -= q * (*transform)[src][j];
  };
  auto row_swap = [&](std::size_t i, std::size_t j) {
    std::swap(m[i], m[j]);
    if (transform) std::swap((*transform)[i], (*transform)[j]);
  };
  auto row_negate = [&](std::size_t i) {
    for (auto& x : m[i]) x = -x;
    if (transform)
      for (auto& x : (*transform)[i]) x = -x;
  };

  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    // Euclidean elimination within column c on rows r..end.
    while (true) {
      std::size_t piv = rows;
      for (std::size_t i = r; i < rows; ++i) {
        if (m[i][c] == 0) continue;
        if (piv == rows || abs_int(m[i][c]) < abs_int(m[piv][c])) piv = i;
      }
      if (piv == rows) break;  // column is zero below r
      row_swap(r, piv);
      if (m[r][c] < 0) row_negate(r);
      bool clean = true;
      for (std::size_t i = r + 1; i < rows; ++i) {
        if (m[i][c] == 0) continue;
        Int q = floor_div(m[i][c], m[r][c]);
        row_op_sub(i, r, q);
        if (m[i][c] != 0) clean = false;
      }
      if (clean) break;
    }
    if (m[r][c] != 0) {
      // Reduce the rows above the pivot into [0, pivot).
      for (std::size_t i = 0; i < r; ++i) {
        Int q = floor_div(m[i][c], m[r][c]);
        if (q != 0) row_op_sub(i, r, q);
      }
      ++r;
    }
  }
  return r;
}

}  // namespace

Mat hnf(Mat rows) {
  std::size_t rank = hnf_inplace(rows, nullptr);
  rows.resize(rank);
  return rows;
}

std::pair<Mat, Mat> hnf_with_transform(Mat rows) {
  Mat u;
  hnf_inplace(rows, &u);
  return {rows, u};
}

bool lattice_contains(const Mat& hnf_basis, const Vec& v, Vec* coeffs) {
  Vec rem = v;
  Vec cf(hnf_basis.size(), 0);
  for (std::size_t r = 0; r < hnf_basis.size(); ++r) {
    // Pivot column of row r.
    std::size_t c = 0;
    while (c < hnf_basis[r].size() && hnf_basis[r][c] == 0) ++c;
    if (c == hnf_basis[r].size()) continue;
    if (rem[c] % hnf_basis[r][c] != 0) {
      // Any earlier nonzero coordinate would already have failed; check here.
      return false;
    }
    Int q = rem[c] / hnf_basis[r][c];
    cf[r] = q;
    for (std::size_t j = 0; j < rem.size(); ++j) rem[j] -= q * hnf_basis[r][j];
  }
  if (!vec_is_zero(rem)) return false;
  if (coeffs) *coeffs = cf;
  return true;
}

std::optional<Vec> solve_left(const Mat& a, const Vec& b) {
  if (a.empty()) return vec_is_zero(b) ? std::optional<Vec>(Vec{}) : std::nullopt;
  auto [h, u] = hnf_with_transform(a);
  // Strip zero rows of h (they correspond to kernel rows of u).
  Mat hh;
  Mat uu;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!vec_is_zero(h[i])) {
      hh.push_back(h[i]);
      uu.push_back(u[i]);
    }
  }
  Vec coeffs;
  if (!lattice_contains(hh, b, &coeffs)) return std::nullopt;
  Vec x(a.size(), 0);
  for (std::size_t i = 0; i < hh.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) x[j] += coeffs[i] * uu[i][j];
  return x;
}

Mat left_kernel(const Mat& a) {
  if (a.empty()) return {};
  auto [h, u] = hnf_with_transform(a);
  Mat kernel;
  for (std::size_t i = 0; i < h.size(); ++i)
    if (vec_is_zero(h[i])) kernel.push_back(u[i]);
  return hnf(std::move(kernel));
}

Mat lattice_sum(const Mat& a, const Mat& b) {
  Mat rows = a;
  rows.insert(rows.end(), b.begin(), b.end());
  return hnf(std::move(rows));
}

Mat lattice_intersection(const Mat& a, const Mat& b) {
  if (a.empty() || b.empty()) return {};
  // (alpha, beta) with alpha*a = beta*b; the intersection is alpha*a over the
  // kernel of the stacked map (alpha, beta) -> alpha*a - beta*b.
  std::size_t n = a[0].size();
  Mat stacked;
  for (const auto& r : a) stacked.push_back(r);
  for (const auto& r : b) stacked.push_back(vec_neg(r));
  Mat ker = left_kernel(stacked);
  Mat result;
  for (const auto& w : ker) {
    Vec v(n, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < n; ++j) v[j] += w[i] * a[i][j];
    result.push_back(std::move(v));
  }
  return hnf(std::move(result));
}

std::vector<Int> smith_diagonal(Mat a) {
  // Classic elimination to diagonal, then fix divisibility.
  if (a.empty()) return {};
  std::size_t rows = a.size(), cols = a[0].size();
  std::size_t t = 0;
  std::vector<Int> diag;
  while (t < rows && t < cols) {
    // Find a nonzero pivot in the submatrix.
    std::size_t pi = rows, pj = cols;
    for (std::size_t i = t; i < rows && pi == rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (a[i][j] != 0) {
          pi = i;
          pj = j;
          break;
        }
    if (pi == rows) break;
    std::swap(a[t], a[pi]);
    for (std::size_t i = 0; i < rows; ++i) std::swap(a[i][t], a[i][pj]);
    bool again = true;
    while (again) {
      again = false;
      // Clear column t.
      for (std::size_t i = t + 1; i < rows; ++i) {
        while (a[i][t] != 0) {
          Int q = floor_div(a[i][t], a[t][t]);
          for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
          if (a[i][t] != 0) {
            std::swap(a[i], a[t]);
          }
        }
      }
      // Clear row t.
      for (std::size_t j = t + 1; j < cols; ++j) {
        while (a[t][j] != 0) {
          Int q = floor_div(a[t][j], a[t][t]);
          for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
          if (a[t][j] != 0) {
            for (std::size_t i = t; i < rows; ++i) std::swap(a[i][j], a[i][t]);
            again = true;
          }
        }
      }
    }
    if (a[t][t] < 0) a[t][t] = -a[t][t];
    ++t;
  }
  for (std::size_t i = 0; i < t; ++i) diag.push_back(a[i][i]);
  // Enforce d1 | d2 | ... by pairwise gcd/lcm fixes.
  for (std::size_t i = 0; i + 1 < diag.size(); ++i)
    for (std::size_t j = i + 1; j < diag.size(); ++j) {
      if (diag[j] % diag[i] != 0) {
        Int g = gcd_int(diag[i], diag[j]);
        Int l = diag[i] / g * diag[j];
        diag[i] = g;
        diag[j] = l;
      }
    }
  return diag;
}

std::optional<Int> lattice_exponent(const Mat& hnf_basis, std::size_t n) {
  if (hnf_basis.size() < n) return std::nullopt;
  auto d = smith_diagonal(hnf_basis);
  if (d.size() < n) return std::nullopt;
  Int m = 1;
  for (const auto& x : d) {
    if (x == 0) return std::nullopt;
    m = x;  // smith diagonal is in divisibility order; last entry is the exponent
  }
  return m;
}

std::pair<Int, Vec> extended_gcd(const Vec& k) {
  Vec lambda(k.size(), 0);
  Int g = 0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] == 0) continue;
    if (g == 0) {
      g = abs_int(k[i]);
      lambda.assign(k.size(), 0);
      lambda[i] = k[i] > 0 ? 1 : -1;
      continue;
    }
    // Extended Euclid on (g, k[i]).
    Int a = g, b = k[i];
    Int x0 = 1, x1 = 0;  // coefficients of a
    Int y0 = 0, y1 = 1;  // coefficients of b
    while (b != 0) {
      Int q = floor_div(a, b);
      Int r = a - q * b;
      a = b;
      b = r;
      Int nx = x0 - q * x1;
      x0 = x1;
      x1 = nx;
      Int ny = y0 - q * y1;
      y0 = y1;
      y1 = ny;
    }
    if (a < 0) {
      a = -a;
      x0 = -x0;
      y0 = -y0;
    }
    for (auto& l : lambda) l *= x0;
    lambda[i] += y0;
    g = a;
  }
  return {g, lambda};
}

}  // namespace gconj
