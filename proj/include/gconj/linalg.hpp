#pragma once

#include <optional>
#include <utility>

#include "gconj/ints.hpp"

namespace gconj {

// Integer linear algebra over row lattices.  Conventions:
//  - vectors are rows, matrices act on the right (v -> v*A),
//  - a lattice is the set of integer combinations of the rows of a basis
//    matrix,
//  - the canonical basis is the row Hermite normal form: pivots positive,
//    pivot columns strictly increasing, entries above each pivot reduced to
//    [0, pivot), zero rows dropped.

Mat mat_identity(std::size_t n);
Mat mat_mul(const Mat& a, const Mat& b);
Vec vec_mat_mul(const Vec& v, const Mat& a);
Vec vec_add(const Vec& a, const Vec& b);
Vec vec_sub(const Vec& a, const Vec& b);
Vec vec_neg(const Vec& a);
bool vec_is_zero(const Vec& v);
Mat mat_pow(const Mat& a, const Int& k);  // k < 0 requires unimodular a

Int mat_det(const Mat& a);

// Inverse of an integer matrix when it exists over Z (|det| = 1).
std::optional<Mat> mat_inverse(const Mat& a);

// Row Hermite normal form of the lattice spanned by the rows; zero rows are
// dropped, so the result has full row rank.
Mat hnf(Mat rows);

// HNF together with a transform: returns (H, U) with U * rows == H-padded,
// where U is unimodular of size rows.size().  H keeps zero rows here so U
// stays square; callers strip them as needed.
std::pair<Mat, Mat> hnf_with_transform(Mat rows);

// Does v lie in the lattice spanned by basis (basis in HNF)?  If so,
// optionally exposes the coefficient vector against the basis rows.
bool lattice_contains(const Mat& hnf_basis, const Vec& v, Vec* coeffs = nullptr);

// Solve x * a = b over the integers.  Empty optional when unsolvable.
std::optional<Vec> solve_left(const Mat& a, const Vec& b);

// Basis (HNF) of { x : x * a = 0 }.
Mat left_kernel(const Mat& a);

// Lattice generated by the union of the two row sets.
Mat lattice_sum(const Mat& a, const Mat& b);

// Intersection of the two row lattices.
Mat lattice_intersection(const Mat& a, const Mat& b);

// Diagonal of the Smith normal form (d1 | d2 | ... | dr), positive entries.
std::vector<Int> smith_diagonal(Mat a);

// For a full-rank lattice L <= Z^n given in HNF: the exponent of Z^n / L,
// i.e. the least m >= 1 with m*Z^n contained in L.  Empty if L has infinite
// index (rank < n).
std::optional<Int> lattice_exponent(const Mat& hnf_basis, std::size_t n);

// Extended gcd of a list: returns (g, lambda) with sum(lambda_i * k_i) = g,
// g = gcd(k) >= 0.  For the all-zero list, g = 0 and lambda = 0.
std::pair<Int, Vec> extended_gcd(const Vec& k);

}  // namespace gconj
