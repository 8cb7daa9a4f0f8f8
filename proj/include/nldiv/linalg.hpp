#pragma once

#include <array>
#include <cstddef>

// Dense vectors and matrices for dimensions 1..3, plus the symmetric
// eigensolver the spectral correspondence is built on.  Everything is a
// plain value type; all functions are pure.

namespace nldiv {

struct Vec {
  int n = 0;
  std::array<double, 3> x{};

  Vec() = default;
  explicit Vec(int dim) : n(dim) {}
  Vec(double a) : n(1), x{a, 0.0, 0.0} {}
  Vec(double a, double b) : n(2), x{a, b, 0.0} {}
  Vec(double a, double b, double c) : n(3), x{a, b, c} {}

  double& operator[](int i) { return x[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return x[static_cast<std::size_t>(i)]; }

  double norm() const;
  double dot(const Vec& o) const;

  Vec operator+(const Vec& o) const;
  Vec operator-(const Vec& o) const;
  Vec operator*(double c) const;
  Vec operator-() const { return *this * -1.0; }
};

struct Mat {
  int n = 0;
  std::array<double, 9> a{};

  Mat() = default;
  explicit Mat(int dim) : n(dim) {}
  static Mat identity(int dim);
  static Mat zero(int dim) { return Mat(dim); }

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(3 * i + j)]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(3 * i + j)]; }

  Vec apply(const Vec& v) const;
  Mat mul(const Mat& o) const;
  Mat transposed() const;
  Mat operator+(const Mat& o) const;
  Mat operator-(const Mat& o) const;
  Mat operator*(double c) const;
  double frobenius() const;
};

// Symmetric matrix; packed storage makes a[i][j] == a[j][i] hold exactly.
struct SymMat {
  int n = 0;
  // order: (0,0) (0,1) (0,2) (1,1) (1,2) (2,2)
  std::array<double, 6> p{};

  SymMat() = default;
  explicit SymMat(int dim) : n(dim) {}
  static SymMat identity(int dim);
  static SymMat diag(const Vec& d);
  // symmetrizes (B + B^T)/2 when fed a general matrix
  static SymMat from(const Mat& b);

  double operator()(int i, int j) const;
  void set(int i, int j, double v);

  Mat full() const;
  Vec apply(const Vec& v) const;
  SymMat operator+(const SymMat& o) const;
  SymMat operator-(const SymMat& o) const;
  SymMat operator*(double c) const;
  double frobenius() const;
};

// Eigendecomposition A = O diag(lambda) O^T with ascending eigenvalues and a
// deterministic sign convention on the eigenvector columns.
struct Spectrum {
  int n = 0;
  Vec lambda;   // ascending
  Mat vectors;  // columns are eigenvectors
};

// Cyclic Jacobi rotations; unconditionally stable for symmetric input and
// deterministic for identical input.  Reconstruction residual is below
// 1e-10 * max(1, ||A||).
Spectrum eigh_sym(const SymMat& a);

// Largest singular value sup_{|v|=1} |A v|.
double operator_norm(const Mat& a);
double operator_norm(const SymMat& a);

struct EigGapReport {
  double max_eigenvalue_gap = 0.0; // max_i |lambda_i(A) - lambda_i(B)|
  double norm_gap = 0.0;           // ||A - B||
};

// Sorted-eigenvalue comparison of two symmetric matrices; by Weyl's
// inequality max_eigenvalue_gap <= norm_gap.
// Throws std::invalid_argument on dimension mismatch.
EigGapReport eigenvalue_lipschitz_gap(const SymMat& a, const SymMat& b);

// Planar rotation (n = 2) and a composition of three Givens rotations
// (n = 3); handy for building test fields.
Mat rotation2(double theta);
Mat rotation3(double a, double b, double c);

} // namespace nldiv
