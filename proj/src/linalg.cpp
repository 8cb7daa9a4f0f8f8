#include "nldiv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nldiv {

double Vec::norm() const {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += x[i] * x[i];
  return std::sqrt(s);
}

double Vec::dot(const Vec& o) const {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += x[i] * o.x[i];
  return s;
}

Vec Vec::operator+(const Vec& o) const {
  Vec r(n);
  for (int i = 0; i < n; ++i) r.x[i] = x[i] + o.x[i];
  return r;
}

Vec Vec::operator-(const Vec& o) const {
  Vec r(n);
  for (int i = 0; i < n; ++i) r.x[i] = x[i] - o.x[i];
  return r;
}

Vec Vec::operator*(double c) const {
  Vec r(n);
  for (int i = 0; i < n; ++i) r.x[i] = x[i] * c;
  return r;
}

Mat Mat::identity(int dim) {
  Mat m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Vec Mat::apply(const Vec& v) const {
  Vec r(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += (*this)(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

Mat Mat::mul(const Mat& o) const {
  Mat r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += (*this)(i, k) * o(k, j);
      r(i, j) = s;
    }
  return r;
}

Mat Mat::transposed() const {
  Mat r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = (*this)(j, i);
  return r;
}

Mat Mat::operator+(const Mat& o) const {
  Mat r(n);
  for (int i = 0; i < 9; ++i) r.a[i] = a[i] + o.a[i];
  return r;
}

Mat Mat::operator-(const Mat& o) const {
  Mat r(n);
  for (int i = 0; i < 9; ++i) r.a[i] = a[i] - o.a[i];
  return r;
}

Mat Mat::operator*(double c) const {
  Mat r(n);
  for (int i = 0; i < 9; ++i) r.a[i] = a[i] * c;
  return r;
}

double Mat::frobenius() const {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += (*this)(i, j) * (*this)(i, j);
  return std::sqrt(s);
}

namespace {
inline int packed_index(int i, int j) {
  if (i > j) std::swap(i, j);
  // row-wise upper triangle for dim 3; valid for lower dims as well
  static constexpr int idx[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
  return idx[i][j];
}
} // namespace

SymMat SymMat::identity(int dim) {
  SymMat m(dim);
  for (int i = 0; i < dim; ++i) m.set(i, i, 1.0);
  return m;
}

SymMat SymMat::diag(const Vec& d) {
  SymMat m(d.n);
  for (int i = 0; i < d.n; ++i) m.set(i, i, d[i]);
  return m;
}

SymMat SymMat::from(const Mat& b) {
  SymMat m(b.n);
  for (int i = 0; i < b.n; ++i)
    for (int j = i; j < b.n; ++j) m.set(i, j, 0.5 * (b(i, j) + b(j, i)));
  return m;
}

double SymMat::operator()(int i, int j) const {
  return p[static_cast<std::size_t>(packed_index(i, j))];
}

void SymMat::set(int i, int j, double v) {
  p[static_cast<std::size_t>(packed_index(i, j))] = v;
}

Mat SymMat::full() const {
  Mat m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = (*this)(i, j);
  return m;
}

Vec SymMat::apply(const Vec& v) const {
  Vec r(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += (*this)(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

SymMat SymMat::operator+(const SymMat& o) const {
  SymMat r(n);
  for (std::size_t i = 0; i < 6; ++i) r.p[i] = p[i] + o.p[i];
  return r;
}

SymMat SymMat::operator-(const SymMat& o) const {
  SymMat r(n);
  for (std::size_t i = 0; i < 6; ++i) r.p[i] = p[i] - o.p[i];
  return r;
}

SymMat SymMat::operator*(double c) const {
  SymMat r(n);
  for (std::size_t i = 0; i < 6; ++i) r.p[i] = p[i] * c;
  return r;
}

double SymMat::frobenius() const { return full().frobenius(); }

Spectrum eigh_sym(const SymMat& a) {
  const int n = a.n;
  Mat w = a.full();
  Mat v = Mat::identity(n);

  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(w(i, j)));
  if (scale == 0.0) scale = 1.0;

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += w(i, j) * w(i, j);
    if (std::sqrt(off) <= 1e-15 * scale) break;

    for (int pq = 0; pq < n; ++pq)
      for (int q = pq + 1; q < n; ++q) {
        const int p2 = pq;
        const double apq = w(p2, q);
        if (std::abs(apq) <= 1e-18 * scale) continue;
        const double theta = 0.5 * (w(q, q) - w(p2, p2)) / apq;
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double wkp = w(k, p2), wkq = w(k, q);
          w(k, p2) = c * wkp - s * wkq;
          w(k, q) = s * wkp + c * wkq;
        }
        for (int k = 0; k < n; ++k) {
          const double wpk = w(p2, k), wqk = w(q, k);
          w(p2, k) = c * wpk - s * wqk;
          w(q, k) = s * wpk + c * wqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p2), vkq = v(k, q);
          v(k, p2) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }

  // ascending eigenvalues, stable order
  std::array<int, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.begin() + n,
                   [&](int i, int j) { return w(i, i) < w(j, j); });

  Spectrum sp;
  sp.n = n;
  sp.lambda = Vec(n);
  sp.vectors = Mat(n);
  for (int c = 0; c < n; ++c) {
    const int src = order[static_cast<std::size_t>(c)];
    sp.lambda[c] = w(src, src);
    // first nonzero component positive
    double flip = 1.0;
    for (int r = 0; r < n; ++r) {
      if (std::abs(v(r, src)) > 1e-12) {
        flip = v(r, src) > 0.0 ? 1.0 : -1.0;
        break;
      }
    }
    for (int r = 0; r < n; ++r) sp.vectors(r, c) = flip * v(r, src);
  }
  return sp;
}

double operator_norm(const Mat& a) {
  const int n = a.n;
  SymMat ata(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += a(k, i) * a(k, j);
      ata.set(i, j, s);
    }
  const Spectrum sp = eigh_sym(ata);
  return std::sqrt(std::max(0.0, sp.lambda[n - 1]));
}

double operator_norm(const SymMat& a) { return operator_norm(a.full()); }

EigGapReport eigenvalue_lipschitz_gap(const SymMat& a, const SymMat& b) {
  if (a.n != b.n)
    throw std::invalid_argument("eigenvalue_lipschitz_gap: dimension mismatch");
  const Spectrum sa = eigh_sym(a);
  const Spectrum sb = eigh_sym(b);
  EigGapReport rep;
  for (int i = 0; i < a.n; ++i)
    rep.max_eigenvalue_gap =
        std::max(rep.max_eigenvalue_gap, std::abs(sa.lambda[i] - sb.lambda[i]));
  rep.norm_gap = operator_norm(a - b);
  return rep;
}

Mat rotation2(double theta) {
  Mat r(2);
  r(0, 0) = std::cos(theta);
  r(0, 1) = -std::sin(theta);
  r(1, 0) = std::sin(theta);
  r(1, 1) = std::cos(theta);
  return r;
}

Mat rotation3(double a, double b, double c) {
  auto givens = [](int i, int j, double t) {
    Mat g = Mat::identity(3);
    g(i, i) = std::cos(t);
    g(j, j) = std::cos(t);
    g(i, j) = -std::sin(t);
    g(j, i) = std::sin(t);
    return g;
  };
  return givens(0, 1, a).mul(givens(0, 2, b)).mul(givens(1, 2, c));
}

} // namespace nldiv
