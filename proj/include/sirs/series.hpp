#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sirs/precision.hpp"

namespace sirs {

// Truncated power series in two variables, sum of c(i,j) X^i Y^j over
// i + j <= N. Storage is degree-major: degree d occupies d+1 slots ordered
// by j.
template <class T>
class BivariateSeries {
 public:
  static constexpr int kDefaultDegree = 9;

  explicit BivariateSeries(int max_degree = kDefaultDegree)
      : n_(max_degree), c_(slots(max_degree), T(0)) {
    if (max_degree < 0) throw std::invalid_argument("negative series degree");
  }

  static BivariateSeries constant(const T& v, int max_degree = kDefaultDegree) {
    BivariateSeries s(max_degree);
    s.c_[0] = v;
    return s;
  }
  // a*X + b*Y + c
  static BivariateSeries linear(const T& a, const T& b, const T& c = T(0),
                                int max_degree = kDefaultDegree) {
    BivariateSeries s(max_degree);
    s.c_[0] = c;
    if (max_degree >= 1) {
      s.c_[1] = a;
      s.c_[2] = b;
    }
    return s;
  }

  int max_degree() const { return n_; }

  T& operator()(int i, int j) { return c_.at(checked_index(i, j)); }
  const T& operator()(int i, int j) const { return c_.at(checked_index(i, j)); }

  // Zero for monomials beyond the truncation degree.
  T coeff(int i, int j) const {
    if (i < 0 || j < 0 || i + j > n_) return T(0);
    return c_[index(i, j)];
  }

  BivariateSeries& operator+=(const BivariateSeries& o) {
    require_same(o);
    for (std::size_t q = 0; q < c_.size(); ++q) c_[q] += o.c_[q];
    return *this;
  }
  BivariateSeries& operator-=(const BivariateSeries& o) {
    require_same(o);
    for (std::size_t q = 0; q < c_.size(); ++q) c_[q] -= o.c_[q];
    return *this;
  }
  BivariateSeries& operator*=(const T& s) {
    for (auto& v : c_) v *= s;
    return *this;
  }

  friend BivariateSeries operator+(BivariateSeries a, const BivariateSeries& b) { return a += b; }
  friend BivariateSeries operator-(BivariateSeries a, const BivariateSeries& b) { return a -= b; }
  friend BivariateSeries operator*(BivariateSeries a, const T& s) { return a *= s; }
  friend BivariateSeries operator*(const T& s, BivariateSeries a) { return a *= s; }

  // Truncated product.
  friend BivariateSeries operator*(const BivariateSeries& a, const BivariateSeries& b) {
    a.require_same(b);
    const int n = a.n_;
    BivariateSeries r(n);
    for (int da = 0; da <= n; ++da) {
      for (int ja = 0; ja <= da; ++ja) {
        const T& ca = a.c_[index(da - ja, ja)];
        if (ca == 0) continue;
        for (int db = 0; db + da <= n; ++db) {
          const std::size_t base_b = index(db, 0);
          const std::size_t base_r = index(da + db, 0) + ja;
          for (int jb = 0; jb <= db; ++jb) r.c_[base_r + jb] += ca * b.c_[base_b + jb];
        }
      }
    }
    return r;
  }

  // Drop every term of total degree > degree, keeping the storage size.
  BivariateSeries truncated(int degree) const {
    BivariateSeries r(*this);
    for (int d = degree + 1; d <= n_; ++d)
      for (int j = 0; j <= d; ++j) r.c_[index(d - j, j)] = T(0);
    return r;
  }

  BivariateSeries homogeneous_part(int degree) const {
    BivariateSeries r(n_);
    if (degree < 0 || degree > n_) return r;
    for (int j = 0; j <= degree; ++j) r.c_[index(degree - j, j)] = c_[index(degree - j, j)];
    return r;
  }

  T evaluate(const T& x, const T& y) const {
    // Horner in Y for each power of X would need a different layout; the
    // direct sum is fine at N <= 9.
    T total = 0;
    T xp = 1;
    std::vector<T> ypow(n_ + 1);
    ypow[0] = 1;
    for (int j = 1; j <= n_; ++j) ypow[j] = ypow[j - 1] * y;
    for (int i = 0; i <= n_; ++i) {
      for (int j = 0; i + j <= n_; ++j) total += c_[index(i, j)] * xp * ypow[j];
      xp *= x;
    }
    return total;
  }

  // Partial derivatives (degree drops by one; top degree becomes zero).
  BivariateSeries d_dx() const {
    BivariateSeries r(n_);
    for (int d = 1; d <= n_; ++d)
      for (int j = 0; j < d; ++j) {
        const int i = d - j;
        r.c_[index(i - 1, j)] = c_[index(i, j)] * T(i);
      }
    return r;
  }
  BivariateSeries d_dy() const {
    BivariateSeries r(n_);
    for (int d = 1; d <= n_; ++d)
      for (int j = 1; j <= d; ++j) r.c_[index(d - j, j - 1)] = c_[index(d - j, j)] * T(j);
    return r;
  }

  // Substitute X = a11 u + a12 v, Y = a21 u + a22 v.
  BivariateSeries compose_linear(const T& a11, const T& a12, const T& a21, const T& a22) const {
    const BivariateSeries lx = linear(a11, a12, T(0), n_);
    const BivariateSeries ly = linear(a21, a22, T(0), n_);
    std::vector<BivariateSeries> px(n_ + 1, BivariateSeries(n_)), py(n_ + 1, BivariateSeries(n_));
    px[0] = constant(T(1), n_);
    py[0] = constant(T(1), n_);
    for (int q = 1; q <= n_; ++q) {
      px[q] = px[q - 1] * lx;
      py[q] = py[q - 1] * ly;
    }
    BivariateSeries r(n_);
    for (int i = 0; i <= n_; ++i)
      for (int j = 0; i + j <= n_; ++j) {
        const T& c = c_[index(i, j)];
        if (c == 0) continue;
        r += (px[i] * py[j]) * c;
      }
    return r;
  }

  template <class U>
  BivariateSeries<U> cast() const {
    BivariateSeries<U> r(n_);
    for (int i = 0; i <= n_; ++i)
      for (int j = 0; i + j <= n_; ++j) r(i, j) = static_cast<U>(c_[index(i, j)]);
    return r;
  }

  static constexpr std::size_t slots(int n) {
    return static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(n + 2) / 2;
  }
  static constexpr std::size_t index(int i, int j) {
    const int d = i + j;
    return static_cast<std::size_t>(d) * static_cast<std::size_t>(d + 1) / 2 +
           static_cast<std::size_t>(j);
  }

 private:
  std::size_t checked_index(int i, int j) const {
    if (i < 0 || j < 0 || i + j > n_) throw std::out_of_range("monomial beyond truncation degree");
    return index(i, j);
  }
  void require_same(const BivariateSeries& o) const {
    if (o.n_ != n_) throw std::invalid_argument("series degree mismatch");
  }

  int n_;
  std::vector<T> c_;
};

extern template class BivariateSeries<HighReal>;
extern template class BivariateSeries<double>;

// Coefficients of (1 + t)^a up to t^n: generalized binomial numbers.
template <class T>
std::vector<T> binomial_series(const T& a, int n) {
  std::vector<T> b(n + 1);
  b[0] = 1;
  for (int q = 1; q <= n; ++q) b[q] = b[q - 1] * (a - T(q - 1)) / T(q);
  return b;
}

}  // namespace sirs
