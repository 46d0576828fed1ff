#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <initializer_list>
#include <span>

namespace pcyl {

inline constexpr int kMaxDim = 8;

// Fixed-capacity real vector with a runtime dimension (1..kMaxDim). Storage is
// inline so lines and points can be copied around hot loops without allocation.
class Vec {
 public:
  Vec() = default;
  explicit Vec(int dim) : dim_(dim) { assert(dim >= 0 && dim <= kMaxDim); }
  Vec(std::initializer_list<double> values) : dim_(static_cast<int>(values.size())) {
    assert(dim_ <= kMaxDim);
    int i = 0;
    for (double v : values) c_[i++] = v;
  }
  static Vec from_span(std::span<const double> values) {
    Vec v(static_cast<int>(values.size()));
    for (int i = 0; i < v.dim_; ++i) v.c_[i] = values[i];
    return v;
  }
  static Vec unit(int dim, int axis) {
    Vec v(dim);
    v.c_[axis] = 1.0;
    return v;
  }

  int dim() const { return dim_; }
  double& operator[](int i) { return c_[i]; }
  double operator[](int i) const { return c_[i]; }
  std::span<const double> coords() const { return {c_.data(), static_cast<std::size_t>(dim_)}; }

  Vec& operator+=(const Vec& o) {
    assert(o.dim_ == dim_);
    for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    assert(o.dim_ == dim_);
    for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < dim_; ++i) c_[i] *= s;
    return *this;
  }

  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(Vec a, double s) { return a *= s; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend Vec operator-(Vec a) { return a *= -1.0; }

  friend bool operator==(const Vec& a, const Vec& b) {
    if (a.dim_ != b.dim_) return false;
    for (int i = 0; i < a.dim_; ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }

 private:
  std::array<double, kMaxDim> c_{};
  int dim_ = 0;
};

inline double dot(const Vec& a, const Vec& b) {
  assert(a.dim() == b.dim());
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}
inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }
inline double distance(const Vec& a, const Vec& b) { return norm(a - b); }

inline bool all_finite(const Vec& a) {
  for (int i = 0; i < a.dim(); ++i)
    if (!std::isfinite(a[i])) return false;
  return true;
}

}  // namespace pcyl
