#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace aprop {

// Univariate truncated Taylor series c_0 + c_1 e + ... + c_K e^K.
template <int K>
struct Jet {
  std::array<double, K + 1> c{};

  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  static Jet variable(double v) {
    Jet j;
    j.c[0] = v;
    if constexpr (K >= 1) j.c[1] = 1;
    return j;
  }

  // k-th derivative at the expansion point
  double derivative(int k) const {
    double f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return c[k] * f;
  }

  Jet& operator+=(const Jet& o) {
    for (int i = 0; i <= K; ++i) c[i] += o.c[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int i = 0; i <= K; ++i) c[i] -= o.c[i];
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& v : c) v *= s;
    return *this;
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, double s) {
    a.c[0] += s;
    return a;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i <= K; ++i)
      for (int j = 0; i + j <= K; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
  }
};

template <int K>
Jet<K> pow(const Jet<K>& x, int n) {
  Jet<K> r = Jet<K>::constant(1), b = x;
  while (n > 0) {
    if (n & 1) r = r * b;
    b = b * b;
    n >>= 1;
  }
  return r;
}

// Multivariate truncated Taylor series with a per-variable order cap
// (tensor truncation); coefficient of prod u_i^{k_i}, 0 <= k_i <= order.
class TensorJet {
 public:
  TensorJet(int nvars, int order) : nvars_(nvars), order_(order) {
    std::size_t n = 1;
    for (int i = 0; i < nvars; ++i) n *= static_cast<std::size_t>(order + 1);
    c_.assign(n, 0.0);
  }

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  std::size_t size() const { return c_.size(); }

  double& at(const std::vector<int>& k) { return c_[index(k)]; }
  double at(const std::vector<int>& k) const { return c_[index(k)]; }

  std::size_t index(const std::vector<int>& k) const {
    std::size_t idx = 0;
    for (int i = nvars_ - 1; i >= 0; --i) idx = idx * (order_ + 1) + k[i];
    return idx;
  }

  std::vector<int> multi(std::size_t idx) const {
    std::vector<int> k(nvars_);
    for (int i = 0; i < nvars_; ++i) {
      k[i] = static_cast<int>(idx % (order_ + 1));
      idx /= (order_ + 1);
    }
    return k;
  }

  TensorJet operator*(const TensorJet& o) const {
    TensorJet r(nvars_, order_);
    for (std::size_t a = 0; a < c_.size(); ++a) {
      if (c_[a] == 0) continue;
      auto ka = multi(a);
      for (std::size_t b = 0; b < o.c_.size(); ++b) {
        if (o.c_[b] == 0) continue;
        auto kb = o.multi(b);
        bool ok = true;
        for (int i = 0; i < nvars_ && ok; ++i) ok = ka[i] + kb[i] <= order_;
        if (!ok) continue;
        for (int i = 0; i < nvars_; ++i) kb[i] += ka[i];
        r.c_[r.index(kb)] += c_[a] * o.c_[b];
      }
    }
    return r;
  }

  TensorJet& operator+=(const TensorJet& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  TensorJet& operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
  }

  // exp of a series with zero constant term
  TensorJet exp() const {
    TensorJet result(nvars_, order_), term(nvars_, order_);
    std::vector<int> zero(nvars_, 0);
    result.at(zero) = 1;
    term.at(zero) = 1;
    int max_total = nvars_ * order_;
    for (int k = 1; k <= max_total; ++k) {
      term = term * (*this);
      term *= 1.0 / k;
      result += term;
    }
    return result;
  }

 private:
  int nvars_, order_;
  std::vector<double> c_;
};

}  // namespace aprop
