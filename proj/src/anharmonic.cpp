#include "aprop/anharmonic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "aprop/errors.hpp"
#include "aprop/jet.hpp"
#include "aprop/special_fn.hpp"

namespace aprop {

namespace {

// Polynomial in (phiB, phi0), coefficient c[i][j] of phiB^i phi0^j.
struct Poly2 {
  static constexpr int D = 4 * kMuCap;
  std::array<double, (D + 1) * (D + 1)> c{};
  int degB = 0, deg0 = 0;

  double& at(int i, int j) { return c[i * (D + 1) + j]; }
  double at(int i, int j) const { return c[i * (D + 1) + j]; }

  Poly2 d_phiB(int n) const {
    Poly2 r;
    if (n > degB) return r;
    r.degB = degB - n;
    r.deg0 = deg0;
    for (int i = n; i <= degB; ++i) {
      double f = 1;
      for (int k = 0; k < n; ++k) f *= i - k;
      for (int j = 0; j <= deg0; ++j) r.at(i - n, j) = f * at(i, j);
    }
    return r;
  }

  void add_product(const Poly2& a, const Poly2& b, double w) {
    if (a.degB + b.degB > D || a.deg0 + b.deg0 > D) throw DomainError("polynomial degree cap exceeded");
    for (int i = 0; i <= a.degB; ++i)
      for (int j = 0; j <= a.deg0; ++j) {
        double x = a.at(i, j);
        if (x == 0) continue;
        for (int k = 0; k <= b.degB; ++k)
          for (int l = 0; l <= b.deg0; ++l) at(i + k, j + l) += w * x * b.at(k, l);
      }
    degB = std::max(degB, a.degB + b.degB);
    deg0 = std::max(deg0, a.deg0 + b.deg0);
  }

  double eval(double x, double y) const {
    double s = 0;
    for (int i = degB; i >= 0; --i) {
      double row = 0;
      for (int j = deg0; j >= 0; --j) row = row * y + at(i, j);
      s = s * x + row;
    }
    return s;
  }
};

// d^n_{phi0} h_kappa = -96 H_{4-kappa, kappa-n}, by index lowering
Poly2 h_poly(int kappa, int n, double gamma) {
  Poly2 r;
  int p = 4 - kappa, q = kappa - n;
  if (q < 0) return r;
  r.degB = p;
  r.deg0 = q;
  for (int k = 0; k <= std::min(p, q); ++k)
    r.at(p - k, q - k) = -96.0 * std::pow(gamma, k) / (factorial(p - k) * factorial(k) * factorial(q - k));
  return r;
}

class Recurrence {
 public:
  Recurrence(const BoundaryData& bd, int n_start) : bd_(bd), n_start_(n_start) {
    for (int k = 0; k <= 4; ++k)
      for (int n = 0; n <= 4; ++n) h_[k][n] = h_poly(k, n, bd.gamma);
  }

  double operator()(const KappaVector& kv) { return poly(kv).eval(bd_.phiB_hat, bd_.phi0_hat); }

 private:
  const Poly2& poly(const KappaVector& kv) {
    auto it = memo_.find(kv);
    if (it != memo_.end()) return it->second;
    Poly2 r;
    if (kv.size() == 1) {
      r = h_[kv[0]][0];
    } else {
      KappaVector rest(kv.begin() + 1, kv.end());
      const Poly2& inner = poly(rest);
      double w = 1;
      for (int n = 0; n <= 4; ++n) {
        if (n > 0) w /= 2.0 * n;
        if (n < n_start_) continue;
        r.add_product(h_[kv[0]][n], inner.d_phiB(n), w);
      }
    }
    return memo_.emplace(kv, r).first->second;
  }

  const BoundaryData& bd_;
  int n_start_;
  Poly2 h_[5][5];
  std::map<KappaVector, Poly2> memo_;
};

void check_kv(const KappaVector& kv) {
  if (kv.empty() || kv.size() > static_cast<std::size_t>(kMuCap))
    throw DomainError("kappa vector length must be in [1, " + std::to_string(kMuCap) + "]");
  for (int k : kv)
    if (k < 0 || k > 4) throw DomainError("kappa entries must be in [0, 4]");
}

void check_solution(const OscillatorSolution& sol) {
  if (!sol.q_positive) throw DomainError("Q has a zero in (0, beta]; kernel undefined");
}

// all kappa vectors of length mu, lexicographic
std::vector<KappaVector> all_kappas(int mu) {
  std::vector<KappaVector> out;
  KappaVector kv(mu, 0);
  while (true) {
    out.push_back(kv);
    int i = mu - 1;
    while (i >= 0 && kv[i] == 4) kv[i--] = 0;
    if (i < 0) break;
    ++kv[i];
  }
  return out;
}

double kappa_sum(NestedIntegrals& nested, Recurrence& rec, int mu) {
  double s = 0;
  for (const KappaVector& kv : all_kappas(mu)) {
    double I = nested(kv);
    if (I == 0) continue;
    KappaVector slots(kv.rbegin(), kv.rend());
    s += I * rec(slots);
  }
  return s;
}

void check_mu(int mu) {
  if (mu < 0 || mu > kMuCap) throw DomainError("mu must be in [0, " + std::to_string(kMuCap) + "]");
}

// (sqrt v)^n H_n(u / sqrt v) as a polynomial in (u, v)
template <class T>
T hermite_uv(int n, const T& u, const T& v) {
  std::vector<T> up(n + 1), vp(n / 2 + 1);
  up[0] = T{} + 1.0;
  for (int k = 1; k <= n; ++k) up[k] = up[k - 1] * (2.0 * u);
  vp[0] = T{} + 1.0;
  for (int k = 1; k <= n / 2; ++k) vp[k] = vp[k - 1] * v;
  T s{};
  for (int m = 0; 2 * m <= n; ++m) {
    double c = factorial(n) / (factorial(m) * factorial(n - 2 * m)) * (m % 2 ? -1.0 : 1.0);
    s = s + c * (up[n - 2 * m] * vp[m]);
  }
  return s;
}

struct Num {
  double x = 0;
  friend Num operator+(Num a, Num b) { return {a.x + b.x}; }
  friend Num operator+(Num a, double b) { return {a.x + b}; }
  friend Num operator*(Num a, Num b) { return {a.x * b.x}; }
  friend Num operator*(double a, Num b) { return {a * b.x}; }
  friend Num operator*(Num a, double b) { return {a.x * b}; }
};

double integral_from(const std::vector<double>& v, double h, int first) {
  return cumulative_from_right(v, h, first)[first];
}

}  // namespace

NestedIntegrals::NestedIntegrals(const OscillatorSolution& sol, const CoefficientModel& model)
    : sol_(sol) {
  check_solution(sol);
  const int G = sol.grid_n;
  weight_.assign(5, std::vector<double>(G + 1));
  for (int j = 0; j <= G; ++j) {
    double a = model.a(sol.grid[j]);
    double q = sol.Q[j], qi = sol.QI[j];
    for (int k = 0; k <= 4; ++k) weight_[k][j] = a * std::pow(q, 4 - k) * std::pow(qi, k);
  }
}

const std::vector<double>& NestedIntegrals::table(const KappaVector& suffix) {
  auto it = cache_.find(suffix);
  if (it != cache_.end()) return it->second;
  std::vector<double> t;
  if (suffix.empty()) {
    t.assign(sol_.grid_n + 1, 1.0);
  } else {
    KappaVector rest(suffix.begin() + 1, suffix.end());
    const std::vector<double>& inner = table(rest);
    const std::vector<double>& w = weight_[suffix[0]];
    std::vector<double> v(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) v[j] = w[j] * inner[j];
    t = cumulative_from_right(v, sol_.h, 0);
  }
  return cache_.emplace(suffix, std::move(t)).first->second;
}

double NestedIntegrals::operator()(const KappaVector& kv) {
  if (kv.size() > static_cast<std::size_t>(kMuCap)) throw DomainError("nested integral order above cap");
  for (int k : kv)
    if (k < 0 || k > 4) throw DomainError("kappa entries must be in [0, 4]");
  return table(kv)[0];
}

double nested_integral(const OscillatorSolution& sol, const CoefficientModel& model,
                       const KappaVector& kv) {
  NestedIntegrals n(sol, model);
  return n(kv);
}

double h_kappa(int kappa, const BoundaryData& bd) {
  if (kappa < 0 || kappa > 4) throw DomainError("kappa must be in [0, 4]");
  return -96.0 * incomplete_hermite_pq(4 - kappa, kappa, bd.gamma, bd.phiB_hat, bd.phi0_hat);
}

double d_function(const KappaVector& kv, const BoundaryData& bd) {
  check_kv(kv);
  Recurrence rec(bd, 0);
  return rec(kv);
}

double z_function(const KappaVector& kv, const BoundaryData& bd) {
  check_kv(kv);
  Recurrence rec(bd, 1);
  return rec(kv);
}

double series_coefficient(int mu) {
  check_mu(mu);
  if (mu == 0) return 1.0;
  return factorial(4) / factorial(4 * mu) * (mu % 2 ? -1.0 : 1.0) * std::pow(0.25, mu);
}

double w_mu(const OscillatorSolution& sol, const CoefficientModel& model, const BoundaryData& bd,
            int mu) {
  check_mu(mu);
  if (mu == 0) return 1.0;
  NestedIntegrals nested(sol, model);
  Recurrence rec(bd, 0);
  return kappa_sum(nested, rec, mu) / series_coefficient(mu);
}

double w_mu_direct(const OscillatorSolution& sol, const CoefficientModel& model,
                   const BoundaryData& bd, int mu) {
  if (mu != 1 && mu != 2) throw DomainError("w_mu_direct supports mu in {1, 2}");
  check_solution(sol);
  const int G = sol.grid_n;
  const double pb = bd.phiB_hat, p0 = bd.phi0_hat;
  std::vector<double> aq4(G + 1);
  for (int j = 0; j <= G; ++j) aq4[j] = model.a(sol.grid[j]) * std::pow(sol.Q[j], 4);

  if (mu == 1) {
    // Q^4 (sqrt V)^4 H_4(U/sqrt V) = P_4(Q U, Q^2 V) by homogeneity
    std::vector<double> v(G + 1);
    for (int j = 0; j <= G; ++j) {
      double q = sol.Q[j], qi = sol.QI[j];
      Num u{pb * q + p0 * qi}, w{-q * qi};
      v[j] = model.a(sol.grid[j]) * hermite_uv(4, u, w).x;
    }
    return integral_from(v, sol.h, 0);
  }

  // mu = 2: U = p0 [I1 + (xi-1) I2] + xi pb, V = -I1 - (xi^2-1) I2, jets in eta = xi - 1
  std::vector<double> outer(G + 1, 0.0), inner(G + 1);
  for (int j = 1; j < G; ++j) {
    double I1 = sol.I_of_tau[j];
    for (int k = j; k <= G; ++k) {
      double I2 = sol.I_of_tau[k];
      Jet<4> u, v;
      u.c[0] = p0 * I1 + pb;
      u.c[1] = p0 * I2 + pb;
      v.c[0] = -I1;
      v.c[1] = -2 * I2;
      v.c[2] = -I2;
      inner[k] = aq4[k] * hermite_uv(8, u, v).derivative(4);
    }
    outer[j] = aq4[j] * integral_from(inner, sol.h, j);
  }
  outer[0] = 4 * outer[1] - 6 * outer[2] + 4 * outer[3] - outer[4];
  return integral_from(outer, sol.h, 0);
}

P1Result p1_series(const OscillatorSolution& sol, const CoefficientModel& model,
                   const BoundaryData& bd, int mu_max) {
  check_mu(mu_max);
  NestedIntegrals nested(sol, model);
  Recurrence rec(bd, 1);
  P1Result r;
  for (int mu = 1; mu <= mu_max; ++mu) {
    r.value += kappa_sum(nested, rec, mu);
    r.partial_sums.push_back(r.value);
  }
  return r;
}

PropagatorBreakdown propagator(const OscillatorSolution& sol, const CoefficientModel& model,
                               double phi0, double phiB, int mu_max) {
  check_mu(mu_max);
  check_solution(sol);
  regularized_Y(sol);
  BoundaryData bd = make_boundary(sol, phi0, phiB);
  HarmonicPart hp = harmonic_propagator(sol, bd);
  PropagatorBreakdown b;
  b.harmonic_exponent = hp.exponent;
  b.harmonic_value = std::exp(hp.exponent);
  b.f_beta = sol.f.back();
  NestedIntegrals nested(sol, model);
  Recurrence rec(bd, 0);
  double sum = 0, last = 0;
  for (int mu = 0; mu <= mu_max; ++mu) {
    double coef = series_coefficient(mu);
    double w = mu == 0 ? 1.0 : kappa_sum(nested, rec, mu) / coef;
    b.series_coefficients.push_back(coef);
    b.W_mu_terms.push_back(w);
    last = coef * w;
    sum += last;
  }
  double scale = b.harmonic_value / std::sqrt(b.f_beta);
  b.total = scale * sum;
  b.truncation_estimate = std::abs(scale * last);
  if (mu_max >= 1) {
    P1Result p = p1_series(sol, model, bd, mu_max);
    b.p1 = p.value;
    b.p1_partial_sums = p.partial_sums;
  }
  return b;
}

PropagatorBreakdown propagator(const CoefficientModel& model, double phi0, double phiB, int mu_max,
                               int grid_n) {
  check_mu(mu_max);
  OscillatorSolution sol = solve(model, grid_n);
  return propagator(sol, model, phi0, phiB, mu_max);
}

}  // namespace aprop
