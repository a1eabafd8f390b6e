#include "aprop/special_fn.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "aprop/errors.hpp"

namespace aprop {

namespace {

constexpr double kPi = std::numbers::pi;

int half_integer_m(double nu) {
  // nu = -m - 1/2
  double m = -nu - 0.5;
  double r = std::round(m);
  if (std::abs(m - r) > 1e-12 || r < 0)
    throw DomainError("parabolic cylinder order must be -m-1/2 with integer m >= 0, got " +
                      std::to_string(nu));
  return static_cast<int>(r);
}

template <class F>
double half_line(F f, const char* what) {
  static thread_local boost::math::quadrature::exp_sinh<double> integrator(12);
  double err = 0, l1 = 0;
  double v = integrator.integrate(f, 1e-15, &err, &l1);
  if (!std::isfinite(v) || err > 1e-12 * std::max(l1, std::numeric_limits<double>::min()))
    throw ConvergenceError(std::string(what) + ": quadrature error estimate " + std::to_string(err));
  return v;
}

// 2/Gamma(m+1/2) int_0^inf y^{2m} exp(-y^4/2 - z y^2) dy
double expscaled_integral(int m, double z) {
  double lg = std::lgamma(m + 0.5);
  auto f = [m, z, lg](double y) {
    if (y == 0) return m == 0 ? 2.0 * std::exp(-lg) : 0.0;
    double y2 = y * y;
    double e = 2 * m * std::log(y) - 0.5 * y2 * y2 - z * y2 - lg;
    return 2.0 * std::exp(e);
  };
  return half_line(f, "pcf_D");
}

// 2/Gamma(m+1/2) int_0^inf y^{2m} exp(-y^2 - y^4/(2 z^2)) dy
double scaled_integral(int m, double z) {
  double lg = std::lgamma(m + 0.5);
  double w = 0.5 / (z * z);
  auto f = [m, w, lg](double y) {
    if (y == 0) return m == 0 ? 2.0 * std::exp(-lg) : 0.0;
    double y2 = y * y;
    double e = 2 * m * std::log(y) - y2 - w * y2 * y2 - lg;
    return 2.0 * std::exp(e);
  };
  return half_line(f, "pcf_scaled");
}

void check_z(double z) {
  if (!(z >= 0) || !std::isfinite(z)) throw DomainError("parabolic cylinder argument must be finite and >= 0");
}

}  // namespace

void PcfIndex::validate() const {
  if (m < 0 || extra < 0 || (rho != 0 && rho != 1))
    throw DomainError("invalid PcfIndex");
}

double pcf_D_expscaled(double nu, double z) {
  int m = half_integer_m(nu);
  check_z(z);
  if (z <= 1.0) return expscaled_integral(m, z);
  return std::exp(std::log(scaled_integral(m, z)) - (m + 0.5) * std::log(z));
}

double pcf_scaled(double nu, double z) {
  int m = half_integer_m(nu);
  check_z(z);
  if (z >= 1.0) return scaled_integral(m, z);
  if (z == 0) return 0.0;
  return std::pow(z, m + 0.5) * expscaled_integral(m, z);
}

double pcf_D(double nu, double z) {
  int m = half_integer_m(nu);
  check_z(z);
  if (z <= 1.0) return expscaled_integral(m, z) * std::exp(-0.25 * z * z);
  double l = std::log(scaled_integral(m, z)) - (m + 0.5) * std::log(z) - 0.25 * z * z;
  return std::exp(l);
}

double pcf_D_at_zero(double nu) {
  if (!(nu < 1)) throw DomainError("pcf_D_at_zero needs nu < 1");
  return std::exp(0.5 * nu * std::log(2.0) + 0.5 * std::log(kPi) - std::lgamma(0.5 * (1 - nu)));
}

double pochhammer(double x, int n) {
  double p = 1;
  for (int i = 0; i < n; ++i) p *= x + i;
  return p;
}

double factorial(int n) {
  if (n < 0) return 0;
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  double b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return std::round(b);
}

double hyp2f1(double a, double b, double c, double x) {
  if (a == 0 || b == 0) return 1.0;
  if (x == 1.0) {
    if (c - a - b <= 0) throw DomainError("hyp2f1 diverges at x = 1");
    return std::tgamma(c) * std::tgamma(c - a - b) / (std::tgamma(c - a) * std::tgamma(c - b));
  }
  if (!(std::abs(x) < 1)) throw DomainError("hyp2f1 argument outside the principal series disc");
  double g = c - a - b;
  if (x > 0.5 && std::abs(g - std::round(g)) > 1e-6) {
    double y = 1 - x;
    double A = std::tgamma(c) * std::tgamma(g) / (std::tgamma(c - a) * std::tgamma(c - b));
    double B = std::tgamma(c) * std::tgamma(-g) / (std::tgamma(a) * std::tgamma(b));
    return A * hyp2f1(a, b, 1 - g, y) + std::pow(y, g) * B * hyp2f1(c - a, c - b, 1 + g, y);
  }
  double term = 1, sum = 1;
  for (int k = 0; k < 100000; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * x;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) return sum;
  }
  throw ConvergenceError("hyp2f1 series did not converge");
}

PoincareResult pcf_poincare(double nu, double z, int J) {
  if (!(nu <= 0)) throw DomainError("pcf_poincare needs order nu <= 0");
  if (J < 0) throw DomainError("pcf_poincare needs J >= 0");
  if (!(z * z > 2 * std::abs(nu))) throw DomainError("pcf_poincare outside z^2 > 2|nu|");
  double s = -nu;  // (s)_{2j}
  double two_z2 = 2 * z * z;
  double value = 0, term = 1;
  for (int j = 0; j <= J; ++j) {
    if (j > 0) term *= -(s + 2 * j - 2) * (s + 2 * j - 1) / (j * two_z2);
    value += term;
  }
  double p = s - 0.5;  // D_{-p-1/2}
  double r = two_z2 / (z * z + 2 * p);
  double x = 1 - 4.0 * J * J / (z * z * z * z);
  double tJ = std::abs(pochhammer(s, 2 * J)) / (factorial(J) * std::pow(two_z2, J));
  double bound = r * tJ * hyp2f1(0.5 * J, 0.5, 0.5 * J + 1, x) *
                 std::exp(r * (2 / (z * z)) * hyp2f1(0.5, 0.5, 1.5, x));
  return {value, bound};
}

double pcf_taylor_shift(double nu, double x, double t, double tol, int max_terms) {
  half_integer_m(-nu);
  double sum = 0, coef = 1;
  int small = 0;
  for (int k = 0; k < max_terms; ++k) {
    if (k > 0) coef *= (nu + k - 1) / k * t;
    double inc = coef == 0 ? 0 : coef * pcf_D_expscaled(-nu - k, x);
    sum += inc;
    if (t == 0) return sum;
    small = std::abs(inc) < tol * std::abs(sum) ? small + 1 : 0;
    if (small >= 3) return sum;
  }
  throw ConvergenceError("pcf_taylor_shift: no convergence within max_terms");
}

double pcf_scaled_taylor_shift(double nu, double z, double t, double tol, int max_terms) {
  half_integer_m(-nu);
  if (!(std::abs(t) < 1)) throw DomainError("pcf_scaled_taylor_shift needs |t| < 1");
  double sum = 0, coef = 1;
  int small = 0;
  for (int k = 0; k < max_terms; ++k) {
    if (k > 0) coef *= (nu + k - 1) / k * t;
    double inc = coef == 0 ? 0 : coef * pcf_scaled(-nu - k, z);
    sum += inc;
    if (t == 0) return sum;
    small = std::abs(inc) < tol * std::abs(sum) ? small + 1 : 0;
    if (small >= 3) return sum;
  }
  throw ConvergenceError("pcf_scaled_taylor_shift: no convergence within max_terms");
}

double hermite(int n, double x) {
  if (n < 0 || n > 64) throw DomainError("hermite order must be in [0, 64]");
  if (n == 0) return 1;
  double h0 = 1, h1 = 2 * x;
  for (int k = 1; k < n; ++k) {
    double h2 = 2 * x * h1 - 2 * k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

double hermite_explicit(int n, double x) {
  if (n < 0 || n > 64) throw DomainError("hermite order must be in [0, 64]");
  double s = 0;
  for (int m = 0; 2 * m <= n; ++m)
    s += (m % 2 ? -1.0 : 1.0) * std::pow(2 * x, n - 2 * m) / (factorial(m) * factorial(n - 2 * m));
  return factorial(n) * s;
}

double hermite2(int n, double x, double y) {
  if (n < 0 || n > 64) throw DomainError("hermite2 order must be in [0, 64]");
  double s = 0;
  for (int k = 0; 2 * k <= n; ++k)
    s += std::pow(x, n - 2 * k) * std::pow(y, k) / (factorial(n - 2 * k) * factorial(k));
  return factorial(n) * s;
}

void HermiteIncompleteSpec::validate() const {
  if (n < 0 || kappa < 0 || kappa > n) throw DomainError("incomplete Hermite needs 0 <= kappa <= n");
}

double incomplete_hermite_pq(int p, int q, double gamma, double phi_beta, double phi_0) {
  if (p < 0 || q < 0) return 0;
  double s = 0;
  for (int k = 0; k <= std::min(p, q); ++k)
    s += std::pow(phi_beta, p - k) * std::pow(phi_0, q - k) * std::pow(gamma, k) /
         (factorial(p - k) * factorial(k) * factorial(q - k));
  return s;
}

double incomplete_hermite(const HermiteIncompleteSpec& spec, double phi_beta, double phi_0) {
  spec.validate();
  return incomplete_hermite_pq(spec.n - spec.kappa, spec.kappa, spec.gamma, phi_beta, phi_0);
}

namespace {

void check_multi(int n, const std::vector<double>& xs, const std::vector<double>& ms,
                 const std::vector<double>& taus) {
  std::size_t mu = xs.size();
  if (mu < 1 || ms.size() != mu || taus.size() + 1 != mu)
    throw DomainError("multiindex_hermite: need mu slots, mu diagonal terms and mu-1 couplings");
  if (n < 0 || n > 8) throw DomainError("multiindex_hermite: n must be in [0, 8]");
}

double hm_rec(std::size_t s, std::vector<int>& ord, const std::vector<double>& xs,
              const std::vector<double>& ms, const std::vector<double>& taus) {
  std::size_t mu = xs.size();
  if (s + 1 == mu) return hermite2(ord[s], xs[s], ms[s]);
  int ms_ord = ord[s];
  double total = 0;
  for (int k = 0; k <= ms_ord; ++k) {
    double head = binomial(ms_ord, k) * std::pow(taus[s], k) * hermite2(ms_ord - k, xs[s], ms[s]);
    if (head == 0) continue;
    // distribute k factors of (u_{s+1} + ... + u_{mu-1}) over later slots
    double inner = 0;
    std::vector<int> j(mu, 0);
    auto rec = [&](auto&& self, std::size_t t, int left, double weight) -> void {
      if (t + 1 == mu) {
        j[t] = left;
        if (left > ord[t]) return;
        double w = weight / factorial(left) * factorial(ord[t]) / factorial(ord[t] - left);
        std::vector<int> sub = ord;
        for (std::size_t r = s + 1; r < mu; ++r) sub[r] -= j[r];
        inner += w * hm_rec(s + 1, sub, xs, ms, taus);
        return;
      }
      for (int a = 0; a <= std::min(left, ord[t]); ++a) {
        j[t] = a;
        double w = weight / factorial(a) * factorial(ord[t]) / factorial(ord[t] - a);
        self(self, t + 1, left - a, w);
      }
    };
    rec(rec, s + 1, k, factorial(k));
    total += head * inner;
  }
  return total;
}

// n!/(m)! as a falling factorial; zero when m < 0
double ratio(int n, int m) { return m < 0 ? 0.0 : factorial(n) / factorial(m); }

}  // namespace

double multiindex_hermite_recursive(int n, const std::vector<double>& xs,
                                    const std::vector<double>& ms,
                                    const std::vector<double>& taus) {
  check_multi(n, xs, ms, taus);
  std::vector<int> ord(xs.size(), n);
  return hm_rec(0, ord, xs, ms, taus);
}

double multiindex_hermite4(int n, const std::vector<double>& xs, const std::vector<double>& ms,
                           const std::vector<double>& taus) {
  check_multi(n, xs, ms, taus);
  if (xs.size() != 4) throw DomainError("multiindex_hermite4 needs four slots");
  const double M12 = taus[0], M23 = taus[1], M34 = taus[2];
  auto H = [&](int i, int order) { return order < 0 ? 0.0 : hermite2(order, xs[i], ms[i]); };
  double total = 0;
  for (int k3 = 0; k3 <= n; ++k3)
    for (int k2 = 0; k2 <= n; ++k2)
      for (int k1 = 0; k1 <= n; ++k1) {
        double pre = binomial(n, k3) * binomial(n, k2) * binomial(n, k1) * std::pow(M34, k3) *
                     std::pow(M23, k2) * std::pow(M12, k1) * ratio(n, n - k3);
        if (pre == 0) continue;
        double h1 = H(0, n - k1);
        for (int m = 0; m <= k2; ++m)
          for (int p = 0; p <= k1; ++p)
            for (int q = 0; q <= p; ++q) {
              double c = binomial(k2, m) * binomial(k1, p) * binomial(p, q);
              double t2 = ratio(n - k2, n - k1 - k2 + p) * H(1, n - k2 - (k1 - p));
              double t4 = ratio(n - k3, n - k2 - k3 + m - p + q) * H(3, n - k3 - (k2 - m) - (p - q));
              double t3 = ratio(n - k3, n - k3 - m - q) * H(2, n - k3 - m - q);
              total += pre * c * h1 * t2 * t4 * t3;
            }
      }
  return total;
}

double multiindex_hermite(int n, const std::vector<double>& xs, const std::vector<double>& ms,
                          const std::vector<double>& taus) {
  check_multi(n, xs, ms, taus);
  if (xs.size() > 4) throw DomainError("multiindex_hermite supports at most four slots");
  if (xs.size() == 4) return multiindex_hermite4(n, xs, ms, taus);
  return multiindex_hermite_recursive(n, xs, ms, taus);
}

std::int64_t a_coeff(int j, int k) {
  if (j < 0 || k < 0 || j > k || 2 * j < k) return 0;
  __int128 c = 1;
  for (int i = 1; i <= j; ++i) c = c * (k - j + i) / i;  // C(k, j)
  for (int i = 2 * j - k + 1; i <= j; ++i) c *= i;        // j!/(2j-k)!
  c <<= (2 * j - k);
  if (c > static_cast<__int128>(std::numeric_limits<std::int64_t>::max()))
    throw DomainError("a_coeff overflows 64-bit range");
  return static_cast<std::int64_t>(c);
}

double a_sum(int n, double d) {
  if (n < 0 || n > 32) throw DomainError("a_sum order must be in [0, 32]");
  double s = 0;
  for (int i = (n + 1) / 2; i <= n; ++i) {
    double a = std::ldexp(binomial(n, i) * ratio(i, 2 * i - n), 2 * i - n);
    s += a * std::pow(d, i);
  }
  return s;
}

}  // namespace aprop
