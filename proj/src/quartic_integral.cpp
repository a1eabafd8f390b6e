#include "aprop/quartic_integral.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "aprop/errors.hpp"
#include "aprop/special_fn.hpp"

namespace aprop {

namespace {

void check_a(double a) {
  if (!(a > 0) || !std::isfinite(a)) throw DomainError("quartic coefficient a must be > 0");
}

double poly(double a, double b, double c, double x) { return ((a * x * x + b) * x + c) * x; }

// global minimiser of a x^4 + b x^2 + c x among the real critical points
double argmin(double a, double b, double c) {
  // 4a x^3 + 2b x + c = 0; Newton from several starts
  std::array<double, 3> starts{-1.0, 0.0, 1.0};
  double scale = std::max({1.0, std::sqrt(std::abs(b) / a), std::cbrt(std::abs(c) / a)});
  double best = 0, best_v = poly(a, b, c, 0);
  for (double s : starts) {
    double x = s * scale;
    for (int it = 0; it < 200; ++it) {
      double g = (4 * a * x * x + 2 * b) * x + c;
      double h = 12 * a * x * x + 2 * b;
      if (h <= 0) h = std::abs(h) + 4 * a;
      double dx = g / h;
      x -= dx;
      if (std::abs(dx) < 1e-15 * (1 + std::abs(x))) break;
    }
    double v = poly(a, b, c, x);
    if (v < best_v) {
      best_v = v;
      best = x;
    }
  }
  return best;
}

}  // namespace

double i1_quadrature(double a, double b, double c) {
  check_a(a);
  double x0 = argmin(a, b, c);
  double p0 = poly(a, b, c, x0);
  boost::math::quadrature::sinh_sinh<double> integrator(12);
  auto f = [&](double t) {
    double e = poly(a, b, c, x0 + t) - p0;
    return std::exp(-e);
  };
  double err = 0, l1 = 0;
  double v = integrator.integrate(f, 1e-15, &err, &l1);
  if (!std::isfinite(v) || err > 1e-12 * l1)
    throw ConvergenceError("i1_quadrature: achieved error estimate " + std::to_string(err / l1));
  return v * std::exp(-p0);
}

SeriesTrace i1_series_trace(double a, double b, double c, int m_max) {
  check_a(a);
  if (b < 0) throw DomainError("i1_series needs b >= 0 (negative z not supported)");
  double s2a = std::sqrt(2 * a);
  double xi = c * c / (4 * s2a), z = b / s2a;
  SeriesTrace tr;
  double coef = 1, sum = 0;
  int small = 0;
  for (int m = 0; m <= 4 * m_max; ++m) {
    if (m > 0) coef *= xi / m;
    double inc = coef == 0 ? 0 : coef * pcf_D_expscaled(-m - 0.5, z);
    sum += inc;
    tr.increments.push_back(inc);
    small = std::abs(inc) < 1e-16 * std::abs(sum) ? small + 1 : 0;
    if (xi == 0 || small >= 3) {
      tr.value = std::sqrt(std::numbers::pi) * std::pow(2 * a, -0.25) * sum;
      return tr;
    }
  }
  throw ConvergenceError("i1_series: not converged at the term cap");
}

double i1_series(double a, double b, double c, int m_max) {
  return i1_series_trace(a, b, c, m_max).value;
}

double i1_hermite_method(double a, double b, double c, int mu_max, bool resum_inner) {
  check_a(a);
  if (b < 0) throw DomainError("i1_hermite_method needs b >= 0");
  double s2a = std::sqrt(2 * a);
  double z = b / s2a, w = c * c / s2a;

  auto inner = [&](int mu) {
    if (resum_inner) return pcf_D_expscaled(-mu - 0.5, z);
    double sum = 0, coef = 1;
    int small = 0;
    for (int j = 0; j < 2000; ++j) {
      if (j > 0) coef *= -z / j * (mu + 0.5 + j - 1);
      double inc = coef == 0 ? 0 : coef * pcf_D_at_zero(-j - mu - 0.5);
      sum += inc;
      if (z == 0) return sum;
      small = std::abs(inc) < 1e-17 * std::abs(sum) ? small + 1 : 0;
      if (small >= 3) return sum;
    }
    throw ConvergenceError("i1_hermite_method: inner Taylor sum did not converge");
  };

  double sum = 0;
  int small = 0;
  // (w^mu/(2mu)!) Gamma(mu+1/2) = sqrt(pi) (w/4)^mu / mu!
  double coef = std::sqrt(std::numbers::pi);
  for (int mu = 0; mu <= 4 * mu_max; ++mu) {
    if (mu > 0) coef *= w / (4.0 * mu);
    double inc = coef == 0 ? 0 : coef * inner(mu);
    sum += inc;
    if (w == 0) return std::pow(2 * a, -0.25) * sum;
    small = std::abs(inc) < 1e-16 * std::abs(sum) ? small + 1 : 0;
    if (small >= 3) return std::pow(2 * a, -0.25) * sum;
  }
  throw ConvergenceError("i1_hermite_method: not converged at the term cap");
}

}  // namespace aprop
