#include "aprop/oscillator_ode.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include "aprop/errors.hpp"

namespace aprop {

namespace {

struct Linear2 {
  // y'' = p(t) y' + q(t) y
  std::function<double(double)> p, q;
};

struct Trajectory {
  std::vector<double> y, yd;
};

Trajectory rk4(const Linear2& ode, double beta, int steps, double y0, double yd0) {
  Trajectory tr;
  tr.y.resize(steps + 1);
  tr.yd.resize(steps + 1);
  double h = beta / steps, y = y0, yd = yd0;
  tr.y[0] = y;
  tr.yd[0] = yd;
  auto acc = [&](double t, double a, double b) { return ode.p(t) * b + ode.q(t) * a; };
  for (int i = 0; i < steps; ++i) {
    double t = i * h;
    double k1y = yd, k1v = acc(t, y, yd);
    double k2y = yd + 0.5 * h * k1v, k2v = acc(t + 0.5 * h, y + 0.5 * h * k1y, k2y);
    double k3y = yd + 0.5 * h * k2v, k3v = acc(t + 0.5 * h, y + 0.5 * h * k2y, k3y);
    double k4y = yd + h * k3v, k4v = acc(t + h, y + h * k3y, k4y);
    y += h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y);
    yd += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    if (!std::isfinite(y) || !std::isfinite(yd)) throw DomainError("ODE solution overflowed");
    tr.y[i + 1] = y;
    tr.yd[i + 1] = yd;
  }
  return tr;
}

// values at the coarse grid from the doubled run, plus a Richardson estimate
double solve_doubled(const Linear2& ode, double beta, int grid_n, double y0, double yd0,
                     std::vector<double>& y, std::vector<double>& yd) {
  Trajectory coarse = rk4(ode, beta, grid_n, y0, yd0);
  Trajectory fine = rk4(ode, beta, 2 * grid_n, y0, yd0);
  y.resize(grid_n + 1);
  yd.resize(grid_n + 1);
  double est = 0;
  for (int j = 0; j <= grid_n; ++j) {
    y[j] = fine.y[2 * j];
    yd[j] = fine.yd[2 * j];
    est = std::max(est, std::abs(fine.y[2 * j] - coarse.y[j]) / 15);
  }
  return est;
}

void check_grid(const CoefficientModel& model, int grid_n) {
  model.validate();
  if (grid_n < 64) throw DomainError("grid_n must be >= 64");
}

std::vector<double> make_grid(double beta, int grid_n) {
  std::vector<double> g(grid_n + 1);
  for (int j = 0; j <= grid_n; ++j) g[j] = beta * j / grid_n;
  g[grid_n] = beta;
  return g;
}

// Neville extrapolation of (x_i, y_i) to x = 0
double neville_at_zero(std::vector<double> x, std::vector<double> y) {
  std::size_t n = x.size();
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t i = 0; i + m < n; ++i)
      y[i] = (x[i + m] * y[i] - x[i] * y[i + 1]) / (x[i + m] - x[i]);
  return y[0];
}

void build_kernel(const CoefficientModel& model, OscillatorSolution& s) {
  const int G = s.grid_n;
  const double c0 = s.c0;
  std::vector<double> g(G + 1);
  for (int j = 1; j <= G; ++j) {
    double t = s.grid[j];
    g[j] = 1.0 / (model.c(t) * s.Q[j] * s.Q[j]) - 1.0 / (c0 * t * t);
  }
  g[0] = 4 * g[1] - 6 * g[2] + 4 * g[3] - g[4];
  s.I_smooth = cumulative_from_right(g, s.h, 0);
  s.I_of_tau.assign(G + 1, 0);
  s.QI.assign(G + 1, 0);
  s.I_of_tau[0] = std::numeric_limits<double>::infinity();
  s.QI[0] = 1.0 / c0;
  for (int j = 1; j <= G; ++j) {
    double t = s.grid[j];
    s.I_of_tau[j] = s.I_smooth[j] + 1.0 / (c0 * t) - 1.0 / (c0 * s.beta);
    s.QI[j] = s.Q[j] * s.I_smooth[j] + s.Q[j] * (s.beta - t) / (c0 * t * s.beta);
  }
  s.I_of_tau[G] = 0;
  s.QI[G] = 0;

  s.Y_reg = s.I_smooth[0] - 1.0 / (c0 * s.beta);

  // bracket int_eps^beta 1/(cQ^2) - eps/(c(eps) Q(eps)^2) at eps = tau_j
  std::vector<double> xs, ys;
  for (int j = G / 4; j >= 8; j /= 2) {
    double t = s.grid[j];
    xs.push_back(t);
    ys.push_back(s.I_of_tau[j] - t / (model.c(t) * s.Q[j] * s.Q[j]));
  }
  s.Y_reg_extrapolated = neville_at_zero(xs, ys);
  s.Y_boundary = s.Y_reg - model.dlnc(0) / (2 * c0);
}

}  // namespace

std::vector<double> cumulative_from_right(const std::vector<double>& v, double h, int first) {
  const int G = static_cast<int>(v.size()) - 1;
  std::vector<double> out(v.size(), 0.0);
  if (G - first < 1) return out;
  if (G - first < 3) {
    for (int j = G - 1; j >= first; --j) out[j] = out[j + 1] + 0.5 * h * (v[j] + v[j + 1]);
    return out;
  }
  for (int j = G - 1; j >= first; --j) {
    double seg;
    if (j - 1 < first)
      seg = h / 24 * (9 * v[j] + 19 * v[j + 1] - 5 * v[j + 2] + v[j + 3]);
    else if (j + 2 > G)
      seg = h / 24 * (v[j - 2] - 5 * v[j - 1] + 19 * v[j] + 9 * v[j + 1]);
    else
      seg = h / 24 * (-v[j - 1] + 13 * v[j] + 13 * v[j + 1] - v[j + 2]);
    out[j] = out[j + 1] + seg;
  }
  return out;
}

OscillatorSolution solve_Q(const CoefficientModel& model, int grid_n) {
  check_grid(model, grid_n);
  OscillatorSolution s;
  s.beta = model.beta;
  s.grid_n = grid_n;
  s.h = model.beta / grid_n;
  s.c0 = model.c(0);
  s.cB = model.c(model.beta);
  s.grid = make_grid(model.beta, grid_n);
  Linear2 ode{[&](double t) { return -model.dlnc(t); },
              [&](double t) { return 2 * model.b(t) / model.c(t); }};
  s.richardson_Q = solve_doubled(ode, model.beta, grid_n, 0.0, 1.0, s.Q, s.Qdot);
  s.q_positive = true;
  for (int j = 1; j <= grid_n; ++j)
    if (!(s.Q[j] > 0)) s.q_positive = false;
  if (s.q_positive) build_kernel(model, s);
  return s;
}

OscillatorSolution solve_f(const CoefficientModel& model, int grid_n) {
  check_grid(model, grid_n);
  OscillatorSolution s;
  s.beta = model.beta;
  s.grid_n = grid_n;
  s.h = model.beta / grid_n;
  s.c0 = model.c(0);
  s.cB = model.c(model.beta);
  s.grid = make_grid(model.beta, grid_n);
  Linear2 ode{[&](double t) { return model.dlnc(t); },
              [&](double t) { return 2 * model.b(t) / model.c(t) + model.d2lnc(t); }};
  s.richardson_f = solve_doubled(ode, model.beta, grid_n, 0.0, 2 * std::numbers::pi / s.c0, s.f, s.fdot);
  return s;
}

OscillatorSolution solve(const CoefficientModel& model, int grid_n) {
  OscillatorSolution s = solve_Q(model, grid_n);
  OscillatorSolution f = solve_f(model, grid_n);
  s.f = std::move(f.f);
  s.fdot = std::move(f.fdot);
  s.richardson_f = f.richardson_f;
  return s;
}

double kernel_I(const OscillatorSolution& s, double tau) {
  if (!s.q_positive) throw DomainError("kernel_I: Q has a zero in (0, beta]");
  if (!(tau > 0)) throw DomainError("kernel_I diverges at tau = 0");
  if (tau > s.beta * (1 + 1e-14)) throw DomainError("kernel_I: tau beyond beta");
  if (tau >= s.beta) return 0;
  // cubic Lagrange interpolation of the smooth part
  int G = s.grid_n;
  int j = static_cast<int>(std::floor(tau / s.h));
  j = std::clamp(j - 1, 0, G - 3);
  double sm = 0;
  for (int a = 0; a < 4; ++a) {
    double w = 1;
    for (int b = 0; b < 4; ++b)
      if (b != a) w *= (tau - s.grid[j + b]) / (s.grid[j + a] - s.grid[j + b]);
    sm += w * s.I_smooth[j + a];
  }
  return sm + 1.0 / (s.c0 * tau) - 1.0 / (s.c0 * s.beta);
}

RegularizedY regularized_Y(const OscillatorSolution& s, double tol) {
  if (!s.q_positive) throw DomainError("regularized_Y: Q has a zero in (0, beta]");
  RegularizedY r{s.Y_reg, s.Y_reg_extrapolated};
  if (std::abs(r.subtraction - r.extrapolation) > tol * std::max(1.0, std::abs(r.subtraction)))
    throw ConvergenceError("regularized_Y: routes disagree (" + std::to_string(r.subtraction) + " vs " +
                           std::to_string(r.extrapolation) + "); refine the grid");
  return r;
}

BoundaryData make_boundary(const OscillatorSolution& s, double phi0, double phiB) {
  BoundaryData b;
  b.phi0 = phi0;
  b.phiB = phiB;
  b.phi0_hat = s.c0 * phi0 / std::sqrt(2.0);
  b.phiB_hat = phiB / (std::sqrt(2.0) * s.Q.back());
  b.gamma = 0.25;
  return b;
}

HarmonicPart harmonic_propagator(const OscillatorSolution& s, const BoundaryData& bd) {
  if (!s.q_positive) throw DomainError("harmonic_propagator: Q has a zero in (0, beta]");
  if (s.f.empty()) throw DomainError("harmonic_propagator: f has not been solved");
  double fB = s.f.back();
  if (!(fB > 0)) throw DomainError("harmonic_propagator: f(beta) <= 0");
  double QB = s.Q.back(), QdB = s.Qdot.back();
  HarmonicPart hp;
  hp.exponent = s.Y_boundary * s.c0 * s.c0 * bd.phi0 * bd.phi0 / 2 + s.c0 * bd.phi0 * bd.phiB / QB -
                (QdB / QB) * s.cB * bd.phiB * bd.phiB / 2;
  hp.prefactor = 1 / std::sqrt(fB);
  hp.value = hp.prefactor * std::exp(hp.exponent);
  return hp;
}

double mehler_reference(double k, double nu, double x_i, double x_f) {
  if (!(k > 0) || !(nu > 0)) throw DomainError("mehler_reference needs k, nu > 0");
  return std::sqrt(k / (2 * std::numbers::pi * std::sinh(nu))) *
         std::exp(-k * (x_i * x_i + x_f * x_f) / (2 * std::tanh(nu)) + k * x_i * x_f / std::sinh(nu));
}

}  // namespace aprop
