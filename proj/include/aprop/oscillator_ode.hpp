#pragma once

#include <vector>

#include "aprop/coefficients.hpp"

namespace aprop {

constexpr int kDefaultGridN = 2048;

// Gridded solutions on the uniform grid tau_j = j*beta/grid_n. Values come
// from a run at twice the resolution; richardson_* estimate their error.
struct OscillatorSolution {
  double beta = 0;
  int grid_n = 0;
  double h = 0;
  double c0 = 0, cB = 0;
  std::vector<double> grid;
  std::vector<double> Q, Qdot;
  std::vector<double> f, fdot;
  // kernel I(tau) = int_tau^beta ds/(c Q^2); I_of_tau[0] is +inf
  std::vector<double> I_of_tau;
  // Q(tau) I(tau), finite at tau = 0 where it equals 1/c(0)
  std::vector<double> QI;
  // int_tau^beta [1/(cQ^2) - 1/(c0 s^2)] ds, the smooth part of I
  std::vector<double> I_smooth;
  double Y_reg = 0;               // analytic-subtraction route
  double Y_reg_extrapolated = 0;  // epsilon-extrapolation route
  // phi0^2 coefficient (times 2/c0^2) of the classical action:
  // Y_reg - c'(0)/(2 c(0)^2); equals Y_reg for constant c
  double Y_boundary = 0;
  bool q_positive = false;
  double richardson_Q = 0, richardson_f = 0;
};

struct BoundaryData {
  double phi0 = 0, phiB = 0;
  double phi0_hat = 0, phiB_hat = 0;
  double gamma = 0.25;
};

BoundaryData make_boundary(const OscillatorSolution& sol, double phi0, double phiB);

// Q'' + (ln c)' Q' - (2b/c) Q = 0, Q(0)=0, Q'(0)=1; also fills the kernel
// and regularized boundary integral when Q stays positive.
OscillatorSolution solve_Q(const CoefficientModel& model, int grid_n = kDefaultGridN);

// f'' - (ln c)' f' - (2b/c + (ln c)'') f = 0, f(0)=0, f'(0)=2 pi/c(0).
OscillatorSolution solve_f(const CoefficientModel& model, int grid_n = kDefaultGridN);

// Both of the above merged into one solution.
OscillatorSolution solve(const CoefficientModel& model, int grid_n = kDefaultGridN);

double kernel_I(const OscillatorSolution& sol, double tau);

struct RegularizedY {
  double subtraction;
  double extrapolation;
};

// Throws ConvergenceError if the two routes differ by more than tol.
RegularizedY regularized_Y(const OscillatorSolution& sol, double tol = 1e-6);

struct HarmonicPart {
  double prefactor, exponent, value;
};

HarmonicPart harmonic_propagator(const OscillatorSolution& sol, const BoundaryData& bd);

double mehler_reference(double k, double nu, double x_i, double x_f);

// Integral over [tau_j, beta] of gridded values for every j >= first,
// fourth-order accurate on the uniform grid. Entries below first are 0.
std::vector<double> cumulative_from_right(const std::vector<double>& v, double h, int first = 0);

}  // namespace aprop
