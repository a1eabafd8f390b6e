#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aprop/coefficients.hpp"

namespace aprop {

// Per-slice quantities of the time-sliced integral; index i refers to
// tau_i = i*delta, i = 0..N. Entries outside their defined range are 0.
struct SlicedModel {
  int N = 0;
  double delta = 0;
  double phi0 = 0, phiN = 0;
  std::vector<double> a, b, c;             // i = 0..N
  std::vector<double> sigma, z, psi;       // i = 1..N-1
  std::vector<double> Sigma;               // i = 1..N-2
  std::vector<double> Omega;               // i = 0..N-2
  std::vector<double> Q;                   // i = 0..N-1, Q_0 = delta
  std::vector<double> d;                   // i = 0..N-2
  double X = 0, Y = 0;
};

SlicedModel build_sliced(const CoefficientModel& model, double phi0, double phiN, int N);

struct QuadratureResult {
  double value = 0;
  double error_estimate = 0;
  double radius = 0;  // truncation |phi_i| <= radius
  int nodes = 0;      // nodes per dimension at the accepted resolution
};

// Iterated quadrature of the N-1 dimensional integral, slice by slice
// (trapezoid rule on a truncated interval, refined until stable).
QuadratureResult wn_transfer(const CoefficientModel& model, double phi0, double phiN, int N);

// Same for 1 <= N <= 5.
QuadratureResult wn_quadrature(const CoefficientModel& model, double phi0, double phiN, int N);

struct MonteCarloResult {
  double mean = 0;
  double stderr_ = 0;
  double gaussian_norm = 0;  // value with the quartic weight removed
  std::string rng;
};

constexpr const char* kRngName = "xoshiro256++/splitmix64";
constexpr int kMcBlock = 4096;

// Gaussian-bridge importance sampling reweighted by exp(-sum a_i delta phi_i^4).
// Blocks of kMcBlock samples draw from independent streams derived from the
// seed and are reduced in block order, so workers does not affect the result.
MonteCarloResult wn_montecarlo(const CoefficientModel& model, double phi0, double phiN, int N,
                               long samples, std::uint64_t seed, int workers = 1);

struct SeriesExactResult {
  double value = 0;
  double tail_bound = 0;
  long terms = 0;
};

// Exact multi-sum over rho and the n_i of parabolic-cylinder factors, N <= 3.
SeriesExactResult wn_series_exact(const CoefficientModel& model, double phi0, double phiN, int N,
                                  int cap = 400);

struct ExtrapolationPoint {
  double N;
  double value;
  double stderr_ = 0;
};

struct ExtrapolationResult {
  double limit = 0;
  double error_estimate = 0;
  int degree = 0;
  bool monotone = true;
};

// Weighted polynomial fit in 1/N evaluated at 1/N = 0; the error estimate is
// the larger of the leave-one-out spread and the propagated point errors.
ExtrapolationResult continuum_extrapolate(const std::vector<ExtrapolationPoint>& pts,
                                          int max_degree = 3);

class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed);
  std::uint64_t next();
  double uniform();  // (0, 1)
 private:
  std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace aprop
