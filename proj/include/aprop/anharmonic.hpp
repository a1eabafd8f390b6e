#pragma once

#include <map>
#include <vector>

#include "aprop/coefficients.hpp"
#include "aprop/oscillator_ode.hpp"

namespace aprop {

constexpr int kMuCap = 4;
constexpr int kDefaultMuMax = 3;

using KappaVector = std::vector<int>;

// Ordered integrals I_{k1..kmu} = int_0^beta aQ^4 I^{k1} int_{tau1}^beta aQ^4 I^{k2} ...
// with k1 attached to the earliest time. Suffix tables are cached.
class NestedIntegrals {
 public:
  NestedIntegrals(const OscillatorSolution& sol, const CoefficientModel& model);
  double operator()(const KappaVector& kv);

 private:
  const std::vector<double>& table(const KappaVector& suffix);
  const OscillatorSolution& sol_;
  std::vector<std::vector<double>> weight_;  // a Q^4 I^kappa on the grid
  std::map<KappaVector, std::vector<double>> cache_;
};

double nested_integral(const OscillatorSolution& sol, const CoefficientModel& model,
                       const KappaVector& kv);

// -4 * 4! * H_{4-kappa,kappa}(phiB_hat, phi0_hat | gamma)
double h_kappa(int kappa, const BoundaryData& bd);

// (-4)^mu (4!)^mu D(k1..kmu) by the nested-operator recurrence
// O_{k1} ... O_{k_{mu-1}} h_{k_mu}, O_k = sum_n (d^n_{phi0} h_k) d^n_{phiB} / (2^n n!).
// Slot 1 is coupled to every later slot through its own kernel value, so it
// pairs with the latest time of the ordered integral.
double d_function(const KappaVector& kv, const BoundaryData& bd);

// Same recurrence with the n = 0 term dropped (the A operators).
double z_function(const KappaVector& kv, const BoundaryData& bd);

// (4!/(4mu)!) (-1)^mu (1/4)^mu for mu >= 1, and 1 for mu = 0.
double series_coefficient(int mu);

// W(mu) such that the mu-th propagator term is series_coefficient(mu)*W(mu)
// times the harmonic part.
double w_mu(const OscillatorSolution& sol, const CoefficientModel& model, const BoundaryData& bd,
            int mu);

// W(mu) from the xi-derivative / H_{4mu} representation, mu in {1, 2}.
double w_mu_direct(const OscillatorSolution& sol, const CoefficientModel& model,
                   const BoundaryData& bd, int mu);

struct PropagatorBreakdown {
  double harmonic_value = 0;  // exp(exponent) of the harmonic part
  double harmonic_exponent = 0;
  double f_beta = 0;
  std::vector<double> W_mu_terms;
  std::vector<double> series_coefficients;
  double total = 0;
  double p1 = 0;
  std::vector<double> p1_partial_sums;
  double truncation_estimate = 0;
};

PropagatorBreakdown propagator(const CoefficientModel& model, double phi0, double phiB,
                               int mu_max = kDefaultMuMax, int grid_n = kDefaultGridN);

// Same, reusing an existing solution.
PropagatorBreakdown propagator(const OscillatorSolution& sol, const CoefficientModel& model,
                               double phi0, double phiB, int mu_max = kDefaultMuMax);

struct P1Result {
  double value = 0;
  std::vector<double> partial_sums;
};

P1Result p1_series(const OscillatorSolution& sol, const CoefficientModel& model,
                   const BoundaryData& bd, int mu_max);

}  // namespace aprop
