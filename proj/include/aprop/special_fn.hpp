#pragma once

#include <cstdint>
#include <vector>

namespace aprop {

// Index of D_{-m-rho-1/2-extra}; order() gives the effective nu.
struct PcfIndex {
  int m = 0;
  int rho = 0;
  int extra = 0;
  double order() const { return -static_cast<double>(m + rho + extra) - 0.5; }
  void validate() const;
};

// Parabolic cylinder function D_nu(z) for nu = -m-1/2, z >= 0.
double pcf_D(double nu, double z);

// e^{z^2/4} D_nu(z); stays finite where D_nu underflows.
double pcf_D_expscaled(double nu, double z);

// Scaled form z^{-nu} e^{z^2/4} D_nu(z), tending to 1 as z grows.
double pcf_scaled(double nu, double z);

// D_nu(0) = 2^{nu/2} sqrt(pi) / Gamma((1-nu)/2), any real nu < 1.
double pcf_D_at_zero(double nu);

struct PoincareResult {
  double value;
  double remainder_bound;
};

// Truncated large-z expansion of pcf_scaled(nu, z) up to j = J, with
// the Olver/Temme remainder bound. nu is the order (nu <= 0).
PoincareResult pcf_poincare(double nu, double z, int J);

// Partial sums of e^{x^2/4} sum_k (nu)_k/k! t^k D_{-nu-k}(x), which
// converges to e^{(x-t)^2/4} D_{-nu}(x-t). nu must be a positive
// half-integer. Stops on a Cauchy test at tol; throws if max_terms hit.
double pcf_taylor_shift(double nu, double x, double t, double tol = 1e-14,
                        int max_terms = 600);

// sum_k (nu)_k/k! t^k Dscaled_{-nu-k}(z), equal to
// (1-t)^{-nu} Dscaled_{-nu}(z(1-t)) for |t| < 1.
double pcf_scaled_taylor_shift(double nu, double z, double t, double tol = 1e-14,
                               int max_terms = 600);

// Gauss hypergeometric 2F1 by its principal series, |x| < 1.
double hyp2f1(double a, double b, double c, double x);

double pochhammer(double x, int n);
double factorial(int n);
double binomial(int n, int k);

// Physicists' Hermite polynomial by three-term recurrence.
double hermite(int n, double x);

// Same polynomial from the explicit finite sum.
double hermite_explicit(int n, double x);

// Two-variable Hermite H_n(x, y), coefficients of exp(xz + yz^2).
double hermite2(int n, double x, double y);

struct HermiteIncompleteSpec {
  int n = 4;
  int kappa = 0;
  double gamma = 0.25;
  void validate() const;
};

// Modified incomplete Hermite polynomial H_{n-kappa,kappa}(phi_beta, phi_0 | gamma).
double incomplete_hermite(const HermiteIncompleteSpec& spec, double phi_beta, double phi_0);

// Same polynomial with explicit indices p = n-kappa, q = kappa; zero if
// either index is negative.
double incomplete_hermite_pq(int p, int q, double gamma, double phi_beta, double phi_0);

// H_{n,...,n} for mu = xs.size() slots with generating function
// exp(sum_i (x_i u_i + m_i u_i^2) + sum_{i<k} taus[i] u_i u_k):
// slot i couples to every later slot with the same constant taus[i].
// mu = 4 uses the closed four-slot sum, mu < 4 the slot recursion.
double multiindex_hermite(int n, const std::vector<double>& xs, const std::vector<double>& ms,
                          const std::vector<double>& taus);

// Slot recursion for any mu (also used to cross-check the four-slot sum).
double multiindex_hermite_recursive(int n, const std::vector<double>& xs,
                                    const std::vector<double>& ms,
                                    const std::vector<double>& taus);

// Four-slot closed sum, taus = {M12, M23, M34}.
double multiindex_hermite4(int n, const std::vector<double>& xs, const std::vector<double>& ms,
                           const std::vector<double>& taus);

// A_j^k = 2^{2j-k} C(k,j) j!/(2j-k)!, zero outside 0 <= j <= k, 2j >= k.
std::int64_t a_coeff(int j, int k);

// sum_i A_i^n d^i.
double a_sum(int n, double d);

}  // namespace aprop
