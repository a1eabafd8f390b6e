#pragma once

#include <vector>

namespace aprop {

// Integral of exp(-(a x^4 + b x^2 + c x)) over the real line.

double i1_quadrature(double a, double b, double c);

struct SeriesTrace {
  double value = 0;
  std::vector<double> increments;
};

// Parabolic-cylinder series; extends past m_max only if not yet converged
// (hard cap 4*m_max). Needs b >= 0.
double i1_series(double a, double b, double c, int m_max = 200);
SeriesTrace i1_series_trace(double a, double b, double c, int m_max = 200);

// Hermite generating-function route: double sum over mu and the Taylor
// index j of D_{-j-mu-1/2}(0). With resum_inner the j-sum is replaced by
// its closed form e^{z^2/4} D_{-mu-1/2}(z).
double i1_hermite_method(double a, double b, double c, int mu_max = 200,
                         bool resum_inner = false);

}  // namespace aprop
