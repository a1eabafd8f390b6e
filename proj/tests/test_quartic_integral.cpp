#include <doctest.h>

#include <cmath>

#include "aprop/errors.hpp"
#include "aprop/quartic_integral.hpp"

using namespace aprop;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}

TEST_CASE("i1_quadrature closed form and symmetry") {
  CHECK(rel(i1_quadrature(1, 0, 0), std::tgamma(0.25) / 2) < 1e-12);
  CHECK(rel(i1_quadrature(0.7, 0.4, 1.3), i1_quadrature(0.7, 0.4, -1.3)) < 1e-13);
  double dw = i1_quadrature(0.5, -1, 0.3);
  CHECK(dw > 0);
  CHECK(std::isfinite(dw));
  double trap = 0, h = 1e-3;
  for (int k = -8000; k <= 8000; ++k) {
    double x = k * h;
    trap += std::exp(-(0.5 * x * x * x * x - x * x + 0.3 * x));
  }
  CHECK(rel(dw, trap * h) < 1e-12);
  CHECK_THROWS_AS(i1_quadrature(0, 1, 1), DomainError);
}

TEST_CASE("odd moment vanishes: derivative in c at c = 0") {
  double h = 1e-4;
  double d = (i1_quadrature(1.2, 0.5, h) - i1_quadrature(1.2, 0.5, -h)) / (2 * h);
  CHECK(std::abs(d) < 1e-10);
}

TEST_CASE("i1_series") {
  CHECK(rel(i1_series(1, 0, 0), std::tgamma(0.25) / 2) < 1e-12);
  auto tr = i1_series_trace(1, 2, 0);
  CHECK(tr.increments.size() == 1);
  CHECK(rel(i1_series(1, 1, 1), i1_quadrature(1, 1, 1)) < 1e-9);
  CHECK_THROWS_AS(i1_series(1, -1, 1), DomainError);
}

TEST_CASE("i1_series increments eventually decrease") {
  auto tr = i1_series_trace(0.5, 0.25, 1.0);
  REQUIRE(tr.increments.size() > 6);
  std::size_t start = tr.increments.size() / 2;
  for (std::size_t k = start + 1; k < tr.increments.size(); ++k)
    CHECK(std::abs(tr.increments[k]) <= std::abs(tr.increments[k - 1]));
}

TEST_CASE("i1_hermite_method") {
  CHECK(rel(i1_hermite_method(1, 1, 0), i1_series(1, 1, 0)) < 1e-12);
  CHECK(rel(i1_hermite_method(1, 2, 0.7), i1_quadrature(1, 2, 0.7)) < 1e-8);
  CHECK(rel(i1_hermite_method(2, 0.5, 1.2), i1_series(2, 0.5, 1.2)) < 1e-8);
  CHECK(rel(i1_hermite_method(2, 0.5, 1.2, 200, true), i1_series(2, 0.5, 1.2)) < 1e-10);
}
