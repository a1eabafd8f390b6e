#include <doctest.h>

#include <cmath>
#include <random>

#include "aprop/errors.hpp"
#include "aprop/oracle.hpp"
#include "aprop/oscillator_ode.hpp"

using namespace aprop;

namespace {
const double kPi = 3.14159265358979323846;

CoefficientModel mixed_model(std::mt19937_64& g) {
  std::uniform_real_distribution<double> U(0, 1);
  CoefficientModel m;
  m.beta = 0.5 + U(g);
  m.a = CoeffFn::poly({0.05 + 0.5 * U(g), 0.2 * U(g)});
  m.b = CoeffFn::poly({0.1 + U(g), -0.3 * U(g)});
  m.c = CoeffFn::poly({0.6 + U(g), 0.5 * U(g)});
  return m;
}
}  // namespace

TEST_CASE("sliced model identities") {
  std::mt19937_64 g(7);
  for (int trial = 0; trial < 10; ++trial) {
    auto m = mixed_model(g);
    for (int N : {2, 3, 8, 33, 64}) {
      auto s = build_sliced(m, 0.4, -0.7, N);
      CHECK(s.Omega[0] == 1.0);
      for (int i = 0; i <= N - 2; ++i) {
        double alt = s.psi[i + 1] * s.Q[i + 1] / s.Q[i];
        CHECK(std::abs(s.Omega[i] - alt) < 1e-12 * std::max(1.0, std::abs(alt)));
      }
      double Y = 0;
      for (double d : s.d) Y += d;
      CHECK(std::abs(Y - s.Y) < 1e-14 * std::abs(Y));
    }
  }
}

TEST_CASE("sliced model: free particle boundary term") {
  auto m = CoefficientModel::constant(0, 0, 1, 1.7);
  for (int N : {2, 5, 40}) {
    auto s = build_sliced(m, 0.9, 0.2, N);
    CHECK(std::abs(s.Y - s.c[1] * 0.81 / (2 * s.delta) + 0.81 / (2 * 1.7)) < 1e-12);
    for (int i = 0; i < N; ++i) CHECK(std::abs(s.Q[i] - (i + 1) * s.delta) < 1e-13);
  }
}

namespace {
std::vector<double> q_errors(const CoefficientModel& m) {
  auto sol = solve_Q(m, 1536);
  std::vector<double> err;
  for (int N : {32, 64, 128}) {
    auto s = build_sliced(m, 1, 1, N);
    double e = 0;
    for (int i = 0; i < N; ++i) e = std::max(e, std::abs(s.Q[i] - sol.Q[(i + 1) * (1536 / N)]));
    err.push_back(e);
  }
  return err;
}
}  // namespace

TEST_CASE("discrete Q converges to the continuum solution") {
  // constant c: second order
  CoefficientModel m;
  m.beta = 1.2;
  m.b = CoeffFn::poly({0.6, 0.3});
  m.c = CoeffFn::constant(1.3);
  auto e = q_errors(m);
  CHECK(e[0] / e[1] > 3.5);
  CHECK(e[1] / e[2] > 3.5);
  // varying c enters the sliced action at interval endpoints: first order
  m.c = CoeffFn::poly({1.0, 0.5});
  e = q_errors(m);
  CHECK(e[0] / e[1] > 1.8);
  CHECK(e[1] / e[2] > 1.8);
  CHECK(e[2] < 1e-2);
}

TEST_CASE("wn_quadrature zero-dimensional case and range") {
  auto m = CoefficientModel::constant(0.2, 0.3, 1.5, 0.8);
  double d = 0.8, p0 = 0.3, pN = -0.5;
  double E = d * (1.5 / 2 * std::pow((pN - p0) / d, 2) + 0.3 * pN * pN + 0.2 * std::pow(pN, 4));
  double expect = std::exp(-E) / std::sqrt(2 * kPi * d / 1.5);
  CHECK(std::abs(wn_quadrature(m, p0, pN, 1).value / expect - 1) < 1e-14);
  CHECK_THROWS_AS(wn_quadrature(m, p0, pN, 6), DomainError);
  CHECK_THROWS_AS(wn_quadrature(m, p0, pN, 0), DomainError);
}

TEST_CASE("Gaussian case: quadrature equals the closed-form normalisation") {
  CoefficientModel m;
  m.beta = 1.0;
  m.a = CoeffFn::constant(0);
  m.b = CoeffFn::poly({0.5, 0.2});
  m.c = CoeffFn::poly({1.0, 0.3});
  for (int N : {2, 3, 5, 12}) {
    auto q = wn_transfer(m, 0.4, -0.6, N);
    auto mc = wn_montecarlo(m, 0.4, -0.6, N, 10000, 1);
    CHECK(mc.stderr_ < 1e-15 * mc.mean);
    CHECK(std::abs(mc.mean / mc.gaussian_norm - 1) < 1e-14);
    CHECK(std::abs(q.value / mc.gaussian_norm - 1) < 1e-10);
  }
}

TEST_CASE("harmonic sliced integral approaches Mehler") {
  auto m = CoefficientModel::constant(0, 0.5, 1, 1);
  double mehler = mehler_reference(1, 1, 0.3, -0.2);
  double prev = std::abs(wn_quadrature(m, 0.3, -0.2, 4).value - mehler);
  for (int N : {16, 64, 256}) {
    double e = std::abs(wn_transfer(m, 0.3, -0.2, N).value - mehler);
    CHECK(e < prev);
    prev = e;
  }
  CHECK(prev < 1e-3 * mehler);
}

TEST_CASE("quadrature sequence is monotone for a constant model") {
  auto m = CoefficientModel::constant(0.05, 0.5, 1, 1);
  double prev = wn_quadrature(m, 0.3, -0.2, 2).value;
  double step = 0;
  for (int N = 3; N <= 5; ++N) {
    double v = wn_quadrature(m, 0.3, -0.2, N).value;
    CHECK(v < prev);
    if (N > 3) CHECK(prev - v < step);
    step = prev - v;
    prev = v;
  }
}

TEST_CASE("series_exact against quadrature") {
  auto m = CoefficientModel::constant(1, 1, 1, 1);
  auto s2 = wn_series_exact(m, 0.3, -0.2, 2);
  CHECK(std::abs(s2.value / wn_quadrature(m, 0.3, -0.2, 2).value - 1) < 1e-8);
  CHECK(s2.tail_bound < 1e-8 * s2.value);

  auto z = wn_series_exact(m, 0.0, -0.2, 2);
  CHECK(z.terms < s2.terms);
  CHECK(std::abs(z.value / wn_quadrature(m, 0.0, -0.2, 2).value - 1) < 1e-8);

  std::mt19937_64 g(99);
  for (int trial = 0; trial < 3; ++trial) {
    auto mm = mixed_model(g);
    auto s3 = wn_series_exact(mm, 0.5, 0.8, 3);
    CHECK(std::abs(s3.value / wn_quadrature(mm, 0.5, 0.8, 3).value - 1) < 1e-6);
  }
  auto a1 = CoefficientModel::constant(0.1, 0.5, 1, 1);
  CHECK(std::abs(wn_series_exact(a1, -0.6, 0.4, 3).value / wn_quadrature(a1, -0.6, 0.4, 3).value - 1) < 1e-6);
  CHECK_THROWS_AS(wn_series_exact(a1, 0.1, 0.1, 4), DomainError);
}

TEST_CASE("random number generator") {
  std::uint64_t st = 0;
  CHECK(splitmix64(st) == 0xE220A8397B1DCDAFULL);
  Xoshiro256pp a(5), b(5), c(6);
  for (int i = 0; i < 100; ++i) {
    auto x = a.next();
    CHECK(x == b.next());
    (void)c;
  }
  CHECK(Xoshiro256pp(5).next() != Xoshiro256pp(6).next());
  Xoshiro256pp u(9);
  double mean = 0;
  for (int i = 0; i < 100000; ++i) {
    double v = u.uniform();
    CHECK((v > 0 && v < 1));
    mean += v;
  }
  CHECK(std::abs(mean / 100000 - 0.5) < 0.005);
}

TEST_CASE("Monte Carlo determinism and consistency") {
  auto m = CoefficientModel::constant(0.05, 0.5, 1, 1);
  auto r1 = wn_montecarlo(m, 0.3, -0.2, 32, 100000, 12345, 1);
  auto r2 = wn_montecarlo(m, 0.3, -0.2, 32, 100000, 12345, 1);
  auto r3 = wn_montecarlo(m, 0.3, -0.2, 32, 100000, 12345, 3);
  CHECK(r1.mean == r2.mean);
  CHECK(r1.stderr_ == r2.stderr_);
  CHECK(r1.mean == r3.mean);
  CHECK(r1.stderr_ == r3.stderr_);
  CHECK(r1.rng == std::string(kRngName));
  auto r4 = wn_montecarlo(m, 0.3, -0.2, 32, 100000, 54321, 1);
  CHECK(r4.mean != r1.mean);
  double ref = wn_transfer(m, 0.3, -0.2, 32).value;
  CHECK(std::abs(r1.mean - ref) < 4 * r1.stderr_);
  CHECK(std::abs(r4.mean - ref) < 4 * r4.stderr_);
  CHECK_THROWS_AS(wn_montecarlo(m, 0.3, -0.2, 32, 100, 1), DomainError);
  CHECK_THROWS_AS(wn_montecarlo(m, 0.3, -0.2, 600, 10000, 1), DomainError);
}

TEST_CASE("Monte Carlo reports a degenerate covariance") {
  auto m = CoefficientModel::constant(0.05, -30, 1, 1);
  CHECK_THROWS_AS(wn_montecarlo(m, 0.3, -0.2, 8, 10000, 1), DomainError);
}

TEST_CASE("continuum_extrapolate") {
  auto c = continuum_extrapolate({{2, 1.5}, {4, 1.5}, {8, 1.5}, {16, 1.5}});
  CHECK(c.limit == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(c.error_estimate < 1e-13);
  auto lin = continuum_extrapolate({{4, 2 + 1.0 / 4}, {8, 2 + 1.0 / 8}, {16, 2 + 1.0 / 16}});
  CHECK(std::abs(lin.limit - 2) < 1e-12);

  auto m = CoefficientModel::constant(0, 0.5, 1, 1);
  std::vector<ExtrapolationPoint> pts;
  for (int N : {8, 16, 32, 64}) pts.push_back({double(N), wn_transfer(m, 0.3, -0.2, N).value, 0});
  auto ex = continuum_extrapolate(pts);
  double mehler = mehler_reference(1, 1, 0.3, -0.2);
  CHECK(std::abs(ex.limit - mehler) <= ex.error_estimate);
  CHECK(ex.error_estimate < 1e-4 * mehler);
  CHECK_THROWS_AS(continuum_extrapolate({{2, 1}, {4, 1}}), DomainError);
}
