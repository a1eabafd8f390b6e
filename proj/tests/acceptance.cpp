// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.
// usage: acceptance <cli-binary> <source-dir> <work-dir>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "aprop/anharmonic.hpp"
#include "aprop/oracle.hpp"
#include "aprop/oscillator_ode.hpp"
#include "aprop/quartic_integral.hpp"
#include "aprop/special_fn.hpp"

using namespace aprop;
namespace fs = std::filesystem;

namespace {

const double kPi = 3.14159265358979323846;
int failures = 0;

struct Outcome {
  bool pass;
  std::string detail;
};

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("criterion %2d %s: %s; %s; %.1fs\n", id, o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(),
              secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::complex<double> hermite_c(int n, std::complex<double> x) {
  std::complex<double> h0 = 1, h1 = 2.0 * x;
  if (n == 0) return h0;
  for (int k = 1; k < n; ++k) {
    auto h2 = 2.0 * x * h1 - 2.0 * double(k) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

CoefficientModel random_model(std::mt19937_64& g) {
  std::uniform_real_distribution<double> U(-1, 1);
  CoefficientModel m;
  m.beta = 0.6 + 0.8 * std::abs(U(g));
  m.a = CoeffFn::poly({0.1 + 0.05 * U(g), 0.04 * U(g)});
  m.b = CoeffFn::poly({0.5 + 0.4 * U(g), 0.2 * U(g)});
  m.c = CoeffFn::poly({1 + 0.3 * U(g), 0.2 * U(g)});
  return m;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 4) {
    std::fprintf(stderr, "usage: acceptance <cli-binary> <source-dir> <work-dir>\n");
    return 2;
  }
  std::string cli = argv[1];
  fs::path src = argv[2], work = argv[3];
  fs::create_directories(work);

  report(1, "free particle, rel tol 1e-8", [] {
    double worst = 0;
    for (double beta : {0.5, 1.0, 2.0}) {
      auto m = CoefficientModel::constant(0, 0, 1, beta);
      auto sol = solve(m);
      for (double p0 : {-1.0, 0.0, 1.0})
        for (double pb : {-1.0, 0.0, 1.0}) {
          double expect = std::exp(-(pb - p0) * (pb - p0) / (2 * beta)) / std::sqrt(2 * kPi * beta);
          worst = std::max(worst, rel(propagator(sol, m, p0, pb).total, expect));
        }
    }
    return Outcome{worst <= 1e-8, fmt("max rel err %.2e (tol %.0e)", worst, 1e-8)};
  });

  report(2, "Mehler kernel, rel tol 1e-6", [] {
    double worst = 0;
    for (double c : {0.5, 1.0, 2.0})
      for (double b : {0.25, 1.0}) {
        auto m = CoefficientModel::constant(0, b, c, 1.0);
        auto sol = solve(m);
        for (double p0 : {-2.0, -1.0, 0.0, 1.0, 2.0})
          for (double pb : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
            double expect = mehler_reference(std::sqrt(2 * b * c), std::sqrt(2 * b / c), p0, pb);
            worst = std::max(worst, rel(propagator(sol, m, p0, pb).total, expect));
          }
      }
    return Outcome{worst <= 1e-6, fmt("max rel err %.2e (tol %.0e)", worst, 1e-6)};
  });

  report(3, "f = 2 pi c Q / c(0)^2 on the grid, tol 1e-8 relative to max|f|", [] {
    std::vector<CoefficientModel> models;
    models.push_back(CoefficientModel::constant(0, 0.7, 1.4, 1.5));
    CoefficientModel lin;
    lin.beta = 2;
    lin.b = CoeffFn::constant(0.4);
    lin.c = CoeffFn::poly({1.0, 0.3});
    models.push_back(lin);
    CoefficientModel osc;
    osc.beta = 2.5;
    osc.b = CoeffFn::poly({0.5, -1.0, 0.0, 0.3});
    osc.c = CoeffFn::constant(1.0);
    models.push_back(osc);
    double worst = 0;
    for (auto& m : models) {
      auto s = solve(m);
      double c0 = m.c(0), fmax = 0, d = 0;
      for (std::size_t j = 0; j < s.grid.size(); ++j) {
        fmax = std::max(fmax, std::abs(s.f[j]));
        d = std::max(d, std::abs(s.f[j] - 2 * kPi * m.c(s.grid[j]) * s.Q[j] / (c0 * c0)));
      }
      worst = std::max(worst, d / fmax);
    }
    return Outcome{worst <= 1e-8, fmt("max rel dev %.2e (tol %.0e)", worst, 1e-8)};
  });

  report(4, "I1 quadrature/series/Hermite agreement on 27 points, rel tol 1e-8", [] {
    double worst = 0;
    for (double a : {0.5, 1.0, 2.0})
      for (double b : {0.25, 1.0, 2.0})
        for (double c : {0.0, 0.5, 1.0}) {
          double q = i1_quadrature(a, b, c);
          worst = std::max({worst, rel(i1_series(a, b, c), q), rel(i1_hermite_method(a, b, c), q)});
        }
    return Outcome{worst <= 1e-8, fmt("max rel err %.2e (tol %.0e)", worst, 1e-8)};
  });

  report(5, "Poincare remainder within its bound, z in {5,10,20}, m 0..3, J 0..6", [] {
    int bad = 0, total = 0;
    double worst_ratio = 0;
    for (double z : {5.0, 10.0, 20.0})
      for (int m = 0; m <= 3; ++m)
        for (int J = 0; J <= 6; ++J) {
          double nu = -m - 0.5;
          auto p = pcf_poincare(nu, z, J);
          double err = std::abs(pcf_scaled(nu, z) - p.value);
          ++total;
          if (!(err <= p.remainder_bound)) ++bad;
          worst_ratio = std::max(worst_ratio, err / p.remainder_bound);
        }
    char buf[120];
    std::snprintf(buf, sizeof buf, "%d of %d cases violate, max err/bound %.3g", bad, total, worst_ratio);
    return Outcome{bad == 0, buf};
  });

  report(6, "A-coefficient sums equal (-sqrt(-d))^n H_n(sqrt(-d)), tol 1e-10", [] {
    std::mt19937_64 g(606);
    std::uniform_real_distribution<double> U(0, 2);
    double worst = 0;
    for (int k = 0; k < 50; ++k) {
      double d = U(g);
      if (d == 0) d = 1;
      std::complex<double> r = std::sqrt(std::complex<double>(-d, 0));
      for (int n = 0; n <= 12; ++n) {
        double closed = (std::pow(-r, n) * hermite_c(n, r)).real();
        worst = std::max(worst, std::abs(a_sum(n, d) - closed) / std::max(1.0, std::abs(closed)));
      }
    }
    return Outcome{worst <= 1e-10, fmt("max err %.2e (tol %.0e)", worst, 1e-10)};
  });

  report(7, "propagator(mu_max=2) vs extrapolated time-sliced integral, tol max(3 sigma, 1%)", [] {
    auto m = CoefficientModel::constant(0.05, 0.5, 1, 1);
    double p0 = 0.3, pb = -0.2;
    auto pr = propagator(m, p0, pb, 2);
    std::vector<ExtrapolationPoint> pts;
    for (int N = 2; N <= 5; ++N) {
      auto q = wn_quadrature(m, p0, pb, N);
      pts.push_back({double(N), q.value, q.error_estimate});
    }
    for (int N : {32, 64, 128}) {
      auto mc = wn_montecarlo(m, p0, pb, N, 1000000, 20261018, 1);
      pts.push_back({double(N), mc.mean, mc.stderr_});
    }
    auto ex = continuum_extrapolate(pts);
    double sigma = std::hypot(ex.error_estimate, pr.truncation_estimate);
    double tol = std::max(3 * sigma, 0.01 * std::abs(pr.total));
    double diff = std::abs(ex.limit - pr.total);
    char buf[200];
    std::snprintf(buf, sizeof buf, "analytic %.10g, oracle %.10g +- %.2e, |diff| %.2e (tol %.2e)", pr.total,
                  ex.limit, ex.error_estimate, diff, tol);
    return Outcome{diff <= tol, buf};
  });

  report(8, "w_mu_direct = w_mu for mu in {1,2}, 10 random cases, rel tol 1e-8", [] {
    std::mt19937_64 g(808);
    std::uniform_real_distribution<double> U(-1, 1);
    double worst = 0;
    for (int k = 0; k < 10; ++k) {
      auto m = random_model(g);
      auto s = solve(m);
      auto bd = make_boundary(s, U(g), U(g));
      for (int mu = 1; mu <= 2; ++mu) worst = std::max(worst, rel(w_mu_direct(s, m, bd, mu), w_mu(s, m, bd, mu)));
    }
    return Outcome{worst <= 1e-8, fmt("max rel err %.2e (tol %.0e)", worst, 1e-8)};
  });

  report(9, "a -> lambda a scales w_mu by lambda^mu, rel tol 1e-12", [] {
    std::mt19937_64 g(909);
    auto m = random_model(g);
    auto s = solve(m);
    auto bd = make_boundary(s, 0.4, -0.3);
    double worst = 0;
    for (double lam : {0.5, 2.0}) {
      CoefficientModel ml = m;
      ml.a = m.a.scaled(lam);
      for (int mu = 1; mu <= 3; ++mu)
        worst = std::max(worst, rel(w_mu(s, ml, bd, mu), std::pow(lam, mu) * w_mu(s, m, bd, mu)));
    }
    return Outcome{worst <= 1e-12, fmt("max rel err %.2e (tol %.0e)", worst, 1e-12)};
  });

  report(10, "exact multi-sum vs quadrature, N in {2,3}, 5 random sets, rel tol 1e-6", [] {
    std::mt19937_64 g(1010);
    std::uniform_real_distribution<double> U(0, 1), S(-1, 1);
    double worst = 0;
    for (int k = 0; k < 5; ++k) {
      CoefficientModel m;
      m.beta = 0.5 + U(g);
      m.a = CoeffFn::poly({0.05 + 0.5 * U(g), 0.2 * U(g)});
      m.b = CoeffFn::poly({0.1 + U(g), -0.3 * U(g)});
      m.c = CoeffFn::poly({0.6 + U(g), 0.5 * U(g)});
      double p0 = S(g), pn = S(g);
      for (int N : {2, 3})
        worst = std::max(worst, rel(wn_series_exact(m, p0, pn, N).value, wn_quadrature(m, p0, pn, N).value));
    }
    return Outcome{worst <= 1e-6, fmt("max rel err %.2e (tol %.0e)", worst, 1e-6)};
  });

  report(11, "compare output byte-identical across runs and worker counts", [&] {
    fs::path cfg = src / "configs" / "reference.cfg";
    std::vector<std::string> outs;
    int k = 0;
    for (int workers : {1, 1, 3}) {
      fs::path dir = work / ("run" + std::to_string(k++));
      fs::remove_all(dir);
      std::string cmd = "\"" + cli + "\" compare --config \"" + cfg.string() + "\" --out \"" + dir.string() +
                        "\" --workers " + std::to_string(workers) + " > /dev/null";
      if (std::system(cmd.c_str()) != 0) return Outcome{false, "compare exited with an error"};
      outs.push_back(slurp(dir / "compare.csv"));
    }
    bool same = !outs[0].empty() && outs[0] == outs[1] && outs[0] == outs[2];
    return Outcome{same, same ? "3 runs (workers 1, 1, 3) identical" : "outputs differ"};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
