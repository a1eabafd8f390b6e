#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "aprop/anharmonic.hpp"
#include "aprop/config.hpp"
#include "aprop/csv.hpp"
#include "aprop/errors.hpp"
#include "aprop/oracle.hpp"
#include "aprop/oscillator_ode.hpp"
#include "aprop/quartic_integral.hpp"
#include "aprop/special_fn.hpp"

namespace fs = std::filesystem;
using namespace aprop;

namespace {

struct Globals {
  std::string config;
  std::string out = ".";
  bool verbose = false;
  int workers = 0;  // 0: take oracle.workers from the config
};

std::string out_path(const Globals& g, const std::string& name) {
  fs::create_directories(g.out);
  return (fs::path(g.out) / name).string();
}

RunConfig load_run(const Globals& g) {
  if (g.config.empty()) throw ConfigError("--config is required");
  RunConfig rc = make_run_config(Config::load(g.config));
  if (g.workers > 0) rc.workers = g.workers;
  return rc;
}

std::string fmt(double v) { return format_double(v); }
std::string fmt(long v) { return std::to_string(v); }

int run_propagator(const Globals& g) {
  RunConfig rc = load_run(g);
  OscillatorSolution sol = solve(rc.model, rc.grid_n);
  PropagatorBreakdown pb = propagator(sol, rc.model, rc.phi0, rc.phiN, rc.mu_max);
  double scale = pb.harmonic_value / std::sqrt(pb.f_beta);
  CsvWriter br({"mu", "coefficient", "W_mu", "cumulative_total"});
  double cum = 0;
  for (std::size_t mu = 0; mu < pb.W_mu_terms.size(); ++mu) {
    cum += pb.series_coefficients[mu] * pb.W_mu_terms[mu];
    br.row({std::to_string(mu), fmt(pb.series_coefficients[mu]), fmt(pb.W_mu_terms[mu]), fmt(scale * cum)});
  }
  br.write(out_path(g, "breakdown.csv"));
  CsvWriter so({"tau", "Q", "f", "I"});
  for (std::size_t j = 0; j < sol.grid.size(); ++j)
    so.row({fmt(sol.grid[j]), fmt(sol.Q[j]), fmt(sol.f[j]), fmt(sol.I_of_tau[j])});
  so.write(out_path(g, "solution.csv"));
  std::cout << "total " << fmt(pb.total) << "\ntruncation_estimate " << fmt(pb.truncation_estimate)
            << "\n";
  if (g.verbose)
    std::cout << "harmonic_exponent " << fmt(pb.harmonic_exponent) << "\nf_beta " << fmt(pb.f_beta)
              << "\np1 " << fmt(pb.p1) << "\n";
  return 0;
}

// Discrepancy in units of the combined error, with the error floored at
// floor_abs so that exact agreement of deterministic values stays finite.
double discrepancy(double value, double ref, double err, double floor_abs) {
  double s = std::max(err, floor_abs);
  return s > 0 ? std::abs(value - ref) / s : 0.0;
}

int run_compare(const Globals& g) {
  RunConfig rc = load_run(g);
  if (rc.N_list.empty()) throw ConfigError(g.config + ": missing required key 'oracle.N_list'");
  PropagatorBreakdown pb = propagator(rc.model, rc.phi0, rc.phiN, rc.mu_max, rc.grid_n);
  CsvWriter cw({"method", "N", "samples", "seed", "value", "stderr", "reference", "discrepancy"});
  std::string seed = std::to_string(rc.seed);
  cw.row({"analytic", "inf", "0", "0", fmt(pb.total), fmt(pb.truncation_estimate), fmt(pb.total), "0"});
  std::vector<ExtrapolationPoint> pts;
  const double rel_floor = 1e-9;
  for (int N : rc.N_list) {
    if (N <= 5) {
      QuadratureResult q = wn_quadrature(rc.model, rc.phi0, rc.phiN, N);
      double ref = q.value, ref_err = 0;
      if (N <= 3) {
        SeriesExactResult s = wn_series_exact(rc.model, rc.phi0, rc.phiN, N);
        cw.row({"series_exact", std::to_string(N), "0", "0", fmt(s.value), fmt(s.tail_bound), fmt(q.value),
                fmt(discrepancy(s.value, q.value, std::hypot(s.tail_bound, q.error_estimate),
                                rel_floor * std::abs(q.value)))});
        ref = s.value;
        ref_err = s.tail_bound;
      }
      cw.row({"quadrature", std::to_string(N), "0", "0", fmt(q.value), fmt(q.error_estimate), fmt(ref),
              fmt(discrepancy(q.value, ref, std::hypot(q.error_estimate, ref_err), rel_floor * std::abs(ref)))});
      pts.push_back({static_cast<double>(N), q.value, q.error_estimate});
    } else {
      MonteCarloResult mc = wn_montecarlo(rc.model, rc.phi0, rc.phiN, N, rc.samples, rc.seed, rc.workers);
      QuadratureResult t = wn_transfer(rc.model, rc.phi0, rc.phiN, N);
      cw.row({"montecarlo", std::to_string(N), std::to_string(rc.samples), seed, fmt(mc.mean), fmt(mc.stderr_),
              fmt(t.value),
              fmt(discrepancy(mc.mean, t.value, std::hypot(mc.stderr_, t.error_estimate),
                              rel_floor * std::abs(t.value)))});
      pts.push_back({static_cast<double>(N), mc.mean, mc.stderr_});
    }
  }
  if (pts.size() >= 3) {
    ExtrapolationResult ex = continuum_extrapolate(pts);
    double err = std::hypot(ex.error_estimate, pb.truncation_estimate);
    double floor_abs = rc.tol_rel * std::abs(pb.total) / rc.tol_sigma;
    cw.row({"extrapolated", "inf", "0", "0", fmt(ex.limit), fmt(ex.error_estimate), fmt(pb.total),
            fmt(discrepancy(ex.limit, pb.total, err, floor_abs))});
  }
  cw.write(out_path(g, "compare.csv"));
  if (g.verbose) std::cout << cw.str();
  std::cout << "rng " << kRngName << "\n";
  return 0;
}

struct I1Args {
  double a = 1, b = 1, c = 1;
  std::string method = "all";
};

int run_i1(const Globals& g, const I1Args& x) {
  std::vector<std::string> header{"a", "b", "c"};
  std::vector<std::string> row{fmt(x.a), fmt(x.b), fmt(x.c)};
  bool all = x.method == "all";
  if (!all && x.method != "quadrature" && x.method != "series" && x.method != "hermite")
    throw DomainError("unknown i1 method '" + x.method + "'");
  if (all || x.method == "quadrature") {
    header.push_back("quadrature");
    row.push_back(fmt(i1_quadrature(x.a, x.b, x.c)));
  }
  if (all || x.method == "series") {
    header.push_back("series");
    row.push_back(fmt(i1_series(x.a, x.b, x.c)));
  }
  if (all || x.method == "hermite") {
    header.push_back("hermite");
    row.push_back(fmt(i1_hermite_method(x.a, x.b, x.c)));
  }
  CsvWriter cw(header);
  cw.row(row);
  cw.write(out_path(g, "i1.csv"));
  std::cout << cw.str();
  return 0;
}

struct TableArgs {
  std::string kind;
  double nu = -0.5;
  double from = 0, to = 5;
  int steps = 11;
  int n_max = 8;
  double x = 1, y = 0.25;
  double a = 1, b = 1;
};

std::vector<double> grid(const TableArgs& t) {
  if (t.steps < 1 || !(t.to >= t.from)) throw DomainError("malformed range");
  std::vector<double> v;
  for (int i = 0; i < t.steps; ++i) v.push_back(t.steps == 1 ? t.from : t.from + (t.to - t.from) * i / (t.steps - 1));
  return v;
}

int run_table(const Globals& g, const TableArgs& t) {
  std::string name = "table_" + t.kind + ".csv";
  if (t.n_max < 0 || t.n_max > 60) throw DomainError("malformed range: n-max must be in 0..60");
  if (t.kind == "pcf") {
    CsvWriter cw({"nu", "z", "D", "scaled"});
    for (double z : grid(t)) cw.row({fmt(t.nu), fmt(z), fmt(pcf_D(t.nu, z)), fmt(z > 0 ? pcf_scaled(t.nu, z) : NAN)});
    cw.write(out_path(g, name));
  } else if (t.kind == "hermite") {
    CsvWriter cw({"n", "x", "H"});
    for (int n = 0; n <= t.n_max; ++n) cw.row({std::to_string(n), fmt(t.x), fmt(hermite(n, t.x))});
    cw.write(out_path(g, name));
  } else if (t.kind == "incomplete-hermite") {
    CsvWriter cw({"p", "q", "gamma", "phi_beta", "phi_0", "H"});
    for (int p = 0; p <= t.n_max; ++p)
      for (int q = 0; p + q <= t.n_max; ++q)
        cw.row({std::to_string(p), std::to_string(q), fmt(t.y), fmt(t.x), fmt(t.nu),
                fmt(incomplete_hermite_pq(p, q, t.y, t.x, t.nu))});
    cw.write(out_path(g, name));
  } else if (t.kind == "a-coeff") {
    CsvWriter cw({"k", "j", "A"});
    for (int k = 0; k <= t.n_max; ++k)
      for (int j = (k + 1) / 2; j <= k; ++j) cw.row({std::to_string(k), std::to_string(j), std::to_string(a_coeff(j, k))});
    cw.write(out_path(g, name));
  } else if (t.kind == "i1") {
    CsvWriter cw({"a", "b", "c", "quadrature", "series", "hermite"});
    for (double c : grid(t))
      cw.row({fmt(t.a), fmt(t.b), fmt(c), fmt(i1_quadrature(t.a, t.b, c)), fmt(i1_series(t.a, t.b, c)),
              fmt(i1_hermite_method(t.a, t.b, c))});
    cw.write(out_path(g, name));
  } else {
    throw DomainError("unknown table kind '" + t.kind + "'");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Propagator of the quartic anharmonic oscillator with time-dependent coefficients"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "config file")->expected(1);
  app.add_option("--out", g.out, "output directory");
  app.add_flag("--verbose", g.verbose);
  app.add_option("--workers", g.workers, "Monte Carlo worker threads (overrides oracle.workers)");

  auto* prop = app.add_subcommand("propagator", "analytic propagator; writes breakdown.csv and solution.csv");
  auto* cmp = app.add_subcommand("compare", "analytic propagator against the time-sliced oracles; writes compare.csv");
  I1Args i1;
  auto* i1c = app.add_subcommand("i1", "one-dimensional quartic integral by three methods");
  i1c->add_option("--a", i1.a);
  i1c->add_option("--b", i1.b);
  i1c->add_option("--c", i1.c);
  i1c->add_option("--method", i1.method, "quadrature, series, hermite or all");
  TableArgs ta;
  auto* tab = app.add_subcommand("table", "special-function tables");
  tab->add_option("kind", ta.kind, "pcf, hermite, incomplete-hermite, a-coeff or i1")->required();
  tab->add_option("--nu", ta.nu, "pcf order; phi_0 for incomplete-hermite");
  tab->add_option("--from", ta.from);
  tab->add_option("--to", ta.to);
  tab->add_option("--steps", ta.steps);
  tab->add_option("--n-max", ta.n_max);
  tab->add_option("--x", ta.x, "hermite argument; phi_beta for incomplete-hermite");
  tab->add_option("--gamma", ta.y);
  tab->add_option("--a", ta.a);
  tab->add_option("--b", ta.b);
  for (auto* sub : {prop, cmp, i1c, tab}) {
    sub->add_option("--config", g.config, "config file");
    sub->add_option("--out", g.out, "output directory");
    sub->add_flag("--verbose", g.verbose);
    sub->add_option("--workers", g.workers);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    if (*prop) return run_propagator(g);
    if (*cmp) return run_compare(g);
    if (*i1c) return run_i1(g, i1);
    if (*tab) return run_table(g, ta);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
