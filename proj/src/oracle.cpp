#include "aprop/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "aprop/errors.hpp"
#include "aprop/special_fn.hpp"

namespace aprop {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Slices {
  int N;
  double delta;
  std::vector<double> a, b, c;
};

Slices sample(const CoefficientModel& model, int N) {
  if (N < 1) throw DomainError("slice count must be >= 1");
  Slices s{N, model.beta / N, {}, {}, {}};
  for (int i = 0; i <= N; ++i) {
    double t = i * s.delta;
    s.a.push_back(model.a(t));
    s.b.push_back(model.b(t));
    s.c.push_back(model.c(t));
    if (!(s.c.back() > 0)) throw DomainError("c must be positive at every slice");
    if (s.a.back() < 0) throw DomainError("a must be non-negative at every slice");
  }
  return s;
}

// log of prod_{i=0}^{N-1} (2 pi delta / c_i)^{-1/2}
double log_measure(const Slices& s) {
  double l = 0;
  for (int i = 0; i < s.N; ++i) l -= 0.5 * std::log(2 * kPi * s.delta / s.c[i]);
  return l;
}

double endpoint_const(const Slices& s, double phi0, double phiN) {
  double d = s.delta;
  return s.c[1] * phi0 * phi0 / (2 * d) + s.c[s.N] * phiN * phiN / (2 * d) +
         s.b[s.N] * d * phiN * phiN + s.a[s.N] * d * std::pow(phiN, 4);
}

// Tridiagonal Gaussian part of E_N in the interior variables phi_1..phi_{N-1}.
struct Gaussian {
  int n = 0;
  std::vector<double> diag, off, j;  // A_ii, A_{i,i+1}, linear term
  std::vector<double> l, m;          // Cholesky: L_ii, L_{i+1,i}
  std::vector<double> mean;
  double logdet = 0;
  bool pd = true;
};

Gaussian gaussian_part(const Slices& s, double phi0, double phiN) {
  Gaussian g;
  g.n = s.N - 1;
  double d = s.delta;
  for (int i = 1; i <= g.n; ++i) {
    g.diag.push_back((s.c[i] + s.c[i + 1]) / d + 2 * s.b[i] * d);
    if (i < g.n) g.off.push_back(-s.c[i + 1] / d);
    g.j.push_back(0);
  }
  if (g.n == 0) return g;
  g.j[0] += s.c[1] * phi0 / d;
  g.j[g.n - 1] += s.c[s.N] * phiN / d;
  g.l.resize(g.n);
  g.m.resize(g.n);
  for (int i = 0; i < g.n; ++i) {
    double p = g.diag[i] - (i > 0 ? g.m[i - 1] * g.m[i - 1] : 0.0);
    if (!(p > 0)) {
      g.pd = false;
      return g;
    }
    g.l[i] = std::sqrt(p);
    if (i + 1 < g.n) g.m[i] = g.off[i] / g.l[i];
    g.logdet += 2 * std::log(g.l[i]);
  }
  std::vector<double> y(g.n);
  for (int i = 0; i < g.n; ++i) y[i] = (g.j[i] - (i > 0 ? g.m[i - 1] * y[i - 1] : 0.0)) / g.l[i];
  g.mean.resize(g.n);
  for (int i = g.n - 1; i >= 0; --i)
    g.mean[i] = (y[i] - (i + 1 < g.n ? g.m[i] * g.mean[i + 1] : 0.0)) / g.l[i];
  return g;
}

// diag of A^{-1} = sum_i (L^{-1})_{ik}^2, O(n^2)
std::vector<double> marginal_variances(const Gaussian& g) {
  std::vector<double> var(g.n, 0.0);
  for (int k = 0; k < g.n; ++k) {
    double x = 1 / g.l[k];
    double acc = x * x;
    for (int i = k + 1; i < g.n; ++i) {
      x = -g.m[i - 1] * x / g.l[i];
      acc += x * x;
    }
    var[k] = acc;
  }
  return var;
}

double truncation_radius(const Slices& s, const Gaussian& g, double phi0, double phiN) {
  double r = std::max(std::abs(phi0), std::abs(phiN));
  if (g.pd && g.n > 0) {
    auto var = marginal_variances(g);
    for (int i = 0; i < g.n; ++i) r = std::max(r, std::abs(g.mean[i]) + 9.5 * std::sqrt(var[i]));
  }
  // Per-slice confinement: a delta phi^4 + b delta phi^2 rises 40 above its minimum.
  double amin = std::numeric_limits<double>::infinity();
  double bmin = std::numeric_limits<double>::infinity();
  for (int i = 1; i < s.N; ++i) {
    amin = std::min(amin, s.a[i]);
    bmin = std::min(bmin, s.b[i]);
  }
  if (!g.pd) {
    if (!(amin > 0)) throw DomainError("quadratic form is not positive definite and a vanishes");
    double d = s.delta;
    auto pot = [&](double x) { return amin * d * x * x * x * x + bmin * d * x * x; };
    double xmin = bmin < 0 ? std::sqrt(-bmin / (2 * amin)) : 0.0;
    double vmin = pot(xmin);
    double x = std::max(1.0, 2 * xmin);
    while (pot(x) - vmin < 40) x *= 1.1;
    r = std::max(r, x);
  }
  return r;
}

// Trapezoid transfer with spacing h on [-R, R]; returns log of the integral
// without the measure prefactor.
double transfer_log(const Slices& s, double phi0, double phiN, double R, double h) {
  int M = 2 * static_cast<int>(std::ceil(R / h)) + 1;
  double step = 2 * R / (M - 1);
  double d = s.delta;
  std::vector<double> x(M), g(M), next(M);
  for (int k = 0; k < M; ++k) x[k] = -R + k * step;
  auto site = [&](int i, double y) {
    return s.b[i] * d * y * y + s.a[i] * d * y * y * y * y;
  };
  double logscale = 0;
  for (int k = 0; k < M; ++k) {
    double dy = x[k] - phi0;
    g[k] = -(s.c[1] / (2 * d) * dy * dy + site(1, x[k]));
  }
  double gmax = *std::max_element(g.begin(), g.end());
  for (auto& v : g) v = std::exp(v - gmax);
  logscale = gmax;
  for (int i = 1; i + 1 <= s.N - 1; ++i) {
    double kc = s.c[i + 1] / (2 * d);
    for (int q = 0; q < M; ++q) {
      double acc = 0;
      for (int k = 0; k < M; ++k) {
        double dy = x[q] - x[k];
        acc += g[k] * std::exp(-kc * dy * dy);
      }
      next[q] = acc * step * std::exp(-site(i + 1, x[q]));
    }
    double mx = *std::max_element(next.begin(), next.end());
    if (!(mx > 0)) return -std::numeric_limits<double>::infinity();
    for (int q = 0; q < M; ++q) g[q] = next[q] / mx;
    logscale += std::log(mx);
  }
  double kc = s.c[s.N] / (2 * d);
  double acc = 0;
  for (int k = 0; k < M; ++k) {
    double dy = phiN - x[k];
    acc += g[k] * std::exp(-kc * dy * dy);
  }
  return logscale + std::log(acc * step);
}

}  // namespace

SlicedModel build_sliced(const CoefficientModel& model, double phi0, double phiN, int N) {
  if (N < 2) throw DomainError("sliced model needs N >= 2");
  Slices s = sample(model, N);
  SlicedModel m;
  m.N = N;
  m.delta = s.delta;
  m.phi0 = phi0;
  m.phiN = phiN;
  m.a = s.a;
  m.b = s.b;
  m.c = s.c;
  double d = s.delta;
  m.sigma.assign(N + 1, 0.0);
  m.z.assign(N + 1, 0.0);
  m.psi.assign(N + 1, 0.0);
  m.Sigma.assign(N + 1, 0.0);
  for (int i = 1; i <= N - 1; ++i) {
    double inv = (s.c[i] + s.c[i + 1]) / (2 * d) + s.b[i] * d;
    if (!(inv > 0)) throw DomainError("sigma_i is not positive at this slicing");
    m.sigma[i] = 1 / inv;
    m.z[i] = s.a[i] > 0 ? inv / std::sqrt(2 * s.a[i] * d) : std::numeric_limits<double>::infinity();
    m.psi[i] = m.sigma[i] * s.c[i + 1] / (2 * d);
  }
  for (int i = 1; i <= N - 2; ++i) {
    double k = s.c[i + 1] / (2 * d);
    m.Sigma[i] = k * k * m.sigma[i] * m.sigma[i + 1];
  }
  m.Omega.assign(std::max(N - 1, 1), 0.0);
  m.Omega[0] = 1;
  for (int i = 1; i <= N - 2; ++i) m.Omega[i] = 1 - m.Sigma[i] / m.Omega[i - 1];
  m.Q.assign(N, 0.0);
  m.Q[0] = d;
  if (N >= 2) m.Q[1] = m.Q[0] / m.psi[1];
  for (int i = 1; i + 1 <= N - 1; ++i)
    m.Q[i + 1] = ((s.c[i + 2] + s.c[i + 1] + 2 * s.b[i + 1] * d * d) * m.Q[i] -
                  s.c[i + 1] * m.Q[i - 1]) /
                 s.c[i + 2];
  double pre = (m.Q[0] * m.Q[1] / (2 * d * d)) * (s.c[1] * s.c[2] / 2) * phi0 * phi0 * d;
  m.d.assign(N - 1, 0.0);
  m.Y = 0;
  for (int i = 0; i <= N - 2; ++i) {
    m.d[i] = pre / (s.c[i + 2] * m.Q[i + 1] * m.Q[i]);
    m.Y += m.d[i];
  }
  m.X = std::sqrt(m.Q[0] * m.Q[1] / (2 * d * d)) * std::sqrt(s.c[1] * s.c[2]) / m.Q[N - 1] * phi0 *
        phiN;
  return m;
}

QuadratureResult wn_transfer(const CoefficientModel& model, double phi0, double phiN, int N) {
  if (N < 1 || N > 4096) throw DomainError("slice count out of range");
  Slices s = sample(model, N);
  double lm = log_measure(s);
  QuadratureResult out;
  if (N == 1) {
    // phi_1 = phi_N: single kinetic, harmonic and quartic term
    double d = s.delta;
    double dphi = phiN - phi0;
    double e = s.c[1] / 2 * dphi * dphi / d + s.b[1] * d * phiN * phiN + s.a[1] * d * std::pow(phiN, 4);
    out.value = std::exp(lm - e);
    return out;
  }
  Gaussian g = gaussian_part(s, phi0, phiN);
  double R = truncation_radius(s, g, phi0, phiN);
  double width = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= N; ++i) width = std::min(width, std::sqrt(s.delta / s.c[i]));
  // transfer_log folds the phi0 and phiN kinetic pieces into the kernel, so
  // only the last-site potential is added here
  double d = s.delta;
  double tail = s.b[N] * d * phiN * phiN + s.a[N] * d * std::pow(phiN, 4);
  auto eval = [&](double r, double h) { return transfer_log(s, phi0, phiN, r, h) + lm - tail; };
  // refine the spacing until two successive values agree, then widen the radius
  double h = width / 2;
  double prev = eval(R, h), cur = prev, err = 0;
  bool ok = false;
  for (int it = 0; it < 10 && !ok; ++it) {
    h /= 1.5;
    cur = eval(R, h);
    err = std::abs(cur - prev);
    ok = std::isfinite(cur) && err < 1e-12;
    prev = cur;
  }
  double wide = eval(R * 1.25, h);
  err = std::max(err, std::abs(wide - cur));
  if (!ok || !std::isfinite(wide) || err > 1e-10)
    throw ConvergenceError("time-sliced quadrature did not stabilise");
  out.value = std::exp(cur);
  out.error_estimate = out.value * std::max(err, 1e-15);
  out.radius = R;
  out.nodes = 2 * static_cast<int>(std::ceil(R / h)) + 1;
  return out;
}

QuadratureResult wn_quadrature(const CoefficientModel& model, double phi0, double phiN, int N) {
  if (N < 1 || N > 5) throw DomainError("wn_quadrature supports 1 <= N <= 5");
  return wn_transfer(model, phi0, phiN, N);
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed) {
  std::uint64_t st = seed;
  for (auto& w : s_) w = splitmix64(st);
}

std::uint64_t Xoshiro256pp::next() {
  auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
  std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256pp::uniform() {
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

MonteCarloResult wn_montecarlo(const CoefficientModel& model, double phi0, double phiN, int N,
                               long samples, std::uint64_t seed, int workers) {
  if (N < 2 || N > 512) throw DomainError("wn_montecarlo supports 2 <= N <= 512");
  if (samples < 10000) throw DomainError("wn_montecarlo needs at least 10^4 samples");
  Slices s = sample(model, N);
  Gaussian g = gaussian_part(s, phi0, phiN);
  if (!g.pd) throw DomainError("degenerate covariance: Gaussian bridge is not positive definite");
  int n = g.n;
  double jm = 0;
  for (int i = 0; i < n; ++i) jm += g.j[i] * g.mean[i];
  double log_norm = log_measure(s) + 0.5 * n * std::log(2 * kPi) - 0.5 * g.logdet + 0.5 * jm -
                    endpoint_const(s, phi0, phiN);
  MonteCarloResult out;
  out.rng = kRngName;
  out.gaussian_norm = std::exp(log_norm);

  long nblocks = (samples + kMcBlock - 1) / kMcBlock;
  std::vector<double> bsum(nblocks), bsq(nblocks);
  std::vector<double> ad(n);
  for (int i = 0; i < n; ++i) ad[i] = s.a[i + 1] * s.delta;

  auto run_block = [&](long blk) {
    std::uint64_t st = seed ^ (0xD1B54A32D192ED03ULL * static_cast<std::uint64_t>(blk + 1));
    Xoshiro256pp rng(splitmix64(st));
    long count = std::min<long>(kMcBlock, samples - blk * kMcBlock);
    std::vector<double> zv(n), x(n);
    double sum = 0, sq = 0;
    for (long k = 0; k < count; ++k) {
      for (int i = 0; i < n; i += 2) {
        double u1 = rng.uniform(), u2 = rng.uniform();
        double r = std::sqrt(-2 * std::log(u1));
        zv[i] = r * std::cos(2 * kPi * u2);
        if (i + 1 < n) zv[i + 1] = r * std::sin(2 * kPi * u2);
      }
      // phi = mean + L^{-T} z
      for (int i = n - 1; i >= 0; --i)
        x[i] = (zv[i] - (i + 1 < n ? g.m[i] * x[i + 1] : 0.0)) / g.l[i];
      double e = 0;
      for (int i = 0; i < n; ++i) {
        double p = g.mean[i] + x[i];
        double p2 = p * p;
        e += ad[i] * p2 * p2;
      }
      double w = std::exp(-e);
      sum += w;
      sq += w * w;
    }
    bsum[blk] = sum;
    bsq[blk] = sq;
  };

  int nw = std::max(1, workers);
  if (nw == 1) {
    for (long b = 0; b < nblocks; ++b) run_block(b);
  } else {
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < nw; ++t)
      pool.emplace_back([&] {
        for (long b = next++; b < nblocks; b = next++) run_block(b);
      });
    for (auto& t : pool) t.join();
  }
  double sum = 0, sq = 0;
  for (long b = 0; b < nblocks; ++b) {
    sum += bsum[b];
    sq += bsq[b];
  }
  double mean = sum / samples;
  double var = std::max(0.0, sq / samples - mean * mean) * samples / (samples - 1.0);
  out.mean = out.gaussian_norm * mean;
  out.stderr_ = out.gaussian_norm * std::sqrt(var / samples);
  return out;
}

SeriesExactResult wn_series_exact(const CoefficientModel& model, double phi0, double phiN, int N,
                                  int cap) {
  if (N < 1 || N > 3) throw DomainError("wn_series_exact supports N <= 3");
  SeriesExactResult out;
  if (N == 1) {
    out.value = wn_transfer(model, phi0, phiN, 1).value;
    out.terms = 1;
    return out;
  }
  SlicedModel m = build_sliced(model, phi0, phiN, N);
  double d = m.delta;
  double pref = -0.5 * std::log(2 * kPi * d / m.c[0]);
  for (int i = 1; i <= N - 1; ++i)
    pref -= 0.5 * std::log((m.c[i] + m.c[i + 1]) / m.c[i] + 2 * m.b[i] * d * d / m.c[i]);
  double ex = -m.a[N] * d * std::pow(phiN, 4) - (m.c[N] / (2 * d) + m.b[N] * d) * phiN * phiN -
              m.c[1] * phi0 * phi0 / (2 * d);
  double scale = std::exp(pref + ex);

  std::vector<std::map<int, double>> memo(N);
  auto D = [&](int i, int order) {
    auto it = memo[i].find(order);
    if (it != memo[i].end()) return it->second;
    double v = std::isinf(m.z[i]) ? 1.0 : pcf_scaled(-order - 0.5, m.z[i]);
    memo[i][order] = v;
    return v;
  };
  // first factor x0^{2n0+rho}/(2n0+rho)!, last factor xl^{2n+rho}/n! with
  // signs kept on the odd powers
  double x0 = m.c[1] * phi0 * std::sqrt(m.sigma[1]) / d;
  double xl = m.c[N] * phiN * std::sqrt(m.sigma[N - 1]) / (2 * d);
  auto lgam = [](double x) { return std::lgamma(x); };
  auto powterm = [&](double x, int k) {  // x^k / k! with sign
    if (k == 0) return 1.0;
    if (x == 0) return 0.0;
    double v = std::exp(k * std::log(std::abs(x)) - lgam(k + 1.0));
    return (x < 0 && (k & 1)) ? -v : v;
  };
  auto lastterm = [&](double x, int n, int rho) {  // x^{2n+rho}/n!
    int k = 2 * n + rho;
    if (k == 0) return 1.0;
    if (x == 0) return 0.0;
    double v = std::exp(k * std::log(std::abs(x)) - lgam(n + 1.0));
    return (x < 0 && (k & 1)) ? -v : v;
  };
  double total = 0, tail = 0;
  long terms = 0;
  const double rel = 1e-17;
  for (int rho = 0; rho <= 1; ++rho) {
    int small0 = 0;
    double lastmax0 = 0;
    for (int n0 = 0; n0 <= cap; ++n0) {
      double f0 = powterm(x0, 2 * n0 + rho);
      double level0 = 0;
      if (f0 != 0) {
        if (N == 2) {
          int small1 = 0;
          double last1 = 0;
          for (int n1 = 0; n1 <= cap; ++n1) {
            double t = f0 * lastterm(xl, n1, rho) * pochhammer(n1 + rho + 0.5, n0) *
                       D(1, n0 + n1 + rho);
            ++terms;
            level0 += t;
            last1 = std::abs(t);
            if (xl == 0) {
              last1 = 0;
              break;
            }
            small1 = last1 <= rel * std::abs(level0) ? small1 + 1 : 0;
            if (small1 >= 3) break;
            if (n1 == cap) throw ConvergenceError("series cap reached in n_1");
          }
          tail += last1;
        } else {
          int small1 = 0;
          for (int n1 = 0; n1 <= cap; ++n1) {
            double f1 = std::pow(m.Sigma[1], n1 + 0.5 * rho) / factorial(n1) *
                        pochhammer(n1 + rho + 0.5, n0) * D(1, n0 + n1 + rho);
            double level1 = 0, last2 = 0;
            int small2 = 0;
            for (int n2 = 0; n2 <= cap; ++n2) {
              double t = f0 * f1 * lastterm(xl, n2, rho) * pochhammer(n2 + rho + 0.5, n1) *
                         D(2, n1 + n2 + rho);
              ++terms;
              level1 += t;
              last2 = std::abs(t);
              if (xl == 0) {
                last2 = 0;
                break;
              }
              small2 = last2 <= rel * std::abs(level1) ? small2 + 1 : 0;
              if (small2 >= 3) break;
              if (n2 == cap) throw ConvergenceError("series cap reached in n_2");
            }
            tail += last2;
            level0 += level1;
            small1 = std::abs(level1) <= rel * std::abs(level0) ? small1 + 1 : 0;
            if (small1 >= 3) break;
            if (n1 == cap) throw ConvergenceError("series cap reached in n_1");
          }
        }
      }
      total += level0;
      lastmax0 = std::abs(level0);
      if (x0 == 0) {
        lastmax0 = 0;
        break;
      }
      small0 = lastmax0 <= rel * std::abs(total) ? small0 + 1 : 0;
      if (small0 >= 3) break;
      if (n0 == cap) throw ConvergenceError("series cap reached in n_0");
    }
    tail += lastmax0;
  }
  out.value = scale * total;
  out.tail_bound = scale * tail;
  out.terms = terms;
  if (out.tail_bound > 1e-8 * std::abs(out.value) + 1e-300)
    throw ConvergenceError("series tail bound exceeds 1e-8");
  return out;
}

namespace {

// Weighted least squares via normal equations; returns the coefficients.
bool poly_fit(const std::vector<double>& x, const std::vector<double>& y,
              const std::vector<double>& w, int deg, std::vector<double>& coef) {
  int p = deg + 1;
  if (static_cast<int>(x.size()) < p) return false;
  std::vector<double> A(p * p, 0.0), r(p, 0.0);
  for (size_t k = 0; k < x.size(); ++k) {
    std::vector<double> phi(p);
    phi[0] = 1;
    for (int i = 1; i < p; ++i) phi[i] = phi[i - 1] * x[k];
    for (int i = 0; i < p; ++i) {
      r[i] += w[k] * phi[i] * y[k];
      for (int j = 0; j < p; ++j) A[i * p + j] += w[k] * phi[i] * phi[j];
    }
  }
  for (int col = 0; col < p; ++col) {
    int piv = col;
    for (int i = col + 1; i < p; ++i)
      if (std::abs(A[i * p + col]) > std::abs(A[piv * p + col])) piv = i;
    if (A[piv * p + col] == 0) return false;
    if (piv != col) {
      for (int j = 0; j < p; ++j) std::swap(A[col * p + j], A[piv * p + j]);
      std::swap(r[col], r[piv]);
    }
    for (int i = col + 1; i < p; ++i) {
      double f = A[i * p + col] / A[col * p + col];
      for (int j = col; j < p; ++j) A[i * p + j] -= f * A[col * p + j];
      r[i] -= f * r[col];
    }
  }
  coef.assign(p, 0.0);
  for (int i = p - 1; i >= 0; --i) {
    double acc = r[i];
    for (int j = i + 1; j < p; ++j) acc -= A[i * p + j] * coef[j];
    coef[i] = acc / A[i * p + i];
  }
  return true;
}

bool poly_fit_at_zero(const std::vector<double>& x, const std::vector<double>& y,
                      const std::vector<double>& w, int deg, double& limit) {
  std::vector<double> coef;
  if (!poly_fit(x, y, w, deg, coef)) return false;
  limit = coef[0];
  return true;
}

double chi2_dof(const std::vector<double>& x, const std::vector<double>& y,
                const std::vector<double>& s2, double tau2, int deg) {
  std::vector<double> w(x.size()), coef;
  for (size_t k = 0; k < x.size(); ++k) w[k] = 1 / (s2[k] + tau2);
  if (!poly_fit(x, y, w, deg, coef)) return 0;
  double chi = 0;
  for (size_t k = 0; k < x.size(); ++k) {
    double f = 0;
    for (int i = deg; i >= 0; --i) f = f * x[k] + coef[i];
    chi += w[k] * (y[k] - f) * (y[k] - f);
  }
  int dof = static_cast<int>(x.size()) - deg - 1;
  return dof > 0 ? chi / dof : 0;
}

// Weights 1/(s_k^2 + tau^2) with the systematic floor tau^2 raised until the
// fit has chi^2 per degree of freedom equal to one.
std::vector<double> calibrated_weights(const std::vector<double>& x, const std::vector<double>& y,
                                       std::vector<double> s2, int deg) {
  double tau2 = 0;
  if (chi2_dof(x, y, s2, 0, deg) > 1) {
    double lo = 0, hi = 1e-300;
    double ymax = 0;
    for (double v : y) ymax = std::max(ymax, std::abs(v));
    hi = std::max(ymax * ymax, 1e-300);
    for (int it = 0; it < 200; ++it) {
      double mid = std::sqrt(std::max(lo, 1e-300 * hi) * hi);
      if (chi2_dof(x, y, s2, mid, deg) > 1) lo = mid;
      else hi = mid;
      if (hi - lo <= 1e-12 * hi) break;
    }
    tau2 = hi;
  }
  std::vector<double> w(x.size());
  for (size_t k = 0; k < x.size(); ++k) w[k] = 1 / (s2[k] + tau2);
  return w;
}

}  // namespace

ExtrapolationResult continuum_extrapolate(const std::vector<ExtrapolationPoint>& pts,
                                          int max_degree) {
  if (pts.size() < 3) throw DomainError("continuum_extrapolate needs at least 3 values");
  std::vector<ExtrapolationPoint> p = pts;
  std::sort(p.begin(), p.end(), [](auto& l, auto& r) { return l.N < r.N; });
  ExtrapolationResult out;
  std::vector<double> x, y, s2;
  double scale = 0;
  for (auto& q : p) scale = std::max(scale, std::abs(q.value));
  double floor = 1e-15 * std::max(scale, 1e-300);
  for (auto& q : p) {
    x.push_back(1.0 / q.N);
    y.push_back(q.value);
    double s = std::max(q.stderr_, floor);
    s2.push_back(s * s);
  }
  for (size_t k = 2; k < p.size(); ++k) {
    double d1 = p[k].value - p[k - 1].value, d0 = p[k - 1].value - p[k - 2].value;
    if (d1 * d0 < 0 && std::abs(d1) > 3 * (p[k].stderr_ + p[k - 1].stderr_)) out.monotone = false;
  }
  int n = static_cast<int>(p.size());
  int deg = std::min(max_degree, n - 2);
  out.degree = deg;
  std::vector<double> w = calibrated_weights(x, y, s2, deg);
  double limit = 0;
  if (!poly_fit_at_zero(x, y, w, deg, limit)) throw ConvergenceError("extrapolation fit failed");
  out.limit = limit;
  // leave-one-out spread
  double loo = 0;
  for (int k = 0; k < n; ++k) {
    std::vector<double> xk, yk, wk;
    for (int i = 0; i < n; ++i)
      if (i != k) {
        xk.push_back(x[i]);
        yk.push_back(y[i]);
        wk.push_back(w[i]);
      }
    double lk;
    if (poly_fit_at_zero(xk, yk, wk, std::min(deg, n - 2), lk)) loo = std::max(loo, std::abs(lk - limit));
  }
  // propagated statistical error: perturb each point by its stderr
  double prop2 = 0;
  for (int k = 0; k < n; ++k) {
    if (p[k].stderr_ == 0) continue;
    auto yk = y;
    yk[k] += p[k].stderr_;
    double lk;
    if (poly_fit_at_zero(x, yk, w, deg, lk)) prop2 += (lk - limit) * (lk - limit);
  }
  out.error_estimate = std::max(loo, std::sqrt(prop2));
  if (!out.monotone) out.error_estimate *= 2;
  return out;
}

}  // namespace aprop
