#include "aprop/coefficients.hpp"

#include <boost/math/interpolators/barycentric_rational.hpp>
#include <cmath>
#include <fstream>
#include <sstream>

#include "aprop/errors.hpp"

namespace aprop {

struct CoeffFn::TableImpl {
  std::vector<double> x, y;
  boost::math::barycentric_rational<double> interp;
  TableImpl(std::vector<double> xs, std::vector<double> ys)
      : x(xs), y(ys), interp(xs.begin(), xs.end(), ys.begin(), 3) {}
};

CoeffFn CoeffFn::constant(double v) {
  CoeffFn f;
  f.kind_ = Kind::Const;
  f.p_ = {v};
  f.table_.reset();
  return f;
}

CoeffFn CoeffFn::poly(std::vector<double> coeffs) {
  if (coeffs.empty()) throw DomainError("polynomial coefficient needs at least one term");
  CoeffFn f = constant(0);
  f.kind_ = Kind::Poly;
  f.p_ = std::move(coeffs);
  return f;
}

CoeffFn CoeffFn::table(std::vector<double> taus, std::vector<double> values) {
  if (taus.size() != values.size() || taus.size() < 4)
    throw DomainError("coefficient table needs at least 4 rows");
  for (std::size_t i = 1; i < taus.size(); ++i)
    if (!(taus[i] > taus[i - 1])) throw DomainError("coefficient table tau must be strictly increasing");
  CoeffFn f = constant(0);
  f.kind_ = Kind::Table;
  f.p_.clear();
  f.table_ = std::make_shared<const TableImpl>(std::move(taus), std::move(values));
  return f;
}

double CoeffFn::operator()(double t) const {
  switch (kind_) {
    case Kind::Const:
      return scale_ * p_[0];
    case Kind::Poly: {
      double v = 0;
      for (auto it = p_.rbegin(); it != p_.rend(); ++it) v = v * t + *it;
      return scale_ * v;
    }
    case Kind::Table:
      return scale_ * table_->interp(t);
  }
  return 0;
}

double CoeffFn::d1(double t) const {
  switch (kind_) {
    case Kind::Const:
      return 0;
    case Kind::Poly: {
      double v = 0;
      for (std::size_t k = p_.size(); k-- > 1;) v = v * t + k * p_[k];
      return scale_ * v;
    }
    case Kind::Table:
      return scale_ * table_->interp.prime(t);
  }
  return 0;
}

double CoeffFn::d2(double t) const {
  switch (kind_) {
    case Kind::Const:
      return 0;
    case Kind::Poly: {
      double v = 0;
      for (std::size_t k = p_.size(); k-- > 2;) v = v * t + k * (k - 1) * p_[k];
      return scale_ * v;
    }
    case Kind::Table: {
      double h = 1e-4 * (table_max() - table_min());
      return scale_ * (table_->interp.prime(t + h) - table_->interp.prime(t - h)) / (2 * h);
    }
  }
  return 0;
}

CoeffFn CoeffFn::scaled(double s) const {
  CoeffFn f = *this;
  f.scale_ *= s;
  return f;
}

double CoeffFn::table_min() const { return table_ ? table_->x.front() : -INFINITY; }
double CoeffFn::table_max() const { return table_ ? table_->x.back() : INFINITY; }

void CoefficientModel::validate() const {
  if (!(beta > 0) || !std::isfinite(beta)) throw DomainError("beta must be > 0");
  for (const CoeffFn* f : {&a, &b, &c})
    if (f->kind() == CoeffFn::Kind::Table &&
        (f->table_min() > 1e-12 * beta || f->table_max() < beta * (1 - 1e-12)))
      throw DomainError("coefficient table does not cover [0, beta]");
  const int n = 2000;
  for (int i = 0; i <= n; ++i) {
    double t = beta * i / n;
    if (!(c(t) > 0)) throw DomainError("c(tau) must be > 0 on [0, beta] (fails at tau=" + std::to_string(t) + ")");
    if (!(a(t) >= 0)) throw DomainError("a(tau) must be >= 0 on [0, beta] (fails at tau=" + std::to_string(t) + ")");
    if (!std::isfinite(b(t))) throw DomainError("b(tau) is not finite");
  }
}

double CoefficientModel::dlnc(double t) const {
  if (c.kind() != CoeffFn::Kind::Table) return c.d1(t) / c(t);
  double h = 1e-4 * beta;
  return (std::log(c(t + h)) - std::log(c(t - h))) / (2 * h);
}

double CoefficientModel::d2lnc(double t) const {
  if (c.kind() != CoeffFn::Kind::Table) {
    double r = c.d1(t) / c(t);
    return c.d2(t) / c(t) - r * r;
  }
  double h = 1e-3 * beta;
  return (std::log(c(t + h)) - 2 * std::log(c(t)) + std::log(c(t - h))) / (h * h);
}

CoefficientModel CoefficientModel::constant(double a, double b, double c, double beta) {
  CoefficientModel m;
  m.a = CoeffFn::constant(a);
  m.b = CoeffFn::constant(b);
  m.c = CoeffFn::constant(c);
  m.beta = beta;
  return m;
}

CoeffTable load_coeff_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open coefficient table '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path + ": empty table");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "tau,a,b,c") throw ConfigError(path + ":1: header must be 'tau,a,b,c'");
  CoeffTable t;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    double v[4];
    for (int k = 0; k < 4; ++k) {
      if (!std::getline(ss, cell, ',')) throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 4 columns");
      try {
        std::size_t pos = 0;
        v[k] = std::stod(cell, &pos);
        if (pos != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ConfigError(path + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    t.tau.push_back(v[0]);
    t.a.push_back(v[1]);
    t.b.push_back(v[2]);
    t.c.push_back(v[3]);
  }
  return t;
}

}  // namespace aprop
