#pragma once

#include <memory>
#include <string>
#include <vector>

namespace aprop {

// One coefficient function tau -> real: constant, polynomial in tau, or
// interpolated samples.
class CoeffFn {
 public:
  enum class Kind { Const, Poly, Table };

  static CoeffFn constant(double v);
  static CoeffFn poly(std::vector<double> coeffs);  // c0 + c1 tau + ...
  static CoeffFn table(std::vector<double> taus, std::vector<double> values);

  CoeffFn() : p_{0.0} {}

  Kind kind() const { return kind_; }
  double operator()(double tau) const;
  double d1(double tau) const;
  double d2(double tau) const;
  CoeffFn scaled(double s) const;
  double table_min() const;
  double table_max() const;

 private:
  struct TableImpl;
  Kind kind_ = Kind::Const;
  std::vector<double> p_;
  std::shared_ptr<const TableImpl> table_;
  double scale_ = 1;
};

struct CoefficientModel {
  CoeffFn a, b, c;
  double beta = 1;

  // c > 0 and a >= 0 on a dense sample of [0, beta]; tables cover [0, beta]
  void validate() const;

  // d/dtau ln c and d^2/dtau^2 ln c: analytic for constant and polynomial
  // c, centred differences of the interpolant for tables.
  double dlnc(double tau) const;
  double d2lnc(double tau) const;

  static CoefficientModel constant(double a, double b, double c, double beta);
};

struct CoeffTable {
  std::vector<double> tau, a, b, c;
};

// Reads a CSV with header "tau,a,b,c".
CoeffTable load_coeff_table(const std::string& path);

}  // namespace aprop
