#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "aprop/coefficients.hpp"

namespace aprop {

// Flat key = value text. "[name]" starts a section whose keys are stored as
// "name.key"; '#' starts a comment; blank lines are ignored.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "<config>");
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& get(const std::string& key) const;  // ConfigError if missing
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  long get_long_or(const std::string& key, long fallback) const;
  int line_of(const std::string& key) const;
  const std::string& origin() const { return origin_; }
  const std::string& base_dir() const { return base_dir_; }
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::string where(const std::string& key) const;
  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;
  std::string origin_;
  std::string base_dir_ = ".";
};

struct RunConfig {
  CoefficientModel model;
  double phi0 = 0, phiN = 0;
  int mu_max = 3;
  int grid_n = 2048;
  std::vector<int> N_list;
  long samples = 1000000;
  std::uint64_t seed = 1;
  int workers = 1;
  double tol_rel = 0.01;
  double tol_sigma = 3;
};

// Builds the run settings; model validation errors surface as DomainError.
RunConfig make_run_config(const Config& cfg);

// "const:<v>", "poly:<c0,c1,...>" or "table:<path>" (CSV tau,a,b,c; the
// column matching `name` is used).
CoeffFn parse_coeff(const std::string& spec, const std::string& name, const std::string& base_dir);

}  // namespace aprop
