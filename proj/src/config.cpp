#include "aprop/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aprop/errors.hpp"

namespace aprop {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& s, double& out) {
  std::string t = trim(s);
  if (t.empty()) return false;
  std::istringstream in(t);
  in.imbue(std::locale::classic());
  in >> out;
  return in && in.peek() == std::char_traits<char>::eof();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(s);
  while (std::getline(in, cell, sep)) out.push_back(trim(cell));
  return out;
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  Config c;
  c.origin_ = origin;
  std::istringstream in(text);
  std::string raw, section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    auto at = origin + ":" + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(at + "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(at + "empty section name");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(at + "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(at + "empty key");
    if (!section.empty()) key = section + "." + key;
    if (c.values_.count(key)) throw ConfigError(at + "duplicate key '" + key + "'");
    c.values_[key] = val;
    c.lines_[key] = lineno;
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  Config c = parse(ss.str(), path);
  auto parent = std::filesystem::path(path).parent_path();
  c.base_dir_ = parent.empty() ? "." : parent.string();
  return c;
}

std::string Config::where(const std::string& key) const {
  auto it = lines_.find(key);
  return origin_ + ":" + (it == lines_.end() ? std::string("?") : std::to_string(it->second)) + ": ";
}

int Config::line_of(const std::string& key) const {
  auto it = lines_.find(key);
  return it == lines_.end() ? 0 : it->second;
}

const std::string& Config::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(origin_ + ": missing required key '" + key + "'");
  return it->second;
}

std::string Config::get_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? get(key) : fallback;
}

double Config::get_double(const std::string& key) const {
  double v;
  if (!parse_number(get(key), v)) throw ConfigError(where(key) + "key '" + key + "' is not a number");
  return v;
}

double Config::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long Config::get_long_or(const std::string& key, long fallback) const {
  if (!has(key)) return fallback;
  double v = get_double(key);
  if (v != std::floor(v) || std::abs(v) > 9.0e15)
    throw ConfigError(where(key) + "key '" + key + "' must be an integer");
  return static_cast<long>(v);
}

CoeffFn parse_coeff(const std::string& spec, const std::string& name, const std::string& base_dir) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) throw ConfigError("coefficient '" + spec + "' needs a kind prefix");
  std::string kind = trim(spec.substr(0, colon));
  std::string body = trim(spec.substr(colon + 1));
  if (kind == "const") {
    double v;
    if (!parse_number(body, v)) throw ConfigError("bad constant '" + body + "'");
    return CoeffFn::constant(v);
  }
  if (kind == "poly") {
    std::vector<double> cs;
    for (auto& cell : split(body, ',')) {
      double v;
      if (!parse_number(cell, v)) throw ConfigError("bad polynomial coefficient '" + cell + "'");
      cs.push_back(v);
    }
    if (cs.empty()) throw ConfigError("empty polynomial");
    return CoeffFn::poly(cs);
  }
  if (kind == "table") {
    std::filesystem::path p(body);
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    CoeffTable t = load_coeff_table(p.string());
    const std::vector<double>& col = name == "a" ? t.a : name == "b" ? t.b : t.c;
    return CoeffFn::table(t.tau, col);
  }
  throw ConfigError("unknown coefficient kind '" + kind + "'");
}

RunConfig make_run_config(const Config& cfg) {
  RunConfig r;
  r.model.beta = cfg.get_double("beta");
  r.phi0 = cfg.get_double("phi0");
  r.phiN = cfg.get_double("phiN");
  for (const char* n : {"a", "b", "c"}) {
    std::string key = std::string("coeff.") + n;
    try {
      CoeffFn f = parse_coeff(cfg.get(key), n, cfg.base_dir());
      if (*n == 'a') r.model.a = f;
      if (*n == 'b') r.model.b = f;
      if (*n == 'c') r.model.c = f;
    } catch (const ConfigError& e) {
      if (!cfg.has(key)) throw;
      throw ConfigError(cfg.origin() + ":" + std::to_string(cfg.line_of(key)) + ": " + key + ": " + e.what());
    }
  }
  r.mu_max = static_cast<int>(cfg.get_long_or("mu_max", 3));
  if (r.mu_max < 0 || r.mu_max > 4)
    throw ConfigError(cfg.origin() + ":" + std::to_string(cfg.line_of("mu_max")) + ": mu_max must be in 0..4");
  r.grid_n = static_cast<int>(cfg.get_long_or("grid_n", 2048));
  if (r.grid_n < 64)
    throw ConfigError(cfg.origin() + ":" + std::to_string(cfg.line_of("grid_n")) + ": grid_n must be >= 64");
  if (cfg.has("oracle.N_list")) {
    for (auto& cell : split(cfg.get("oracle.N_list"), ',')) {
      double v;
      if (!parse_number(cell, v) || v != std::floor(v) || v < 1)
        throw ConfigError(cfg.origin() + ":" + std::to_string(cfg.line_of("oracle.N_list")) +
                          ": bad slice count '" + cell + "'");
      r.N_list.push_back(static_cast<int>(v));
    }
  }
  r.samples = cfg.get_long_or("oracle.samples", 1000000);
  r.seed = static_cast<std::uint64_t>(cfg.get_long_or("oracle.seed", 1));
  r.workers = static_cast<int>(cfg.get_long_or("oracle.workers", 1));
  r.tol_rel = cfg.get_double_or("tol.rel", 0.01);
  r.tol_sigma = cfg.get_double_or("tol.sigma", 3);
  r.model.validate();
  return r;
}

}  // namespace aprop
