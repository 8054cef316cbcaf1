#include "tbma/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tbma {
namespace {

constexpr double kPmfTol = 1e-9;

void check_pmf(const std::vector<double>& p, int m_levels, const char* name) {
  if (static_cast<int>(p.size()) != m_levels) {
    std::ostringstream os;
    os << name << " has " << p.size() << " entries, expected " << m_levels;
    throw std::invalid_argument(os.str());
  }
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) {
      std::ostringstream os;
      os << name << " has a negative entry";
      throw std::invalid_argument(os.str());
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kPmfTol) {
    std::ostringstream os;
    os << name << " sums to " << sum;
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

SystemConfig validate_config(const SystemConfig& cfg) {
  if (!(cfg.lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!std::isfinite(cfg.snr_db)) throw std::invalid_argument("snr_db must be finite");
  if (cfg.m_levels < 2) throw std::invalid_argument("m_levels must be at least 2");
  if (cfg.reuse_mode == ReuseMode::Orthogonal && cfg.m_levels % 2 != 0)
    throw std::invalid_argument("M must be even");
  if (cfg.l_intervals < 1) throw std::invalid_argument("l_intervals must be at least 1");
  if (!(cfg.rho >= 0.0 && cfg.rho <= 1.0)) throw std::invalid_argument("rho must be in [0, 1]");
  if (!(cfg.fronthaul_capacity >= 0.0) || !std::isfinite(cfg.fronthaul_capacity))
    throw std::invalid_argument("fronthaul_capacity must be nonnegative");
  if (!std::isfinite(cfg.mu_h)) throw std::invalid_argument("mu_h must be finite");
  if (!(cfg.sigma2_h >= 0.0)) throw std::invalid_argument("sigma2_h must be nonnegative");
  if (!std::isfinite(cfg.mu_g)) throw std::invalid_argument("mu_g must be finite");
  if (!(cfg.sigma2_g >= 0.0)) throw std::invalid_argument("sigma2_g must be nonnegative");
  check_pmf(cfg.pmf_cell1_h0, cfg.m_levels, "pmf_cell1_h0");
  check_pmf(cfg.pmf_cell1_h1, cfg.m_levels, "pmf_cell1_h1");
  check_pmf(cfg.pmf_cell2_h0, cfg.m_levels, "pmf_cell2_h0");
  check_pmf(cfg.pmf_cell2_h1, cfg.m_levels, "pmf_cell2_h1");
  return cfg;
}

double joint_prior(const SystemConfig& cfg, JointHypothesisIndex h) {
  return h.j == h.k ? cfg.rho / 2.0 : (1.0 - cfg.rho) / 2.0;
}

QoiPair sample_qoi_pair(const SystemConfig& cfg, Rng& rng) {
  QoiPair q;
  q.theta1 = rng.uniform() < 0.5 ? 0 : 1;
  q.theta2 = rng.uniform() < cfg.rho ? q.theta1 : 1 - q.theta1;
  return q;
}

std::vector<double> observation_pmf(const SystemConfig& cfg, int cell, int hyp) {
  if (cell != 1 && cell != 2) throw std::invalid_argument("cell must be 1 or 2");
  if (hyp != 0 && hyp != 1) throw std::invalid_argument("hyp must be 0 or 1");
  const std::vector<double>& base =
      cell == 1 ? (hyp == 0 ? cfg.pmf_cell1_h0 : cfg.pmf_cell1_h1)
                : (hyp == 0 ? cfg.pmf_cell2_h0 : cfg.pmf_cell2_h1);
  if (cfg.reuse_mode == ReuseMode::NonOrthogonal) return base;
  std::vector<double> out(cfg.m_levels / 2);
  for (size_t m = 0; m < out.size(); ++m) out[m] = base[2 * m] + base[2 * m + 1];
  return out;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<double> parse_pmf(const std::string& value, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw std::invalid_argument(key + " has an empty entry");
    size_t pos = 0;
    double v = std::stod(item, &pos);
    if (pos != item.size()) throw std::invalid_argument(key + " has a malformed entry: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument(key + " is empty");
  return out;
}

double parse_double(const std::string& value, const std::string& key) {
  size_t pos = 0;
  double v = std::stod(value, &pos);
  if (pos != value.size()) throw std::invalid_argument(key + " has a malformed value: " + value);
  return v;
}

int parse_int(const std::string& value, const std::string& key) {
  size_t pos = 0;
  int v = std::stoi(value, &pos);
  if (pos != value.size()) throw std::invalid_argument(key + " has a malformed value: " + value);
  return v;
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument(key + " must be true or false: " + value);
}

}  // namespace

SystemConfig parse_config(const std::string& text) {
  SystemConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << "line " << lineno << " is not key = value: " << line;
      throw std::invalid_argument(os.str());
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("empty key in config");
    if (value.empty()) throw std::invalid_argument(key + " has an empty value");

    if (key == "lambda") cfg.lambda = parse_double(value, key);
    else if (key == "snr_db") cfg.snr_db = parse_double(value, key);
    else if (key == "m_levels") cfg.m_levels = parse_int(value, key);
    else if (key == "l_intervals") cfg.l_intervals = parse_int(value, key);
    else if (key == "rho") cfg.rho = parse_double(value, key);
    else if (key == "fronthaul_capacity") cfg.fronthaul_capacity = parse_double(value, key);
    else if (key == "mu_h") cfg.mu_h = parse_double(value, key);
    else if (key == "sigma2_h") cfg.sigma2_h = parse_double(value, key);
    else if (key == "mu_g") cfg.mu_g = parse_double(value, key);
    else if (key == "sigma2_g") cfg.sigma2_g = parse_double(value, key);
    else if (key == "reuse_mode") {
      if (value == "non_orthogonal") cfg.reuse_mode = ReuseMode::NonOrthogonal;
      else if (value == "orthogonal") cfg.reuse_mode = ReuseMode::Orthogonal;
      else throw std::invalid_argument("reuse_mode must be non_orthogonal or orthogonal");
    }
    else if (key == "pmf_cell1_h0") cfg.pmf_cell1_h0 = parse_pmf(value, key);
    else if (key == "pmf_cell1_h1") cfg.pmf_cell1_h1 = parse_pmf(value, key);
    else if (key == "pmf_cell2_h0") cfg.pmf_cell2_h0 = parse_pmf(value, key);
    else if (key == "pmf_cell2_h1") cfg.pmf_cell2_h1 = parse_pmf(value, key);
    else if (key == "fronthaul.per_dim_form") cfg.per_dim_form = parse_bool(value, key);
    else throw std::invalid_argument("unknown config key: " + key);
  }
  return validate_config(cfg);
}

SystemConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

}  // namespace tbma
