#include "hetero/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hetero/errors.hpp"

namespace hetero {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void RunConfig::validate() const {
  if (!(grid.L > 0.0) || !std::isfinite(grid.L))
    throw ConfigError("grid.L must be positive");
  if (grid.N < 5 || grid.N % 2 == 0)
    throw ConfigError("grid.N must be an odd integer >= 5");
  forcing.validate();
  scheme.validate();
  if (family.c_list.empty() || family.c_list.front() != 0.0)
    throw ConfigError("family.c_list must start at 0");
  for (std::size_t i = 0; i + 1 < family.c_list.size(); ++i)
    if (!(family.c_list[i] < family.c_list[i + 1]))
      throw ConfigError("family.c_list must be strictly ascending");
  if (family.c_list.back() >= 1.0)
    throw ConfigError("family.c_list values must lie in [0, 1)");
  if (heteroclinic.k_max < 0)
    throw ConfigError("heteroclinic.k_max must be >= 0");
  heteroclinic.window.validate();
  if (!(tolerances.newton_tol > 0.0))
    throw ConfigError("tolerances.newton_tol must be positive");
  if (!(tolerances.anchor_tol > 0.0))
    throw ConfigError("tolerances.anchor_tol must be positive");
  if (!(tolerances.funnel_slack >= 0.0))
    throw ConfigError("tolerances.funnel_slack must be >= 0");
  if (output_dir.empty()) throw ConfigError("output_dir must be nonempty");
}

static std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

static double parse_real(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("value for " + key + " is not a number: '" + v + "'");
  }
  if (pos != v.size())
    throw ConfigError("trailing characters in value for " + key + ": '" + v +
                      "'");
  return x;
}

static long parse_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long x;
  try {
    x = std::stol(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("value for " + key + " is not an integer: '" + v + "'");
  }
  if (pos != v.size())
    throw ConfigError("trailing characters in value for " + key + ": '" + v +
                      "'");
  return x;
}

static std::vector<double> parse_list(const std::string& key,
                                      const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty())
      throw ConfigError("empty element in list for " + key);
    out.push_back(parse_real(key, item));
  }
  if (out.empty()) throw ConfigError("empty list for " + key);
  return out;
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream msg;
      msg << "line " << lineno << ": expected 'section.key = value'";
      throw ConfigError(msg.str());
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (val.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty value");

    if (key == "grid.L") c.grid.L = parse_real(key, val);
    else if (key == "grid.N") c.grid.N = static_cast<int>(parse_int(key, val));
    else if (key == "forcing.offset") c.forcing.offset = parse_real(key, val);
    else if (key == "forcing.width") c.forcing.width = parse_real(key, val);
    else if (key == "scheme.dt") c.scheme.dt = parse_real(key, val);
    else if (key == "scheme.theta") c.scheme.theta = parse_real(key, val);
    else if (key == "scheme.t_max") c.scheme.t_max = parse_real(key, val);
    else if (key == "scheme.store_stride")
      c.scheme.store_stride = parse_int(key, val);
    else if (key == "scheme.steady_tol")
      c.scheme.steady_tol = parse_real(key, val);
    else if (key == "scheme.blowup_threshold")
      c.scheme.blowup_threshold = parse_real(key, val);
    else if (key == "family.c_list") c.family.c_list = parse_list(key, val);
    else if (key == "heteroclinic.k_max")
      c.heteroclinic.k_max = static_cast<int>(parse_int(key, val));
    else if (key == "heteroclinic.window") {
      const std::vector<double> w = parse_list(key, val);
      if (w.size() != 4)
        throw ConfigError("heteroclinic.window needs 4 values: "
                          "t_lo,t_hi,x_lo,x_hi");
      c.heteroclinic.window = {w[0], w[1], w[2], w[3]};
    } else if (key == "tolerances.newton_tol")
      c.tolerances.newton_tol = parse_real(key, val);
    else if (key == "tolerances.anchor_tol")
      c.tolerances.anchor_tol = parse_real(key, val);
    else if (key == "tolerances.funnel_slack")
      c.tolerances.funnel_slack = parse_real(key, val);
    else if (key == "output_dir") c.output_dir = val;
    else if (key == "seed") {
      const long s = parse_int(key, val);
      if (s < 0) throw ConfigError("seed must be nonnegative");
      c.seed = static_cast<std::uint64_t>(s);
    } else
      throw ConfigError("unknown configuration key: " + key);
  }
  c.validate();
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string config_text(const RunConfig& c) {
  std::ostringstream o;
  o << "grid.L = " << format_double(c.grid.L) << "\n";
  o << "grid.N = " << c.grid.N << "\n";
  o << "forcing.offset = " << format_double(c.forcing.offset) << "\n";
  o << "forcing.width = " << format_double(c.forcing.width) << "\n";
  o << "scheme.dt = " << format_double(c.scheme.dt) << "\n";
  o << "scheme.theta = " << format_double(c.scheme.theta) << "\n";
  o << "scheme.t_max = " << format_double(c.scheme.t_max) << "\n";
  o << "scheme.store_stride = " << c.scheme.store_stride << "\n";
  o << "scheme.steady_tol = " << format_double(c.scheme.steady_tol) << "\n";
  o << "scheme.blowup_threshold = "
    << format_double(c.scheme.blowup_threshold) << "\n";
  o << "family.c_list = ";
  for (std::size_t i = 0; i < c.family.c_list.size(); ++i)
    o << (i ? "," : "") << format_double(c.family.c_list[i]);
  o << "\n";
  o << "heteroclinic.k_max = " << c.heteroclinic.k_max << "\n";
  o << "heteroclinic.window = " << format_double(c.heteroclinic.window.t_lo)
    << "," << format_double(c.heteroclinic.window.t_hi) << ","
    << format_double(c.heteroclinic.window.x_lo) << ","
    << format_double(c.heteroclinic.window.x_hi) << "\n";
  o << "tolerances.newton_tol = " << format_double(c.tolerances.newton_tol)
    << "\n";
  o << "tolerances.anchor_tol = " << format_double(c.tolerances.anchor_tol)
    << "\n";
  o << "tolerances.funnel_slack = "
    << format_double(c.tolerances.funnel_slack) << "\n";
  o << "output_dir = " << c.output_dir << "\n";
  o << "seed = " << c.seed << "\n";
  return o.str();
}

}  // namespace hetero
