#include "hetero/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hetero {

SpatialGrid::SpatialGrid(double half_width, int node_count)
    : half_width_(half_width), node_count_(node_count) {
  if (!(half_width > 0) || !std::isfinite(half_width))
    throw std::invalid_argument("SpatialGrid: half_width must be positive");
  if (node_count < 3 || node_count % 2 == 0)
    throw std::invalid_argument("SpatialGrid: node_count must be odd and >= 3");
  const int mid = (node_count - 1) / 2;
  spacing_ = half_width / mid;
  nodes_.resize(node_count);
  // Mirror construction keeps x=0 and +-L exact and the grid bitwise
  // symmetric: nodes_[i] == -nodes_[node_count-1-i].
  nodes_[mid] = 0.0;
  nodes_[0] = -half_width;
  nodes_[node_count - 1] = half_width;
  for (int i = 1; i < mid; ++i) {
    nodes_[i] = -(double)(mid - i) * spacing_;
    nodes_[node_count - 1 - i] = (double)(mid - i) * spacing_;
  }
}

int SpatialGrid::nearest_index(double x) const {
  int i = static_cast<int>(std::lround((x + half_width_) / spacing_));
  return std::clamp(i, 0, node_count_ - 1);
}

bool SpatialGrid::same_as(const SpatialGrid& other) const {
  return node_count_ == other.node_count_ && half_width_ == other.half_width_;
}

GridPtr make_grid(double half_width, int node_count) {
  return std::make_shared<SpatialGrid>(half_width, node_count);
}

GridFunction::GridFunction(GridPtr g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (!grid) throw std::invalid_argument("GridFunction: null grid");
  if (static_cast<int>(values.size()) != grid->node_count())
    throw std::invalid_argument("GridFunction: values length != node count");
}

GridFunction::GridFunction(GridPtr g) : grid(std::move(g)) {
  if (!grid) throw std::invalid_argument("GridFunction: null grid");
  values.assign(grid->node_count(), 0.0);
}

void require_same_grid(const GridFunction& a, const GridFunction& b,
                       const char* where) {
  if (!a.grid || !b.grid || !a.grid->same_as(*b.grid))
    throw std::invalid_argument(std::string(where) + ": grids do not match");
}

void require_finite(const GridFunction& f, const char* where) {
  for (int i = 0; i < f.size(); ++i) {
    if (!std::isfinite(f.values[i])) {
      std::ostringstream msg;
      msg << where << ": non-finite value at node " << i << " (x = "
          << f.grid->node(i) << ")";
      throw std::invalid_argument(msg.str());
    }
  }
}

GridFunction second_difference(const GridFunction& f) {
  require_finite(f, "second_difference");
  const int n = f.size();
  if (n < 4)
    throw std::invalid_argument("second_difference: need at least 4 nodes");
  const double h2 = f.grid->spacing() * f.grid->spacing();
  GridFunction out(f.grid);
  for (int i = 1; i + 1 < n; ++i)
    out.values[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) / h2;
  out.values[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
  out.values[n - 1] =
      (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
  return out;
}

GridFunction first_difference(const GridFunction& f) {
  require_finite(f, "first_difference");
  const int n = f.size();
  const double h = f.grid->spacing();
  GridFunction out(f.grid);
  for (int i = 1; i + 1 < n; ++i)
    out.values[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  out.values[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  out.values[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return out;
}

double trapezoid_integral(const GridFunction& f) {
  require_finite(f, "trapezoid_integral");
  const int n = f.size();
  double s = 0.5 * (f[0] + f[n - 1]);
  for (int i = 1; i + 1 < n; ++i) s += f[i];
  return s * f.grid->spacing();
}

double sup_norm(const GridFunction& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

double l1_norm(const GridFunction& f) {
  GridFunction a(f.grid);
  for (int i = 0; i < f.size(); ++i) a.values[i] = std::abs(f[i]);
  return trapezoid_integral(a);
}

double sup_distance(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g, "sup_distance");
  double m = 0.0;
  for (int i = 0; i < f.size(); ++i)
    m = std::max(m, std::abs(f[i] - g[i]));
  return m;
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b, "operator+");
  GridFunction out(a.grid);
  for (int i = 0; i < a.size(); ++i) out.values[i] = a[i] + b[i];
  return out;
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b, "operator-");
  GridFunction out(a.grid);
  for (int i = 0; i < a.size(); ++i) out.values[i] = a[i] - b[i];
  return out;
}

GridFunction operator*(double s, const GridFunction& a) {
  GridFunction out(a.grid);
  for (int i = 0; i < a.size(); ++i) out.values[i] = s * a[i];
  return out;
}

void write_csv(const GridFunction& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_csv: cannot open " + path);
  os << "x,value\n";
  char buf[80];
  for (int i = 0; i < f.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", f.grid->node(i),
                  f.values[i]);
    os << buf;
  }
}

GridFunction read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_csv: cannot open " + path);
  std::string line;
  std::getline(is, line);  // header
  std::vector<double> xs, vs;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("read_csv: malformed row in " + path);
    xs.push_back(std::stod(line.substr(0, comma)));
    vs.push_back(std::stod(line.substr(comma + 1)));
  }
  const int n = static_cast<int>(xs.size());
  if (n < 3) throw std::runtime_error("read_csv: too few rows in " + path);
  auto grid = make_grid(std::max(std::abs(xs.front()), std::abs(xs.back())), n);
  return GridFunction(grid, std::move(vs));
}

}  // namespace hetero
