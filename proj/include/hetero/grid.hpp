#ifndef HETERO_GRID_HPP
#define HETERO_GRID_HPP

#include <memory>
#include <string>
#include <vector>

namespace hetero {

// Uniform symmetric grid on [-L, L]. N is odd so that x = 0 is a node and
// the grid is mirror symmetric: x[i] == -x[N-1-i] bitwise.
class SpatialGrid {
public:
  SpatialGrid(double half_width, int node_count);

  double half_width() const { return half_width_; }
  int node_count() const { return node_count_; }
  double spacing() const { return spacing_; }
  double node(int i) const { return nodes_[i]; }
  const std::vector<double>& nodes() const { return nodes_; }
  int center_index() const { return (node_count_ - 1) / 2; }

  // Index of the node nearest to x (clamped to the grid).
  int nearest_index(double x) const;

  bool same_as(const SpatialGrid& other) const;

private:
  double half_width_;
  int node_count_;
  double spacing_;
  std::vector<double> nodes_;
};

using GridPtr = std::shared_ptr<const SpatialGrid>;

GridPtr make_grid(double half_width, int node_count);

// Real-valued field sampled at the grid nodes.
struct GridFunction {
  GridPtr grid;
  std::vector<double> values;

  GridFunction() = default;
  GridFunction(GridPtr g, std::vector<double> v);
  explicit GridFunction(GridPtr g);  // zero-initialized

  int size() const { return static_cast<int>(values.size()); }
  double& operator[](int i) { return values[i]; }
  double operator[](int i) const { return values[i]; }
};

// Samples f at every node.
template <class F>
GridFunction sample(const GridPtr& grid, F&& f) {
  GridFunction out(grid);
  for (int i = 0; i < out.size(); ++i) out.values[i] = f(grid->node(i));
  return out;
}

// Central second difference in the interior, one-sided second-order
// four-point stencils at the two boundary nodes.
GridFunction second_difference(const GridFunction& f);

// Central first difference in the interior, one-sided second-order
// three-point stencils at the two boundary nodes.
GridFunction first_difference(const GridFunction& f);

double trapezoid_integral(const GridFunction& f);
double sup_norm(const GridFunction& f);
double l1_norm(const GridFunction& f);

// max over nodes of |f - g| (grids must match).
double sup_distance(const GridFunction& f, const GridFunction& g);

// Elementwise helpers; grids must match.
GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(double s, const GridFunction& a);

void require_same_grid(const GridFunction& a, const GridFunction& b,
                       const char* where = "grid functions");
void require_finite(const GridFunction& f, const char* where = "field");

// CSV with header "x,value", one row per node, 17 significant digits.
void write_csv(const GridFunction& f, const std::string& path);
GridFunction read_csv(const std::string& path);

}  // namespace hetero

#endif
