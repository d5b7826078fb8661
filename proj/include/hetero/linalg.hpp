#ifndef HETERO_LINALG_HPP
#define HETERO_LINALG_HPP

#include <vector>

namespace hetero {

// General tridiagonal system, LAPACK storage: lower/upper have n-1 entries.
struct Tridiagonal {
  std::vector<double> lower, diag, upper;

  int size() const { return static_cast<int>(diag.size()); }
  static Tridiagonal zeros(int n);
};

// One-shot solve via dgtsv (partial pivoting). Inputs are preserved.
std::vector<double> solve_tridiagonal(const Tridiagonal& t,
                                      const std::vector<double>& rhs);

// LU factorization of a tridiagonal matrix (dgttrf), reusable across many
// right-hand sides (dgttrs). Used by the time stepper, whose matrix is
// constant along a trajectory.
class TridiagonalFactor {
public:
  explicit TridiagonalFactor(const Tridiagonal& t);
  std::vector<double> solve(const std::vector<double>& rhs) const;
  int size() const { return n_; }

private:
  int n_;
  std::vector<double> dl_, d_, du_, du2_;
  std::vector<int> ipiv_;
};

// Symmetric tridiagonal eigenproblem helpers (dstebz/dstein).
struct SymTridiagonal {
  std::vector<double> diag, off;  // off has n-1 entries
  int size() const { return static_cast<int>(diag.size()); }
};

// Largest eigenvalue.
double largest_eigenvalue(const SymTridiagonal& t);

// Eigenvalue of smallest magnitude.
double eigenvalue_nearest_zero(const SymTridiagonal& t);

// Eigenvector for a computed eigenvalue (inverse iteration).
std::vector<double> eigenvector(const SymTridiagonal& t, double lambda);

}  // namespace hetero

#endif
