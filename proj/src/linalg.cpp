#include "hetero/linalg.hpp"

#include <lapacke.h>

#include <cmath>
#include <stdexcept>
#include <string>

namespace hetero {

Tridiagonal Tridiagonal::zeros(int n) {
  Tridiagonal t;
  t.lower.assign(n - 1, 0.0);
  t.diag.assign(n, 0.0);
  t.upper.assign(n - 1, 0.0);
  return t;
}

static void check_info(int info, const char* what) {
  if (info != 0)
    throw std::runtime_error(std::string(what) + " failed, info=" +
                             std::to_string(info));
}

std::vector<double> solve_tridiagonal(const Tridiagonal& t,
                                      const std::vector<double>& rhs) {
  const int n = t.size();
  if (static_cast<int>(rhs.size()) != n)
    throw std::invalid_argument("solve_tridiagonal: size mismatch");
  // dgtsv overwrites everything; work on copies.
  std::vector<double> dl = t.lower, d = t.diag, du = t.upper, x = rhs;
  int info = LAPACKE_dgtsv(LAPACK_COL_MAJOR, n, 1, dl.data(), d.data(),
                           du.data(), x.data(), n);
  check_info(info, "dgtsv");
  return x;
}

TridiagonalFactor::TridiagonalFactor(const Tridiagonal& t)
    : n_(t.size()), dl_(t.lower), d_(t.diag), du_(t.upper),
      du2_(t.size() > 2 ? t.size() - 2 : 0), ipiv_(t.size()) {
  int info = LAPACKE_dgttrf(n_, dl_.data(), d_.data(), du_.data(), du2_.data(),
                            ipiv_.data());
  check_info(info, "dgttrf");
}

std::vector<double> TridiagonalFactor::solve(
    const std::vector<double>& rhs) const {
  if (static_cast<int>(rhs.size()) != n_)
    throw std::invalid_argument("TridiagonalFactor::solve: size mismatch");
  std::vector<double> x = rhs;
  int info = LAPACKE_dgttrs(LAPACK_COL_MAJOR, 'N', n_, 1, dl_.data(),
                            d_.data(), du_.data(), du2_.data(), ipiv_.data(),
                            x.data(), n_);
  check_info(info, "dgttrs");
  return x;
}

// Eigenvalues by index range via bisection (dstebz).
static std::vector<double> eigenvalues_by_index(const SymTridiagonal& t,
                                                int il, int iu) {
  const int n = t.size();
  std::vector<double> d = t.diag, e = t.off;
  std::vector<double> w(n);
  std::vector<int> iblock(n), isplit(n);
  int m = 0, nsplit = 0;
  int info = LAPACKE_dstebz('I', 'E', n, 0.0, 0.0, il, iu, 0.0, d.data(),
                            e.data(), &m, &nsplit, w.data(), iblock.data(),
                            isplit.data());
  check_info(info, "dstebz");
  w.resize(m);
  return w;
}

double largest_eigenvalue(const SymTridiagonal& t) {
  const int n = t.size();
  return eigenvalues_by_index(t, n, n).back();
}

double eigenvalue_nearest_zero(const SymTridiagonal& t) {
  auto all = eigenvalues_by_index(t, 1, t.size());
  double best = all.front();
  for (double v : all)
    if (std::abs(v) < std::abs(best)) best = v;
  return best;
}

std::vector<double> eigenvector(const SymTridiagonal& t, double lambda) {
  const int n = t.size();
  std::vector<double> d = t.diag, e = t.off;
  std::vector<double> w(1, lambda), z(n);
  std::vector<int> iblock(n, 1), isplit(n, 0), ifailv(1);
  isplit[0] = n;  // single block: the matrix is unreduced in our use
  int info = LAPACKE_dstein(LAPACK_COL_MAJOR, n, d.data(), e.data(), 1,
                            w.data(), iblock.data(), isplit.data(), z.data(),
                            n, ifailv.data());
  check_info(info, "dstein");
  return z;
}

}  // namespace hetero
