#include "stochwave/fem1d.hpp"

#include <cmath>
#include <string>

#include "stochwave/errors.hpp"

namespace stochwave::fem {

namespace {

void require_dim(const TriDiag& a, std::size_t n, const char* what) {
  if (static_cast<std::size_t>(a.dim()) != n) {
    throw DimensionError(std::string(what) + ": matrix dimension " +
                         std::to_string(a.dim()) + " does not match vector length " +
                         std::to_string(n));
  }
  if (a.sub.size() + 1 != a.diag.size() || a.sup.size() + 1 != a.diag.size()) {
    throw DimensionError(std::string(what) + ": malformed tridiagonal bands");
  }
}

}  // namespace

Grid1D::Grid1D(int n_cells) : n_cells_(n_cells), h_(1.0 / n_cells) {
  if (n_cells < 2) {
    throw ConfigError("Grid1D needs n_cells >= 2, got " + std::to_string(n_cells));
  }
}

TriDiag assemble_mass(const Grid1D& grid) {
  int n = grid.n_interior();
  double h = grid.h();
  TriDiag m;
  m.diag.assign(n, 4.0 * h / 6.0);
  m.sub.assign(n - 1, h / 6.0);
  m.sup.assign(n - 1, h / 6.0);
  return m;
}

TriDiag assemble_stiffness(const Grid1D& grid) {
  int n = grid.n_interior();
  double h = grid.h();
  TriDiag k;
  k.diag.assign(n, 2.0 / h);
  k.sub.assign(n - 1, -1.0 / h);
  k.sup.assign(n - 1, -1.0 / h);
  return k;
}

NodalVec apply(const TriDiag& a, std::span<const double> x) {
  require_dim(a, x.size(), "apply");
  int n = a.dim();
  NodalVec y(n);
  for (int i = 0; i < n; ++i) {
    double s = a.diag[i] * x[i];
    if (i > 0) s += a.sub[i - 1] * x[i - 1];
    if (i + 1 < n) s += a.sup[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

double quad_form(const TriDiag& a, std::span<const double> u) {
  require_dim(a, u.size(), "quad_form");
  int n = a.dim();
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a.diag[i] * u[i] * u[i];
  double cross = 0.0;
  for (int i = 0; i + 1 < n; ++i) cross += (a.sub[i] + a.sup[i]) * u[i] * u[i + 1];
  return s + cross;
}

TriDiagSolver::TriDiagSolver(const TriDiag& a) {
  require_dim(a, a.diag.size(), "TriDiagSolver");
  int n = a.dim();
  if (n == 0) throw DimensionError("TriDiagSolver: empty matrix");
  lower_.assign(n - 1, 0.0);
  diag_ = a.diag;
  upper_ = a.sup;
  for (int i = 0; i + 1 < n; ++i) {
    if (diag_[i] == 0.0 || !std::isfinite(diag_[i])) {
      throw SingularMatrixError("zero pivot at row " + std::to_string(i));
    }
    lower_[i] = a.sub[i] / diag_[i];
    diag_[i + 1] -= lower_[i] * upper_[i];
  }
  if (diag_[n - 1] == 0.0 || !std::isfinite(diag_[n - 1])) {
    throw SingularMatrixError("zero pivot at row " + std::to_string(n - 1));
  }
}

void TriDiagSolver::solve(std::span<const double> rhs, std::span<double> x) const {
  int n = dim();
  if (rhs.size() != static_cast<std::size_t>(n) ||
      x.size() != static_cast<std::size_t>(n)) {
    throw DimensionError("TriDiagSolver::solve: size mismatch");
  }
  // forward substitution, L y = rhs
  x[0] = rhs[0];
  for (int i = 1; i < n; ++i) x[i] = rhs[i] - lower_[i - 1] * x[i - 1];
  // back substitution, U x = y
  x[n - 1] /= diag_[n - 1];
  for (int i = n - 2; i >= 0; --i) x[i] = (x[i] - upper_[i] * x[i + 1]) / diag_[i];
}

NodalVec TriDiagSolver::solve(std::span<const double> rhs) const {
  NodalVec x(rhs.size());
  solve(rhs, x);
  return x;
}

NodalVec solve_tridiag(const TriDiag& a, std::span<const double> rhs) {
  return TriDiagSolver(a).solve(rhs);
}

double l2_norm(std::span<const double> u, const TriDiag& mass) {
  double q = quad_form(mass, u);
  return q > 0.0 ? std::sqrt(q) : 0.0;
}

double h1_seminorm(std::span<const double> u, const TriDiag& stiffness) {
  double q = quad_form(stiffness, u);
  return q > 0.0 ? std::sqrt(q) : 0.0;
}

NodalVec interpolate(const std::function<double(double)>& f, const Grid1D& grid) {
  int n = grid.n_interior();
  NodalVec values(n);
  for (int i = 0; i < n; ++i) {
    double x = grid.node(i);
    double fx = f(x);
    if (!std::isfinite(fx)) {
      throw Error("interpolate: non-finite value at node x = " + std::to_string(x));
    }
    values[i] = fx;
  }
  return values;
}

}  // namespace stochwave::fem
