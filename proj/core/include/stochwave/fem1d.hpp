#pragma once

#include <functional>
#include <span>
#include <vector>

namespace stochwave::fem {

using NodalVec = std::vector<double>;

/// Uniform partition of (0,1) with homogeneous Dirichlet boundary.
/// Unknowns live on the n_cells-1 interior nodes x_i = i*h, h = 1/n_cells.
class Grid1D {
 public:
  explicit Grid1D(int n_cells);

  int n_cells() const noexcept { return n_cells_; }
  int n_interior() const noexcept { return n_cells_ - 1; }
  double h() const noexcept { return h_; }
  /// x-coordinate of interior node i, i in [0, n_interior()).
  double node(int i) const noexcept { return h_ * static_cast<double>(i + 1); }

 private:
  int n_cells_;
  double h_;
};

/// Tridiagonal matrix stored by bands (sub/sup have length dim()-1).
struct TriDiag {
  std::vector<double> sub;
  std::vector<double> diag;
  std::vector<double> sup;

  int dim() const noexcept { return static_cast<int>(diag.size()); }
};

/// Consistent P1 mass matrix: diag 4h/6, off-diagonals h/6. No lumping.
TriDiag assemble_mass(const Grid1D& grid);

/// P1 stiffness matrix: diag 2/h, off-diagonals -1/h.
TriDiag assemble_stiffness(const Grid1D& grid);

/// y = A x.
NodalVec apply(const TriDiag& a, std::span<const double> x);

/// u^T A u.
double quad_form(const TriDiag& a, std::span<const double> u);

/// LU factorization without pivoting, valid for the diagonally dominant /
/// SPD systems assembled here. Factor once, then solve many right-hand
/// sides in O(n); solves are const and safe to run concurrently.
class TriDiagSolver {
 public:
  explicit TriDiagSolver(const TriDiag& a);

  int dim() const noexcept { return static_cast<int>(diag_.size()); }
  void solve(std::span<const double> rhs, std::span<double> x) const;
  NodalVec solve(std::span<const double> rhs) const;

 private:
  std::vector<double> lower_;  // multipliers
  std::vector<double> diag_;   // pivots
  std::vector<double> upper_;  // unchanged super-diagonal
};

/// One-shot factor + solve.
NodalVec solve_tridiag(const TriDiag& a, std::span<const double> rhs);

/// sqrt(u^T M u) for the mass matrix M of the same grid.
double l2_norm(std::span<const double> u, const TriDiag& mass);

/// sqrt(u^T K u) for the stiffness matrix K of the same grid.
double h1_seminorm(std::span<const double> u, const TriDiag& stiffness);

/// Nodal interpolation: values[i] = f(x_i). Throws on non-finite values.
NodalVec interpolate(const std::function<double(double)>& f, const Grid1D& grid);

}  // namespace stochwave::fem
