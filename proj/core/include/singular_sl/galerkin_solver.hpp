#pragma once

#include <functional>
#include <vector>

#include "singular_sl/closed_form_solver.hpp"
#include "singular_sl/sampled.hpp"

namespace singular_sl {

/// Nodes x_i = (i/n)^gamma, i = 0..n.
struct GradedMesh {
  int n = 0;
  double gamma = 1.0;
  std::vector<double> nodes;
};

/// max(1, 2/(1-2a)) for Dirichlet data, max(1, 2/(2-2a)) for Neumann data.
double default_grading(const AlphaParam& alpha, BoundaryKind bc);

/// Throws DomainError for n < 4 or gamma < 1.
GradedMesh build_mesh(int n, double gamma, const AlphaParam& alpha);
GradedMesh build_mesh(int n, const AlphaParam& alpha, BoundaryKind bc);

/// Stiffness + mass matrix of the P1 space on the full node set, with the load
/// vector. Constrained nodes are eliminated by solve_fem.
struct TridiagonalSystem {
  GradedMesh mesh;
  double alpha = 0.0;
  BoundaryKind bc = BoundaryKind::Dirichlet;
  /// Per-element exact stiffness weight int x^(2a) dx / h^2.
  std::vector<double> stiffness_weight;
  std::vector<double> sub;
  std::vector<double> main;
  std::vector<double> super;
  std::vector<double> load;
  bool zero_load = false;

  /// Index range [first_free, last_free] of unconstrained nodes.
  int first_free() const { return bc == BoundaryKind::Dirichlet ? 1 : 0; }
  int last_free() const { return mesh.n - 1; }
};

/// Throws AssemblyError for alpha <= -1/2, DomainError for Dirichlet data with
/// alpha >= 1/2.
TridiagonalSystem assemble(const BvpProblem& problem, const GradedMesh& mesh);

/// Piecewise-linear Galerkin solution.
struct FemSolution {
  GradedMesh mesh;
  double alpha = 0.0;
  BoundaryKind bc = BoundaryKind::Dirichlet;
  std::vector<double> nodal;
  /// Constant slope on each element.
  std::vector<double> slopes;
  /// x_mid^(2a) * slope on each element.
  std::vector<double> midpoint_flux;
  /// Copies of the assembled diagonals, for energy norms.
  TridiagonalSystem system;

  double value(double x) const;
  double slope(double x) const;
};

/// Thomas elimination on the free nodes. Throws NumericalBreakdown when a pivot
/// falls below 1e-300.
FemSolution solve_fem(const TridiagonalSystem& system);

/// build_mesh + assemble + solve_fem; gamma <= 0 selects default_grading.
FemSolution solve_galerkin(const BvpProblem& problem, int n, double gamma = 0.0);

/// sqrt(u^T (K + M) u) from the assembled matrices.
double energy_norm(const FemSolution& solution);

/// ||u - u_h||_X for an exact solution given with its derivative.
double energy_error(const FemSolution& solution, const std::function<double(double)>& u,
                    const std::function<double(double)>& du);
/// ||u - I_h u||_X with I_h the nodal interpolant on the solution's mesh.
double interpolation_energy_error(const FemSolution& solution, const std::function<double(double)>& u,
                                  const std::function<double(double)>& du);
/// L^2(0, 1) error against an exact solution.
double l2_error(const FemSolution& solution, const std::function<double(double)>& u);

/// X^alpha inner product of (u_h - u) with a discrete function given by nodal values.
double energy_inner(const FemSolution& solution, const std::function<double(double)>& u,
                    const std::function<double(double)>& du, const std::vector<double>& test_nodal);

/// Reduces the Galerkin solution to the common sampled form.
SampledSolution to_sampled(const FemSolution& solution, const RhsFunction& f, int depth = 60);

}  // namespace singular_sl
