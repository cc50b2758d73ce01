#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace singular_sl {

enum class BoundaryKind { Dirichlet, Neumann };

std::string to_string(BoundaryKind bc);
/// "dirichlet" / "neumann" (case-insensitive); throws DomainError otherwise.
BoundaryKind parse_boundary_kind(const std::string& text);

/// One Gauss-Legendre panel of a SampleGrid.
struct Panel {
  double a = 0.0;
  double b = 0.0;
  /// Dyadic level k for panels inside [2^-k-1, 2^-k]; -1 when not dyadic.
  int level = -1;
  /// Index of the panel's first node in the grid arrays.
  std::size_t first = 0;
};

/// Composite Gauss-Legendre grid on [lower, 1], refined geometrically toward 0.
class SampleGrid {
 public:
  /// Dyadic levels [2^-k-1, 2^-k], k < depth, subdivided 16/8/4/2/2/... times,
  /// with every breakpoint in (lower, 1) made a panel edge.
  static SampleGrid dyadic(int depth, const std::vector<double>& breakpoints = {}, int order = 12);
  /// Panels between consecutive edges (strictly increasing, edges.back() == 1).
  static SampleGrid from_edges(const std::vector<double>& edges, int order = 12);

  int order() const { return order_; }
  std::size_t size() const { return x_.size(); }
  double lower() const { return panels_.front().a; }
  const std::vector<Panel>& panels() const { return panels_; }
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& weights() const { return w_; }

  /// Sum of weights * values.
  double integral(const std::vector<double>& values) const;
  /// start + int_lower^{x_i} of the panel-wise interpolant of `values`.
  std::vector<double> cumulative(const std::vector<double>& values, double start = 0.0) const;
  /// int_{x_i}^1 of the panel-wise interpolant of `values`, accumulated from
  /// the right so that integrals growing toward 0 keep their precision.
  std::vector<double> cumulative_from_right(const std::vector<double>& values) const;
  /// int_lower^{panel.a} for each panel (left-edge running totals).
  std::vector<double> panel_offsets(const std::vector<double>& values) const;
  /// int_{panel.b}^1 for each panel (right-edge running totals).
  std::vector<double> panel_offsets_right(const std::vector<double>& values) const;
  /// Index of the panel containing x; x must lie in [lower, 1].
  std::size_t locate(double x) const;

 private:
  void finalize();

  int order_ = 12;
  std::vector<Panel> panels_;
  std::vector<double> x_;
  std::vector<double> w_;
  std::vector<double> integration_;  // order x order, row-major
};

/// A solution from either engine, reduced to values on a SampleGrid.
struct SampledSolution {
  enum class Engine { ClosedForm, Galerkin };

  Engine engine = Engine::ClosedForm;
  double alpha = 0.0;
  BoundaryKind bc = BoundaryKind::Dirichlet;
  SampleGrid grid;
  std::vector<double> u;
  std::vector<double> du;
  /// x^(2 alpha) u'.
  std::vector<double> flux;
  std::vector<double> f;
  /// lim u(x) and lim x^(2 alpha) u'(x) at 0 (NaN when not available).
  double u_origin = 0.0;
  double flux_origin = 0.0;
  /// u at an arbitrary point of (0, 1].
  std::function<double(double)> value;
  /// x^(2 alpha) u'(x) at an arbitrary point of (0, 1].
  std::function<double(double)> flux_at;
};

}  // namespace singular_sl
