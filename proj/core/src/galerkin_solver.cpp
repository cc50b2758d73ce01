#include "singular_sl/galerkin_solver.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "singular_sl/errors.hpp"
#include "singular_sl/quadrature.hpp"

namespace singular_sl {
namespace {

constexpr int kOriginLevels = 60;
constexpr double kPivotFloor = 1e-300;

struct Piece {
  double a;
  double b;
};

// Sub-intervals of [a, b] for quadrature: split at rhs breakpoints, and refined
// dyadically toward 0 when the element touches the origin.
std::vector<Piece> pieces(double a, double b, const std::vector<double>& breakpoints, bool dyadic) {
  std::vector<double> edges{a};
  if (a == 0.0 && dyadic) {
    for (int k = kOriginLevels; k >= 1; --k) edges.push_back(std::ldexp(b, -k));
  }
  for (double bp : breakpoints) {
    if (bp > edges.back() && bp < b) edges.push_back(bp);
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::vector<Piece> out;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (edges[i] == 0.0 && dyadic) continue;  // closed by a tail estimate
    out.push_back({edges[i], edges[i + 1]});
  }
  return out;
}

template <typename Fn>
double integrate_pieces(const std::vector<Piece>& ps, const quad::GaussRule& rule, Fn&& fn) {
  double acc = 0.0;
  for (const Piece& p : ps) {
    const double half = 0.5 * (p.b - p.a);
    const double mid = 0.5 * (p.b + p.a);
    double s = 0.0;
    for (int k = 0; k < rule.size(); ++k) {
      s += rule.weights[static_cast<std::size_t>(k)] * fn(mid + half * rule.nodes[static_cast<std::size_t>(k)]);
    }
    acc += half * s;
  }
  return acc;
}

// Element-wise int x^(2a) d'(x)^2 + d(x)^2 with first-element dyadic refinement.
double x_norm_squared(const FemSolution& sol, const std::function<double(int, double)>& value_diff,
                      const std::function<double(int, double)>& slope_diff) {
  const quad::GaussRule& rule = quad::gauss_legendre(20);
  const std::vector<double>& x = sol.mesh.nodes;
  double total = 0.0;
  for (int e = 0; e < sol.mesh.n; ++e) {
    const double a = x[static_cast<std::size_t>(e)];
    const double b = x[static_cast<std::size_t>(e) + 1];
    const auto integrand = [&](double t) {
      const double dv = value_diff(e, t);
      const double ds = slope_diff(e, t);
      return std::pow(t, 2.0 * sol.alpha) * ds * ds + dv * dv;
    };
    const std::vector<Piece> ps = pieces(a, b, {}, e == 0);
    total += integrate_pieces(ps, rule, integrand);
    if (e == 0) total += power_law_tail(integrand, ps.front().a);
  }
  return total;
}

}  // namespace

double default_grading(const AlphaParam& alpha, BoundaryKind bc) {
  const double a = alpha.value();
  const double g = bc == BoundaryKind::Dirichlet ? 2.0 / (1.0 - 2.0 * a) : 2.0 / (2.0 - 2.0 * a);
  return std::max(1.0, g);
}

GradedMesh build_mesh(int n, double gamma, const AlphaParam& /*alpha*/) {
  if (n < 4) throw DomainError("build_mesh: need n >= 4");
  if (!(gamma >= 1.0) || !std::isfinite(gamma)) throw DomainError("build_mesh: need gamma >= 1");
  GradedMesh m;
  m.n = n;
  m.gamma = gamma;
  m.nodes.resize(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    m.nodes[static_cast<std::size_t>(i)] = std::pow(static_cast<double>(i) / n, gamma);
  }
  m.nodes.front() = 0.0;
  m.nodes.back() = 1.0;
  return m;
}

GradedMesh build_mesh(int n, const AlphaParam& alpha, BoundaryKind bc) {
  return build_mesh(n, default_grading(alpha, bc), alpha);
}

TridiagonalSystem assemble(const BvpProblem& problem, const GradedMesh& mesh) {
  const double a = problem.alpha().value();
  if (!(a > -0.5)) {
    throw AssemblyError("assemble: the P1 discretisation needs alpha > -1/2");
  }
  TridiagonalSystem sys;
  sys.mesh = mesh;
  sys.alpha = a;
  sys.bc = problem.bc();
  const std::size_t nn = mesh.nodes.size();
  sys.sub.assign(nn, 0.0);
  sys.main.assign(nn, 0.0);
  sys.super.assign(nn, 0.0);
  sys.load.assign(nn, 0.0);
  sys.stiffness_weight.assign(nn - 1, 0.0);

  const RhsFunction& f = problem.f();
  sys.zero_load = f.is_zero();
  const bool singular = f.blowup_exponent() > 0.0 || f.log_singular();
  const quad::GaussRule& rule = quad::gauss_legendre(5);
  const double p = 2.0 * a + 1.0;

  for (std::size_t e = 0; e + 1 < nn; ++e) {
    const double xa = mesh.nodes[e];
    const double xb = mesh.nodes[e + 1];
    const double h = xb - xa;
    const double k = (std::pow(xb, p) - std::pow(xa, p)) / (p * h * h);
    sys.stiffness_weight[e] = k;
    const double m_diag = h / 3.0;
    const double m_off = h / 6.0;
    sys.main[e] += k + m_diag;
    sys.main[e + 1] += k + m_diag;
    sys.super[e] += -k + m_off;
    sys.sub[e + 1] += -k + m_off;

    if (sys.zero_load) continue;
    const std::vector<Piece> ps = pieces(xa, xb, f.breakpoints(), e == 0 && singular);
    const auto left = [&](double t) { return f(t) * (xb - t) / h; };
    const auto right = [&](double t) { return f(t) * (t - xa) / h; };
    double bl = integrate_pieces(ps, rule, left);
    double br = integrate_pieces(ps, rule, right);
    if (e == 0 && singular) {
      const double eps = ps.front().a;
      bl += f.has_primitive() ? f.primitive(eps) : power_law_tail(left, eps);
      br += power_law_tail(right, eps);
    }
    sys.load[e] += bl;
    sys.load[e + 1] += br;
  }
  return sys;
}

FemSolution solve_fem(const TridiagonalSystem& system) {
  const int lo = system.first_free();
  const int hi = system.last_free();
  const std::size_t nn = system.mesh.nodes.size();
  FemSolution sol;
  sol.mesh = system.mesh;
  sol.alpha = system.alpha;
  sol.bc = system.bc;
  sol.system = system;
  sol.nodal.assign(nn, 0.0);

  if (!system.zero_load) {
    const std::size_t m = static_cast<std::size_t>(hi - lo + 1);
    std::vector<double> c(m, 0.0);
    std::vector<double> d(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t g = static_cast<std::size_t>(lo) + i;
      const double sub = i == 0 ? 0.0 : system.sub[g];
      const double pivot = system.main[g] - (i == 0 ? 0.0 : sub * c[i - 1]);
      if (!(std::abs(pivot) >= kPivotFloor)) {
        throw NumericalBreakdown("solve_fem: vanishing pivot in tridiagonal elimination");
      }
      c[i] = i + 1 < m ? system.super[g] / pivot : 0.0;
      d[i] = (system.load[g] - (i == 0 ? 0.0 : sub * d[i - 1])) / pivot;
    }
    for (std::size_t i = m; i-- > 0;) {
      const double next = i + 1 < m ? sol.nodal[static_cast<std::size_t>(lo) + i + 1] : 0.0;
      sol.nodal[static_cast<std::size_t>(lo) + i] = d[i] - c[i] * next;
    }
  } else {
    // The assembled matrix is still swept so that breakdown is reported.
    double pivot = system.main[static_cast<std::size_t>(lo)];
    for (int i = lo; i <= hi; ++i) {
      const std::size_t g = static_cast<std::size_t>(i);
      if (i > lo) pivot = system.main[g] - system.sub[g] * system.super[g - 1] / pivot;
      if (!(std::abs(pivot) >= kPivotFloor)) {
        throw NumericalBreakdown("solve_fem: vanishing pivot in tridiagonal elimination");
      }
    }
  }

  sol.slopes.resize(nn - 1);
  sol.midpoint_flux.resize(nn - 1);
  for (std::size_t e = 0; e + 1 < nn; ++e) {
    const double h = sol.mesh.nodes[e + 1] - sol.mesh.nodes[e];
    sol.slopes[e] = (sol.nodal[e + 1] - sol.nodal[e]) / h;
    const double mid = 0.5 * (sol.mesh.nodes[e + 1] + sol.mesh.nodes[e]);
    sol.midpoint_flux[e] = std::pow(mid, 2.0 * sol.alpha) * sol.slopes[e];
  }
  return sol;
}

FemSolution solve_galerkin(const BvpProblem& problem, int n, double gamma) {
  const double g = gamma > 0.0 ? gamma : default_grading(problem.alpha(), problem.bc());
  return solve_fem(assemble(problem, build_mesh(n, g, problem.alpha())));
}

namespace {

std::size_t element_of(const GradedMesh& mesh, double x) {
  auto it = std::upper_bound(mesh.nodes.begin(), mesh.nodes.end(), x);
  if (it == mesh.nodes.begin()) return 0;
  const std::size_t e = static_cast<std::size_t>(it - mesh.nodes.begin()) - 1;
  return std::min(e, mesh.nodes.size() - 2);
}

}  // namespace

double FemSolution::value(double x) const {
  const std::size_t e = element_of(mesh, x);
  return nodal[e] + slopes[e] * (x - mesh.nodes[e]);
}

double FemSolution::slope(double x) const { return slopes[element_of(mesh, x)]; }

double energy_norm(const FemSolution& solution) {
  const TridiagonalSystem& s = solution.system;
  const std::vector<double>& u = solution.nodal;
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    acc += s.main[i] * u[i] * u[i];
    if (i + 1 < u.size()) acc += 2.0 * s.super[i] * u[i] * u[i + 1];
  }
  return std::sqrt(std::max(acc, 0.0));
}

double energy_error(const FemSolution& solution, const std::function<double(double)>& u,
                    const std::function<double(double)>& du) {
  const auto& x = solution.mesh.nodes;
  const auto value_diff = [&](int e, double t) {
    const std::size_t i = static_cast<std::size_t>(e);
    return u(t) - (solution.nodal[i] + solution.slopes[i] * (t - x[i]));
  };
  const auto slope_diff = [&](int e, double t) {
    return du(t) - solution.slopes[static_cast<std::size_t>(e)];
  };
  return std::sqrt(x_norm_squared(solution, value_diff, slope_diff));
}

double interpolation_energy_error(const FemSolution& solution, const std::function<double(double)>& u,
                                  const std::function<double(double)>& du) {
  const auto& x = solution.mesh.nodes;
  std::vector<double> nodal(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) nodal[i] = u(x[i]);
  const auto value_diff = [&](int e, double t) {
    const std::size_t i = static_cast<std::size_t>(e);
    const double s = (nodal[i + 1] - nodal[i]) / (x[i + 1] - x[i]);
    return u(t) - (nodal[i] + s * (t - x[i]));
  };
  const auto slope_diff = [&](int e, double t) {
    const std::size_t i = static_cast<std::size_t>(e);
    return du(t) - (nodal[i + 1] - nodal[i]) / (x[i + 1] - x[i]);
  };
  return std::sqrt(x_norm_squared(solution, value_diff, slope_diff));
}

double l2_error(const FemSolution& solution, const std::function<double(double)>& u) {
  const auto& x = solution.mesh.nodes;
  const quad::GaussRule& rule = quad::gauss_legendre(20);
  double total = 0.0;
  for (int e = 0; e < solution.mesh.n; ++e) {
    const std::size_t i = static_cast<std::size_t>(e);
    const auto sq = [&](double t) {
      const double d = u(t) - (solution.nodal[i] + solution.slopes[i] * (t - x[i]));
      return d * d;
    };
    const std::vector<Piece> ps = pieces(x[i], x[i + 1], {}, e == 0);
    total += integrate_pieces(ps, rule, sq);
    if (e == 0) total += power_law_tail(sq, ps.front().a);
  }
  return std::sqrt(total);
}

double energy_inner(const FemSolution& solution, const std::function<double(double)>& u,
                    const std::function<double(double)>& du, const std::vector<double>& test_nodal) {
  const auto& x = solution.mesh.nodes;
  const quad::GaussRule& rule = quad::gauss_legendre(20);
  double total = 0.0;
  for (int e = 0; e < solution.mesh.n; ++e) {
    const std::size_t i = static_cast<std::size_t>(e);
    const double h = x[i + 1] - x[i];
    const double ts = (test_nodal[i + 1] - test_nodal[i]) / h;
    const auto integrand = [&](double t) {
      const double dv = solution.nodal[i] + solution.slopes[i] * (t - x[i]) - u(t);
      const double ds = solution.slopes[i] - du(t);
      const double tv = test_nodal[i] + ts * (t - x[i]);
      return std::pow(t, 2.0 * solution.alpha) * ds * ts + dv * tv;
    };
    const std::vector<Piece> ps = pieces(x[i], x[i + 1], {}, e == 0);
    total += integrate_pieces(ps, rule, integrand);
    if (e == 0) total += power_law_tail(integrand, ps.front().a);
  }
  return total;
}

SampledSolution to_sampled(const FemSolution& solution, const RhsFunction& f, int depth) {
  const auto& nodes = solution.mesh.nodes;
  std::vector<double> edges;
  for (int k = depth; k >= 1; --k) edges.push_back(std::ldexp(nodes[1], -k));
  edges.insert(edges.end(), nodes.begin() + 1, nodes.end());
  for (double bp : f.breakpoints()) edges.push_back(bp);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](double p, double q) { return std::abs(p - q) <= 1e-14 * std::max(p, q); }),
              edges.end());

  SampledSolution out;
  out.alpha = solution.alpha;
  out.bc = solution.bc;
  out.grid = SampleGrid::from_edges(edges);
  const std::size_t n = out.grid.size();
  out.u.resize(n);
  out.du.resize(n);
  out.flux.resize(n);
  out.f.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = out.grid.x()[i];
    out.u[i] = solution.value(x);
    out.du[i] = solution.slope(x);
    out.flux[i] = std::pow(x, 2.0 * solution.alpha) * out.du[i];
    out.f[i] = f.is_zero() ? 0.0 : f(x);
  }
  out.engine = SampledSolution::Engine::Galerkin;
  out.u_origin = solution.nodal.front();
  out.flux_origin = solution.bc == BoundaryKind::Neumann ? 0.0 : solution.midpoint_flux.front();
  auto shared = std::make_shared<FemSolution>(solution);
  out.value = [shared](double x) { return shared->value(x); };
  out.flux_at = [shared](double x) { return std::pow(x, 2.0 * shared->alpha) * shared->slope(x); };
  return out;
}

}  // namespace singular_sl
