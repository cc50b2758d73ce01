#include "singular_sl/sampled.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "singular_sl/errors.hpp"
#include "singular_sl/quadrature.hpp"

namespace singular_sl {
namespace {

double lagrange(const std::vector<double>& nodes, std::size_t j, double s) {
  double v = 1.0;
  for (std::size_t m = 0; m < nodes.size(); ++m) {
    if (m != j) v *= (s - nodes[m]) / (nodes[j] - nodes[m]);
  }
  return v;
}

// S[i][j] = int_{-1}^{t_i} l_j(t) dt for the Lagrange basis on the rule nodes.
std::vector<double> integration_matrix(const quad::GaussRule& rule) {
  const std::size_t n = rule.nodes.size();
  std::vector<double> s(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double half = 0.5 * (rule.nodes[i] + 1.0);
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double t = -1.0 + half * (rule.nodes[k] + 1.0);
        acc += rule.weights[k] * lagrange(rule.nodes, j, t);
      }
      s[i * n + j] = half * acc;
    }
  }
  return s;
}

int subdivisions(int level) {
  switch (level) {
    case 0: return 16;
    case 1: return 8;
    case 2: return 4;
    default: return 2;
  }
}

}  // namespace

std::string to_string(BoundaryKind bc) {
  return bc == BoundaryKind::Dirichlet ? "dirichlet" : "neumann";
}

BoundaryKind parse_boundary_kind(const std::string& text) {
  std::string lower;
  for (char ch : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (lower == "dirichlet" || lower == "d") return BoundaryKind::Dirichlet;
  if (lower == "neumann" || lower == "n") return BoundaryKind::Neumann;
  throw DomainError("unknown boundary condition '" + text + "'");
}

SampleGrid SampleGrid::dyadic(int depth, const std::vector<double>& breakpoints, int order) {
  if (depth < 1) throw DomainError("SampleGrid: depth must be >= 1");
  SampleGrid g;
  g.order_ = order;
  for (int k = depth - 1; k >= 0; --k) {
    const double hi = std::ldexp(1.0, -k);
    const double lo = 0.5 * hi;
    const int n = subdivisions(k);
    for (int s = 0; s < n; ++s) {
      Panel p;
      p.a = lo + (hi - lo) * s / n;
      p.b = s + 1 == n ? hi : lo + (hi - lo) * (s + 1) / n;
      p.level = k;
      g.panels_.push_back(p);
    }
  }
  for (double bp : breakpoints) {
    if (!(bp > g.panels_.front().a) || !(bp < 1.0)) continue;
    const std::size_t idx = g.locate(bp);
    Panel& p = g.panels_[idx];
    const double tol = 1e-12 * (p.b - p.a);
    if (bp - p.a <= tol || p.b - bp <= tol) continue;
    Panel right = p;
    right.a = bp;
    p.b = bp;
    g.panels_.insert(g.panels_.begin() + static_cast<std::ptrdiff_t>(idx) + 1, right);
  }
  g.finalize();
  return g;
}

SampleGrid SampleGrid::from_edges(const std::vector<double>& edges, int order) {
  if (edges.size() < 2 || !(edges.front() > 0.0) || std::abs(edges.back() - 1.0) > 1e-14) {
    throw DomainError("SampleGrid: edges must start above 0 and end at 1");
  }
  SampleGrid g;
  g.order_ = order;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i + 1] > edges[i])) throw DomainError("SampleGrid: edges must increase");
    Panel p;
    p.a = edges[i];
    p.b = edges[i + 1];
    const double k = -std::log2(p.b);
    p.level = std::abs(p.a - 0.5 * p.b) < 1e-14 * p.b && std::abs(k - std::round(k)) < 1e-12
                  ? static_cast<int>(std::round(k))
                  : -1;
    g.panels_.push_back(p);
  }
  g.finalize();
  return g;
}

void SampleGrid::finalize() {
  const quad::GaussRule& rule = quad::gauss_legendre(order_);
  integration_ = integration_matrix(rule);
  x_.clear();
  w_.clear();
  x_.reserve(panels_.size() * static_cast<std::size_t>(order_));
  w_.reserve(x_.capacity());
  for (Panel& p : panels_) {
    p.first = x_.size();
    const double half = 0.5 * (p.b - p.a);
    const double mid = 0.5 * (p.b + p.a);
    for (int k = 0; k < order_; ++k) {
      x_.push_back(mid + half * rule.nodes[static_cast<std::size_t>(k)]);
      w_.push_back(half * rule.weights[static_cast<std::size_t>(k)]);
    }
  }
}

double SampleGrid::integral(const std::vector<double>& values) const {
  double s = 0.0;
  for (std::size_t i = 0; i < w_.size(); ++i) s += w_[i] * values[i];
  return s;
}

std::vector<double> SampleGrid::panel_offsets(const std::vector<double>& values) const {
  std::vector<double> out(panels_.size(), 0.0);
  double running = 0.0;
  for (std::size_t p = 0; p < panels_.size(); ++p) {
    out[p] = running;
    const std::size_t f = panels_[p].first;
    for (int k = 0; k < order_; ++k) running += w_[f + k] * values[f + k];
  }
  return out;
}

std::vector<double> SampleGrid::cumulative(const std::vector<double>& values, double start) const {
  std::vector<double> out(x_.size(), 0.0);
  const std::size_t n = static_cast<std::size_t>(order_);
  double running = start;
  for (const Panel& p : panels_) {
    const double half = 0.5 * (p.b - p.a);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += integration_[i * n + j] * values[p.first + j];
      out[p.first + i] = running + half * acc;
      total += w_[p.first + i] * values[p.first + i];
    }
    running += total;
  }
  return out;
}

std::vector<double> SampleGrid::panel_offsets_right(const std::vector<double>& values) const {
  std::vector<double> out(panels_.size(), 0.0);
  double running = 0.0;
  for (std::size_t p = panels_.size(); p-- > 0;) {
    out[p] = running;
    const std::size_t f = panels_[p].first;
    for (int k = 0; k < order_; ++k) running += w_[f + k] * values[f + k];
  }
  return out;
}

std::vector<double> SampleGrid::cumulative_from_right(const std::vector<double>& values) const {
  std::vector<double> out(x_.size(), 0.0);
  const std::vector<double> right = panel_offsets_right(values);
  const std::size_t n = static_cast<std::size_t>(order_);
  for (std::size_t p = 0; p < panels_.size(); ++p) {
    const Panel& panel = panels_[p];
    const double half = 0.5 * (panel.b - panel.a);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) total += w_[panel.first + j] * values[panel.first + j];
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += integration_[i * n + j] * values[panel.first + j];
      out[panel.first + i] = right[p] + (total - half * acc);
    }
  }
  return out;
}

std::size_t SampleGrid::locate(double x) const {
  if (x < panels_.front().a || x > panels_.back().b) {
    throw DomainError("SampleGrid::locate: point outside the grid");
  }
  auto it = std::upper_bound(panels_.begin(), panels_.end(), x,
                             [](double v, const Panel& p) { return v < p.b; });
  if (it == panels_.end()) return panels_.size() - 1;
  return static_cast<std::size_t>(it - panels_.begin());
}

}  // namespace singular_sl
