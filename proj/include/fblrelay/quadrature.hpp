#pragma once

// Expectations over a unit-mean exponential variable, E[f(Z)] = ∫ e^-z f(z) dz.
//
// Smooth integrands use Gauss-Laguerre, whose weight is exactly e^-z. Integrands
// with a sharp step (the Q-function transition of a block-error probability at
// large blocklength) use adaptive Gauss-Legendre panels on [0, upper], graded
// around the step.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fblrelay/errors.hpp"

namespace fblrelay::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point rule for ∫_0^∞ e^-z f(z) dz. Cached; safe to call concurrently.
const Rule& gauss_laguerre(std::size_t n);

/// n-point rule on [-1, 1]. Cached; safe to call concurrently.
const Rule& gauss_legendre(std::size_t n);

/// Location and width (both in z) of a step in the integrand.
struct Transition {
  double center = 0.0;
  double width = 0.0;
};

struct Options {
  std::size_t laguerre_nodes = 64;
  std::size_t panel_nodes = 10;
  double abs_tol = 1e-10;
  double upper = 40.0;            ///< truncation of the panel rule; e^-40 < 1e-17
  double sharp_width = 0.5;       ///< transitions narrower than this use panels
  std::size_t max_evals = 2'000'000;

  Options doubled() const {
    Options o = *this;
    o.laguerre_nodes *= 2;
    o.panel_nodes *= 2;
    return o;
  }
};

/// Panel boundaries on [0, upper]: a coarse geometric base grid refined
/// geometrically on both sides of the transition.
std::vector<double> graded_breakpoints(const std::optional<Transition>& step, double upper);

namespace detail {

template <class G>
double panel(G& g, const Rule& rule, double a, double b, std::size_t& evals) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    s += rule.weights[i] * g(mid + half * rule.nodes[i]);
  }
  evals += rule.nodes.size();
  return s * half;
}

}  // namespace detail

/// Adaptive bisection of Gauss-Legendre panels for ∫ g over [breaks.front(), breaks.back()].
/// A panel is accepted when it agrees with the sum of its halves within its
/// share of abs_tol. Throws NonConvergence past max_evals.
template <class G>
double integrate_panels(G&& g, const std::vector<double>& breaks, const Options& opt) {
  const Rule& rule = gauss_legendre(opt.panel_nodes);
  const double length = breaks.back() - breaks.front();
  std::size_t evals = 0;

  struct Pending {
    double a, b, value;
  };
  std::vector<Pending> stack;
  stack.reserve(64);
  for (std::size_t i = breaks.size() - 1; i > 0; --i) {
    const double a = breaks[i - 1];
    const double b = breaks[i];
    stack.push_back({a, b, detail::panel(g, rule, a, b, evals)});
  }

  double total = 0.0;
  while (!stack.empty()) {
    const Pending p = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (p.a + p.b);
    const double left = detail::panel(g, rule, p.a, mid, evals);
    const double right = detail::panel(g, rule, mid, p.b, evals);
    const double err = std::abs(left + right - p.value);
    const double allowed = opt.abs_tol * (p.b - p.a) / length;
    if (err <= allowed || (p.b - p.a) <= 1e-13 * (1.0 + std::abs(p.a))) {
      total += left + right;
      continue;
    }
    if (evals > opt.max_evals) {
      throw NonConvergence("adaptive quadrature exceeded " + std::to_string(opt.max_evals) +
                           " evaluations");
    }
    stack.push_back({mid, p.b, right});
    stack.push_back({p.a, mid, left});
  }
  return total;
}

/// E[f(Z)] for Z ~ Exp(1). `step` describes where f changes abruptly, if anywhere.
template <class F>
double expect_exponential(F&& f, const std::optional<Transition>& step, const Options& opt = {}) {
  const bool sharp = step && step->width < opt.sharp_width;
  if (!sharp) {
    const Rule& rule = gauss_laguerre(opt.laguerre_nodes);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      if (rule.weights[i] == 0.0) continue;
      s += rule.weights[i] * f(rule.nodes[i]);
    }
    return s;
  }
  auto weighted = [&f](double z) { return std::exp(-z) * f(z); };
  return integrate_panels(weighted, graded_breakpoints(step, opt.upper), opt);
}

}  // namespace fblrelay::quad
