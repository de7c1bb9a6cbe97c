#include "fblrelay/quadrature.hpp"

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <mutex>

namespace fblrelay::quad {

namespace {

// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix of the
// orthogonal polynomial family, weights mu0 * (first eigenvector component)^2.
Rule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag, double mu0) {
  const auto n = diag.size();
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    jacobi(i, i) = diag(i);
    if (i + 1 < n) {
      jacobi(i, i + 1) = offdiag(i);
      jacobi(i + 1, i) = offdiag(i);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  Rule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v0 = solver.eigenvectors()(0, i);
    rule.nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    rule.weights[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
  }
  return rule;
}

Rule make_laguerre(std::size_t n) {
  const auto sz = static_cast<Eigen::Index>(n);
  Eigen::VectorXd diag(sz);
  Eigen::VectorXd off(std::max<Eigen::Index>(sz - 1, 0));
  for (Eigen::Index i = 0; i < sz; ++i) {
    diag(i) = 2.0 * static_cast<double>(i) + 1.0;
    if (i + 1 < sz) off(i) = static_cast<double>(i) + 1.0;
  }
  return golub_welsch(diag, off, 1.0);
}

Rule make_legendre(std::size_t n) {
  const auto sz = static_cast<Eigen::Index>(n);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(sz);
  Eigen::VectorXd off(std::max<Eigen::Index>(sz - 1, 0));
  for (Eigen::Index i = 0; i + 1 < sz; ++i) {
    const double k = static_cast<double>(i) + 1.0;
    off(i) = k / std::sqrt(4.0 * k * k - 1.0);
  }
  Rule rule = golub_welsch(diag, off, 2.0);
  // Symmetrize to remove eigen-solver noise; keeps odd integrands exact.
  for (std::size_t i = 0, j = n - 1; i < j; ++i, --j) {
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

class RuleCache {
 public:
  using Factory = Rule (*)(std::size_t);
  explicit RuleCache(Factory f) : factory_(f) {}

  const Rule& get(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = rules_.find(n);
    if (it == rules_.end()) {
      it = rules_.emplace(n, std::make_unique<Rule>(factory_(n))).first;
    }
    return *it->second;
  }

 private:
  Factory factory_;
  std::mutex mutex_;
  std::map<std::size_t, std::unique_ptr<Rule>> rules_;
};

}  // namespace

const Rule& gauss_laguerre(std::size_t n) {
  static RuleCache cache(&make_laguerre);
  return cache.get(n);
}

const Rule& gauss_legendre(std::size_t n) {
  static RuleCache cache(&make_legendre);
  return cache.get(n);
}

std::vector<double> graded_breakpoints(const std::optional<Transition>& step, double upper) {
  std::vector<double> pts{0.0, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 24.0, 32.0, upper};
  if (step && step->width > 0.0) {
    const double c = step->center;
    if (c > 0.0 && c < upper) pts.push_back(c);
    for (double k = 0.5; k * step->width < upper; k *= 2.0) {
      for (const double p : {c - k * step->width, c + k * step->width}) {
        if (p > 0.0 && p < upper) pts.push_back(p);
      }
    }
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  out.reserve(pts.size());
  for (const double p : pts) {
    if (p > upper) break;
    if (out.empty() || p - out.back() > 1e-12 * (1.0 + p)) out.push_back(p);
  }
  if (out.back() < upper) out.push_back(upper);
  return out;
}

}  // namespace fblrelay::quad
