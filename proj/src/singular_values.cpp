#include "whlab/singular_values.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

namespace whlab {

Index SingularValueProfile::count_below(double tol) const { return (sigma.array() < tol).count(); }

SingularValueProfile singular_values(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return {};
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
  return {svd.singularValues()};
}

NullityEstimate count_small(const SingularValueProfile& p, double rel, double min_gap) {
  NullityEstimate e;
  const Index n = p.sigma.size();
  if (n == 0) return e;
  e.threshold = rel * p.max();
  e.count = p.count_below(e.threshold);
  if (e.count == n) {
    e.gap_ratio = 0.0;
  } else if (e.count == 0) {
    e.gap_ratio = p.sigma(n - 1) / e.threshold;
  } else {
    const double counted = p.sigma(n - e.count);
    const double kept = p.sigma(n - e.count - 1);
    e.gap_ratio = counted > 0.0 ? kept / counted : INFINITY;
  }
  e.confident = e.count < n && e.gap_ratio >= min_gap;
  return e;
}

CompactnessEvidence compactness_evidence(const std::function<Eigen::MatrixXcd(Index)>& build,
                                         std::span<const Index> sizes, double scale, double rel) {
  CompactnessEvidence ev;
  for (Index n : sizes) {
    SingularValueProfile p = singular_values(build(n));
    ev.sizes.push_back(n);
    ev.numerical_rank.push_back((p.sigma.array() > rel * scale).count());
    const double top = p.max();
    const auto above = top > 0.0 ? (p.sigma.array() > 0.5 * top).count() : 0;
    ev.plateau_fraction.push_back(p.sigma.size() ? static_cast<double>(above) / static_cast<double>(p.sigma.size()) : 0.0);
    ev.profiles.push_back(std::move(p));
  }
  if (ev.sizes.empty()) return ev;

  ev.rank_stable = std::all_of(ev.numerical_rank.begin(), ev.numerical_rank.end(),
                               [&](Index r) { return r == ev.numerical_rank.front(); });
  ev.leading_stable = ev.rank_stable;
  const Index r = ev.numerical_rank.front();
  for (std::size_t s = 1; s < ev.profiles.size() && ev.leading_stable; ++s) {
    for (Index k = 0; k < r; ++k) {
      const double a = ev.profiles[s - 1].sigma(k);
      const double b = ev.profiles[s].sigma(k);
      if (std::abs(a - b) > 0.05 * std::max(a, b)) ev.leading_stable = false;
    }
  }
  ev.plateau = std::all_of(ev.plateau_fraction.begin(), ev.plateau_fraction.end(), [](double f) { return f > 0.5; });
  return ev;
}

double spectral_norm(const Eigen::MatrixXcd& a, int max_iterations, double tol) {
  if (a.size() == 0) return 0.0;
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(a.cols());
  // A deterministic start with no special symmetry.
  for (Index j = 0; j < v.size(); ++j) v(j) = Complex(1.0 + 0.37 * std::sin(1.3 * static_cast<double>(j)), 0.21 * std::cos(0.7 * static_cast<double>(j)));
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    const Eigen::VectorXcd av = a * v;
    const Eigen::VectorXcd w = a.adjoint() * av;
    const double next = std::sqrt(w.norm());
    if (w.norm() == 0.0) return 0.0;
    v = w / w.norm();
    if (std::abs(next - estimate) <= tol * next) return next;
    estimate = next;
  }
  return estimate;
}

}  // namespace whlab
