#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "whlab/grid.hpp"

namespace whlab {

/// Nonincreasing singular values of a matrix.
struct SingularValueProfile {
  Eigen::VectorXd sigma;

  double max() const { return sigma.size() ? sigma(0) : 0.0; }
  Index count_below(double tol) const;
};

SingularValueProfile singular_values(const Eigen::MatrixXcd& a);

/// Number of singular values below rel * sigma_max, with the gap between the largest
/// counted and the smallest uncounted value. With nothing counted the gap is measured
/// against the threshold itself.
struct NullityEstimate {
  Index count = 0;
  double threshold = 0.0;
  double gap_ratio = 0.0;
  bool confident = false;
};

NullityEstimate count_small(const SingularValueProfile& p, double rel = 1e-3, double min_gap = 10.0);

struct CompactnessEvidence {
  std::vector<Index> sizes;
  std::vector<SingularValueProfile> profiles;
  std::vector<Index> numerical_rank;   // sigma > rel * reference scale
  std::vector<double> plateau_fraction;  // share of sigma above sigma_max / 2
  bool rank_stable = false;
  bool leading_stable = false;  // leading numerical-rank values agree within 5% across sizes
  bool plateau = false;         // more than half the values sit above sigma_max / 2 at every size
};

/// Singular-value profiles of build(n) for each n. The numerical rank is counted against
/// `scale` (pass the norm of a comparable bounded operator, e.g. 1 for products of unimodular symbols).
CompactnessEvidence compactness_evidence(const std::function<Eigen::MatrixXcd(Index)>& build,
                                         std::span<const Index> sizes, double scale = 1.0, double rel = 1e-3);

/// Largest singular value by power iteration on A^* A.
double spectral_norm(const Eigen::MatrixXcd& a, int max_iterations = 500, double tol = 1e-12);

}  // namespace whlab
