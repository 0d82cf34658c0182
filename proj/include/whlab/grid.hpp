#pragma once

#include <cmath>
#include <complex>
#include <variant>

#include <Eigen/Core>

namespace whlab {

using Complex = std::complex<double>;
using Index = Eigen::Index;

/// Uniform cells on [0, length); node j sits at the cell midpoint (j + 1/2) h.
struct HalfLineGrid {
  double length = 40.0;
  Index cells = 1024;

  double step() const { return length / static_cast<double>(cells); }
  double node(Index j) const { return (static_cast<double>(j) + 0.5) * step(); }
  Eigen::VectorXd nodes() const;
};

/// Uniform cells on [-half_width, half_width); midpoints are symmetric about 0, so
/// there is never a node at the origin. The dual frequency grid has the same layout
/// with half width pi / step().
struct LineGrid {
  double half_width = 80.0;
  Index cells = 4096;

  double step() const { return 2.0 * half_width / static_cast<double>(cells); }
  double node(Index j) const { return -half_width + (static_cast<double>(j) + 0.5) * step(); }
  Eigen::VectorXd nodes() const;

  double frequency_step() const;
  double frequency(Index k) const;
  Eigen::VectorXd frequencies() const;
  /// The grid whose nodes are this grid's frequencies.
  LineGrid dual() const;
};

using Domain = std::variant<HalfLineGrid, LineGrid>;

/// Complex samples read as a piecewise-constant function on the cells of a grid.
struct GridFunction {
  Domain domain;
  Eigen::VectorXcd samples;

  GridFunction(Domain d, Eigen::VectorXcd s);

  Index size() const { return samples.size(); }
  double step() const;
  Eigen::VectorXd nodes() const;
  double measure() const { return step() * static_cast<double>(size()); }
};

GridFunction sample(const HalfLineGrid& grid, const auto& f) {
  Eigen::VectorXcd s(grid.cells);
  for (Index j = 0; j < grid.cells; ++j) s(j) = Complex(f(grid.node(j)));
  return GridFunction(grid, std::move(s));
}

GridFunction sample(const LineGrid& grid, const auto& f) {
  Eigen::VectorXcd s(grid.cells);
  for (Index j = 0; j < grid.cells; ++j) s(j) = Complex(f(grid.node(j)));
  return GridFunction(grid, std::move(s));
}

/// Discrete L2 norm of cell samples with cell width h.
template <typename Derived>
double l2_norm(const Eigen::MatrixBase<Derived>& v, double h) {
  return std::sqrt(h) * v.norm();
}

}  // namespace whlab
