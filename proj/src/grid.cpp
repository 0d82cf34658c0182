#include "whlab/grid.hpp"

#include <numbers>

#include "whlab/errors.hpp"

namespace whlab {

Eigen::VectorXd HalfLineGrid::nodes() const {
  Eigen::VectorXd x(cells);
  for (Index j = 0; j < cells; ++j) x(j) = node(j);
  return x;
}

Eigen::VectorXd LineGrid::nodes() const {
  Eigen::VectorXd x(cells);
  for (Index j = 0; j < cells; ++j) x(j) = node(j);
  return x;
}

double LineGrid::frequency_step() const { return 2.0 * std::numbers::pi / (static_cast<double>(cells) * step()); }

double LineGrid::frequency(Index k) const {
  return (static_cast<double>(k) - 0.5 * static_cast<double>(cells) + 0.5) * frequency_step();
}

Eigen::VectorXd LineGrid::frequencies() const {
  Eigen::VectorXd xi(cells);
  for (Index k = 0; k < cells; ++k) xi(k) = frequency(k);
  return xi;
}

LineGrid LineGrid::dual() const { return LineGrid{std::numbers::pi / step(), cells}; }

GridFunction::GridFunction(Domain d, Eigen::VectorXcd s) : domain(d), samples(std::move(s)) {
  const Index expected = std::visit([](const auto& g) { return g.cells; }, domain);
  if (expected != samples.size()) throw Error(Errc::InvalidArgument, "sample count does not match the grid");
}

double GridFunction::step() const {
  return std::visit([](const auto& g) { return g.step(); }, domain);
}

Eigen::VectorXd GridFunction::nodes() const {
  return std::visit([](const auto& g) { return g.nodes(); }, domain);
}

}  // namespace whlab
