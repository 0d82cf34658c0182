#pragma once

#include <variant>
#include <vector>

#include "whlab/grid.hpp"

namespace whlab {

/// Young function Phi(x) = int_0^x phi(t) dt for a nondecreasing density phi.
class YoungFunction {
 public:
  /// Phi(x) = scale * x^p / p. scale = p gives Phi(x) = x^p.
  static YoungFunction power(double p, double scale = 1.0);
  /// phi(t) = values[k] on (breakpoints[k], breakpoints[k+1]] and values.back() beyond the
  /// last breakpoint. breakpoints[0] must be 0.
  static YoungFunction tabulated(std::vector<double> breakpoints, std::vector<double> values);

  double operator()(double x) const;
  double density(double x) const;

  bool is_power() const { return breakpoints_.empty(); }
  double exponent() const { return p_; }
  double scale() const { return scale_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }

 private:
  double p_ = 2.0;
  double scale_ = 1.0;
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  std::vector<double> cumulative_;  // Phi at each breakpoint
};

/// Piecewise-constant exponent: values[0] left of breakpoints[0], values[k] on
/// (breakpoints[k-1], breakpoints[k]], values.back() to the right. The outer values are
/// the tail exponents.
struct VariableExponent {
  std::vector<double> breakpoints;
  std::vector<double> values;

  static VariableExponent constant(double p);
  static VariableExponent piecewise(std::vector<double> breakpoints, std::vector<double> values);

  double operator()(double x) const;
  double p_minus() const;
  double p_plus() const;
};

struct Lorentz {
  double p = 2.0;
  double q = 2.0;
};
struct Orlicz {
  YoungFunction phi;
};
struct VariableLebesgue {
  VariableExponent exponent;
};
using SpaceSpec = std::variant<Lorentz, Orlicz, VariableLebesgue>;

struct BoydIndices {
  double alpha = 0.0;
  double beta = 0.0;
};

struct LuxemburgOptions {
  double rel_tol = 1e-10;
  int max_iterations = 200;
};

double distribution_function(const GridFunction& f, double lambda);
GridFunction decreasing_rearrangement(const GridFunction& f);
/// f**(t) = (1/t) int_0^t f*(s) ds.
double double_star(const GridFunction& f, double t);

double lp_norm(const GridFunction& f, double p);
double lorentz_norm(const GridFunction& f, double p, double q);
double orlicz_norm(const GridFunction& f, const YoungFunction& phi, const LuxemburgOptions& opts = {});
double variable_lebesgue_norm(const GridFunction& f, const VariableExponent& p, const LuxemburgOptions& opts = {});
double norm(const GridFunction& f, const SpaceSpec& space);

/// Discrete Hardy-Littlewood maximal function over cell-aligned intervals.
GridFunction maximal_operator(const GridFunction& f);
/// ||Mf|| / ||f|| in the given space; a finite-sample diagnostic only.
double maximal_ratio(const GridFunction& f, const SpaceSpec& space);

BoydIndices boyd_indices(const SpaceSpec& space);

}  // namespace whlab
