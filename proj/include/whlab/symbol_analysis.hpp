#pragma once

#include <numbers>
#include <span>
#include <vector>

#include "whlab/symbol.hpp"

namespace whlab {

inline constexpr double kEllipticTolerance = 1e-9;

struct WindingOptions {
  Index initial_samples = 1024;
  Index max_samples = Index{1} << 22;
  double max_step = std::numbers::pi / 2;  // largest argument change between samples
  double margin_tol = kEllipticTolerance;
  double closing_tol = 1e-6;
};

/// The closed curve theta -> a(tan(theta/2)), theta in [-pi, pi], with its
/// continuous argument. Both endpoints are a(infinity).
struct CurveTrace {
  std::vector<double> theta;
  std::vector<Complex> value;
  std::vector<double> arg;
  double max_step = 0.0;
  double min_modulus = 0.0;
};

/// Doubles the uniform theta sampling until every argument step is below opts.max_step.
/// Throws NonElliptic when the curve comes within opts.margin_tol of the origin and
/// NonClosing when the refinement cap is hit.
CurveTrace trace_curve(const Symbol& a, const WindingOptions& opts = {});

int winding_number(const Symbol& a, const WindingOptions& opts = {});

/// min |a| over grid plus the point at infinity.
double ellipticity_margin(const Symbol& a, std::span<const double> grid);

struct Extremum {
  double value = 0.0;
  double theta = 0.0;  // location on the compactified circle; +-pi is infinity
};

/// min |a| on a compactified grid, refined by golden-section search around the
/// smallest samples.
Extremum minimum_modulus(const Symbol& a, Index samples = 8192);
double ellipticity_margin(const Symbol& a);
bool is_elliptic(const Symbol& a, double tol = kEllipticTolerance);

double sup_norm(const Symbol& a, Index samples = 8192);

/// Total variation over R. Exact for constants, rational, piecewise-linear and scaled
/// nodes; otherwise chord sums of the compactified curve with Richardson extrapolation.
double variation(const Symbol& a);
double bv_norm(const Symbol& a);

struct Inversion {
  Symbol symbol;
  double margin = 0.0;
  double variation = 0.0;        // V(1/a)
  double variation_bound = 0.0;  // V(a) / margin^2
  bool bound_holds = false;
};

/// Pointwise reciprocal. Rational, constant, scaled and product nodes invert exactly;
/// anything else becomes a Reciprocal node.
Inversion invert(const Symbol& a, double tol = kEllipticTolerance);
Inversion invert(const Symbol& a, std::span<const double> grid, double tol = kEllipticTolerance);

struct PLApproximation {
  PLData pl;
  double mesh = 0.0;
  double window = 0.0;
  double sup_error = 0.0;  // |b - c| on a 4x finer grid plus the tails
  double variation_target = 0.0;
  double variation = 0.0;
};

/// Node interpolation of b on [-window, window] with spacing mesh; the end vertices
/// take the value b(infinity) so the result lies in C(R-dot).
PLApproximation pl_approximate(const Symbol& b, double mesh = 1.0 / 16.0, double window = 64.0);

/// (B0 a)(e^{i theta}) = a(i (1 + t) / (1 - t)), and a(infinity) at t = 1.
Complex mobius_pullback(const Symbol& a, double theta);

/// h_t = (r_{-kappa} b)^t r_kappa with kappa = wind b.
Symbol homotopy(const Symbol& b, double t);
Symbol homotopy(const Symbol& b, double t, int kappa);

struct HomotopyTrace {
  int kappa = 0;
  double t0 = 0.0;
  std::vector<double> t_samples;
  std::vector<double> margin;        // inf |h_t|
  std::vector<double> sup_distance;  // ||h_t - h_t0||_inf
  std::vector<double> bv_distance;   // ||h_t - h_t0||_BV
  std::vector<double> power_variation;        // V((r_{-kappa} b)^t)
  std::vector<double> power_variation_bound;  // t V(r_{-kappa} b) / (inf |b|)^(1-t)
};

HomotopyTrace homotopy_trace(const Symbol& b, std::span<const double> t_samples, double t0 = 0.0);

/// Compactified verification grid: tan(theta/2) on a uniform theta grid, plus vertices.
std::vector<double> verification_grid(const Symbol& a, Index samples = 4096);

namespace detail {
std::shared_ptr<const node::BranchTable> build_branch_table(const Symbol& base);
}

}  // namespace whlab
