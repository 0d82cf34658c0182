#include "whlab/symbol_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "whlab/errors.hpp"

namespace whlab {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd xi_vector(const std::vector<double>& theta) {
  Eigen::VectorXd xi(static_cast<Index>(theta.size()));
  for (std::size_t j = 0; j < theta.size(); ++j) xi(static_cast<Index>(j)) = xi_of_theta(theta[j]);
  return xi;
}

std::vector<double> breakpoint_thetas(const Symbol& a) {
  std::vector<double> out;
  out.reserve(a.breakpoints().size());
  for (double x : a.breakpoints()) out.push_back(theta_of_xi(x));
  return out;
}

/// Sorted theta samples: a uniform grid over [-pi, pi] merged with the images of the breakpoints.
std::vector<double> compact_grid(const Symbol& a, Index samples) {
  std::vector<double> theta(static_cast<std::size_t>(samples) + 1);
  for (Index j = 0; j <= samples; ++j) theta[static_cast<std::size_t>(j)] = -kPi + 2.0 * kPi * static_cast<double>(j) / static_cast<double>(samples);
  const auto bp = breakpoint_thetas(a);
  theta.insert(theta.end(), bp.begin(), bp.end());
  std::sort(theta.begin(), theta.end());
  theta.erase(std::unique(theta.begin(), theta.end()), theta.end());
  return theta;
}

double golden_minimum(const auto& f, double lo, double hi, double& arg_min) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  if (f1 < f2) {
    arg_min = x1;
    return f1;
  }
  arg_min = x2;
  return f2;
}

/// Minimum of sign * |a| over the compactified circle, sampled then polished.
Extremum extremum(const Symbol& a, Index samples, double sign) {
  const auto theta = compact_grid(a, samples);
  const Eigen::VectorXcd v = a(xi_vector(theta));
  std::vector<double> m(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) m[j] = sign * std::abs(v(static_cast<Index>(j)));

  std::vector<std::size_t> order(theta.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t keep = std::min<std::size_t>(16, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                    [&](std::size_t i, std::size_t j) { return m[i] < m[j]; });

  Extremum best{m[order[0]], theta[order[0]]};
  const auto f = [&](double t) { return sign * std::abs(a(xi_of_theta(t))); };
  for (std::size_t r = 0; r < keep; ++r) {
    const std::size_t j = order[r];
    const double lo = j == 0 ? theta[0] : theta[j - 1];
    const double hi = j + 1 == theta.size() ? theta.back() : theta[j + 1];
    if (!(hi > lo)) continue;
    double t = 0.0;
    const double val = golden_minimum(f, lo, hi, t);
    if (val < best.value) best = {val, t};
  }
  best.value *= sign;
  return best;
}

/// Chord-length sum of a over the compactified circle with n samples per breakpoint interval.
double chord_sum(const Symbol& a, const std::vector<double>& nodes, Index n) {
  std::vector<double> theta;
  theta.reserve((nodes.size() - 1) * static_cast<std::size_t>(n) + 1);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    for (Index j = 0; j < n; ++j) {
      theta.push_back(nodes[i] + (nodes[i + 1] - nodes[i]) * static_cast<double>(j) / static_cast<double>(n));
    }
  }
  theta.push_back(nodes.back());
  const Eigen::VectorXcd v = a(xi_vector(theta));
  double s = 0.0;
  for (Index j = 0; j + 1 < v.size(); ++j) s += std::abs(v(j + 1) - v(j));
  return s;
}

double numeric_variation(const Symbol& a) {
  std::vector<double> nodes = breakpoint_thetas(a);
  nodes.push_back(-kPi);
  nodes.push_back(kPi);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  const auto intervals = static_cast<Index>(nodes.size() - 1);
  const Index cap = Index{1} << 22;

  Index n = std::max<Index>(8, 4096 / intervals);
  double previous = chord_sum(a, nodes, n);
  double extrapolated_prev = std::numeric_limits<double>::quiet_NaN();
  while (2 * n * intervals <= cap) {
    n *= 2;
    const double current = chord_sum(a, nodes, n);
    const double extrapolated = current + (current - previous) / 3.0;
    if (std::abs(extrapolated - extrapolated_prev) <= 1e-10 * std::max(1.0, extrapolated)) return extrapolated;
    // Chord sums are monotone in refinement; once the increments are tiny the limit is reached.
    if (current - previous <= 1e-13 * std::max(1.0, current)) return current;
    extrapolated_prev = extrapolated;
    previous = current;
  }
  if (std::abs(extrapolated_prev - previous) > 1e-3 * std::max(1.0, previous)) {
    return std::numeric_limits<double>::infinity();
  }
  return extrapolated_prev;
}

}  // namespace

CurveTrace trace_curve(const Symbol& a, const WindingOptions& opts) {
  for (Index k = opts.initial_samples; k <= opts.max_samples; k *= 2) {
    std::vector<double> theta(static_cast<std::size_t>(k) + 1);
    for (Index j = 0; j <= k; ++j) theta[static_cast<std::size_t>(j)] = -kPi + 2.0 * kPi * static_cast<double>(j) / static_cast<double>(k);
    const Eigen::VectorXcd v = a(xi_vector(theta));
    const double min_mod = v.cwiseAbs().minCoeff();
    if (!(min_mod > opts.margin_tol)) {
      throw Error(Errc::NonElliptic, "symbol comes within " + std::to_string(min_mod) + " of the origin");
    }
    CurveTrace trace;
    trace.theta = std::move(theta);
    trace.value.assign(v.data(), v.data() + v.size());
    trace.arg.resize(trace.value.size());
    trace.arg[0] = std::arg(trace.value[0]);
    trace.min_modulus = min_mod;
    for (std::size_t j = 1; j < trace.value.size(); ++j) {
      const double step = std::arg(trace.value[j] / trace.value[j - 1]);
      trace.max_step = std::max(trace.max_step, std::abs(step));
      trace.arg[j] = trace.arg[j - 1] + step;
    }
    if (trace.max_step < opts.max_step) return trace;
  }
  throw Error(Errc::NonClosing, "argument tracking did not resolve within the refinement cap");
}

int winding_number(const Symbol& a, const WindingOptions& opts) {
  const auto trace = trace_curve(a, opts);
  const double total = trace.arg.back() - trace.arg.front();
  const double turns = total / (2.0 * kPi);
  const double rounded = std::round(turns);
  if (std::abs(total - 2.0 * kPi * rounded) > opts.closing_tol) {
    throw Error(Errc::NonClosing, "accumulated argument " + std::to_string(total) + " is not a multiple of 2 pi");
  }
  return static_cast<int>(rounded);
}

double ellipticity_margin(const Symbol& a, std::span<const double> grid) {
  double m = std::abs(a.at_infinity());
  for (double x : grid) m = std::min(m, std::abs(a(x)));
  return m;
}

Extremum minimum_modulus(const Symbol& a, Index samples) { return extremum(a, samples, 1.0); }

double ellipticity_margin(const Symbol& a) { return minimum_modulus(a).value; }

bool is_elliptic(const Symbol& a, double tol) { return ellipticity_margin(a) > tol; }

double sup_norm(const Symbol& a, Index samples) {
  if (a.kind() == SymbolKind::Rational) return 1.0;
  if (a.kind() == SymbolKind::Constant) return std::abs(a.at_infinity());
  return extremum(a, samples, -1.0).value;
}

double variation(const Symbol& a) {
  const auto& d = a.node().data;
  if (std::holds_alternative<node::Constant>(d)) return 0.0;
  if (const auto* r = std::get_if<node::Rational>(&d)) return 2.0 * kPi * std::abs(r->n);
  if (const auto* pl = std::get_if<node::PiecewiseLinear>(&d)) return pl->pl.variation();
  if (const auto* sc = std::get_if<node::Scaled>(&d)) return std::abs(sc->factor) * variation(sc->s);
  if (const auto* cj = std::get_if<node::Conjugate>(&d)) return variation(cj->base);
  return numeric_variation(a);
}

double bv_norm(const Symbol& a) { return sup_norm(a) + variation(a); }

namespace {

Inversion finish_inversion(const Symbol& a, double margin, double tol) {
  if (!(margin > tol)) throw Error(Errc::NonElliptic, "cannot invert: margin " + std::to_string(margin));
  Symbol inverse = Symbol::reciprocal(a);
  const double v_inv = variation(inverse);
  const double bound = variation(a) / (margin * margin);
  return Inversion{inverse, margin, v_inv, bound, v_inv <= bound * (1.0 + 1e-9) + 1e-12};
}

}  // namespace

Inversion invert(const Symbol& a, double tol) { return finish_inversion(a, ellipticity_margin(a), tol); }

Inversion invert(const Symbol& a, std::span<const double> grid, double tol) {
  return finish_inversion(a, ellipticity_margin(a, grid), tol);
}

PLApproximation pl_approximate(const Symbol& b, double mesh, double window) {
  if (!(mesh > 0.0) || !(window > 0.0)) throw Error(Errc::InvalidArgument, "mesh and window must be positive");
  if (!b.continuous_on_rdot()) throw Error(Errc::InvalidArgument, "PL approximation needs a symbol continuous on R-dot");
  const double vb = variation(b);
  if (!std::isfinite(vb)) throw Error(Errc::InfiniteVariation, "symbol has infinite variation");

  const auto steps = static_cast<Index>(std::llround(2.0 * window / mesh));
  if (steps < 1) throw Error(Errc::InvalidArgument, "mesh exceeds the window");
  Eigen::VectorXd nodes(steps + 1);
  for (Index j = 0; j <= steps; ++j) nodes(j) = -window + static_cast<double>(j) * mesh;
  const Eigen::VectorXcd values = b(nodes);
  const Complex inf = b.at_infinity();
  std::vector<Complex> v(values.data(), values.data() + values.size());
  v.front() = inf;
  v.back() = inf;
  PLData pl = PLData::interpolate(std::vector<double>(nodes.data(), nodes.data() + nodes.size()), v, inf, inf);

  // Error on a 4x finer grid inside the window, plus the compactified tails.
  const Index fine = 4 * steps;
  Eigen::VectorXd x(fine + 1 + 2 * 1024);
  for (Index j = 0; j <= fine; ++j) x(j) = -window + static_cast<double>(j) * (mesh / 4.0);
  const double edge = theta_of_xi(window);
  for (Index j = 0; j < 1024; ++j) {
    const double s = edge + (kPi - edge) * (static_cast<double>(j) + 0.5) / 1024.0;
    x(fine + 1 + j) = xi_of_theta(s);
    x(fine + 1 + 1024 + j) = -xi_of_theta(s);
  }
  const Eigen::VectorXcd exact = b(x);
  double err = 0.0;
  for (Index j = 0; j < x.size(); ++j) err = std::max(err, std::abs(exact(j) - pl(x(j))));

  PLApproximation out{std::move(pl), mesh, window, err, vb, 0.0};
  out.variation = out.pl.variation();
  return out;
}

Complex mobius_pullback(const Symbol& a, double theta) {
  const double r = std::remainder(theta, 2.0 * kPi);
  if (r == 0.0) return a.at_infinity();
  const Complex t = std::polar(1.0, theta);
  const Complex x = Complex(0.0, 1.0) * (1.0 + t) / (1.0 - t);
  return a(x.real());
}

Symbol homotopy(const Symbol& b, double t) { return homotopy(b, t, winding_number(b)); }

Symbol homotopy(const Symbol& b, double t, int kappa) {
  const Symbol f = Symbol::product({Symbol::rational(-kappa), b});
  return Symbol::product({Symbol::power(f, t), Symbol::rational(kappa)});
}

std::vector<double> verification_grid(const Symbol& a, Index samples) {
  std::vector<double> xi;
  xi.reserve(static_cast<std::size_t>(samples) + a.breakpoints().size());
  for (Index j = 0; j < samples; ++j) {
    xi.push_back(xi_of_theta(-kPi + 2.0 * kPi * (static_cast<double>(j) + 0.5) / static_cast<double>(samples)));
  }
  xi.insert(xi.end(), a.breakpoints().begin(), a.breakpoints().end());
  std::sort(xi.begin(), xi.end());
  xi.erase(std::unique(xi.begin(), xi.end()), xi.end());
  return xi;
}

HomotopyTrace homotopy_trace(const Symbol& b, std::span<const double> t_samples, double t0) {
  HomotopyTrace trace;
  trace.kappa = winding_number(b);
  trace.t0 = t0;
  trace.t_samples.assign(t_samples.begin(), t_samples.end());

  const Symbol f = Symbol::product({Symbol::rational(-trace.kappa), b});
  const double inf_b = ellipticity_margin(b);
  const double vf = variation(f);
  const auto grid = verification_grid(b);
  const Eigen::VectorXd xi = Eigen::Map<const Eigen::VectorXd>(grid.data(), static_cast<Index>(grid.size()));
  const Symbol h0 = homotopy(b, t0, trace.kappa);
  const Eigen::VectorXcd h0_values = h0(xi);

  for (double t : t_samples) {
    const Symbol ht = homotopy(b, t, trace.kappa);
    const Eigen::VectorXcd values = ht(xi);
    trace.margin.push_back(std::min(ellipticity_margin(ht), values.cwiseAbs().minCoeff()));
    const double sup = std::max((values - h0_values).cwiseAbs().maxCoeff(), std::abs(ht.at_infinity() - h0.at_infinity()));
    trace.sup_distance.push_back(sup);
    trace.bv_distance.push_back(sup + variation(ht - h0));
    trace.power_variation.push_back(variation(Symbol::power(f, t)));
    trace.power_variation_bound.push_back(t * vf / std::pow(inf_b, 1.0 - t));
  }
  return trace;
}

namespace detail {

std::shared_ptr<const node::BranchTable> build_branch_table(const Symbol& base) {
  WindingOptions opts;
  opts.initial_samples = 4096;
  opts.max_step = kPi / 8.0;
  CurveTrace trace;
  try {
    trace = trace_curve(base, opts);
  } catch (const Error& e) {
    if (e.code() == Errc::NonClosing) throw Error(Errc::LogBranchFailure, "cannot certify a continuous logarithm");
    throw;
  }
  const double total = trace.arg.back() - trace.arg.front();
  if (std::abs(total) > 1e-6) {
    throw Error(Errc::LogBranchFailure, "power base winds around the origin (argument change " + std::to_string(total) + ")");
  }
  auto table = std::make_shared<node::BranchTable>();
  table->theta = std::move(trace.theta);
  table->value = std::move(trace.value);
  table->arg = std::move(trace.arg);
  return table;
}

}  // namespace detail

}  // namespace whlab
