#include "whlab/spaces.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "whlab/errors.hpp"

namespace whlab {

namespace {

constexpr int kGaussPoints = 16;

struct GaussRule {
  std::array<double, kGaussPoints> x{};
  std::array<double, kGaussPoints> w{};
};

const GaussRule& gauss_rule() {
  static const GaussRule rule = [] {
    GaussRule r;
    for (int i = 0; i < kGaussPoints; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (kGaussPoints + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= kGaussPoints; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = kGaussPoints * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      r.x[static_cast<std::size_t>(i)] = x;
      r.w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
  }();
  return rule;
}

double gauss(const std::function<double(double)>& g, double a, double b) {
  const auto& r = gauss_rule();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < kGaussPoints; ++i) s += r.w[static_cast<std::size_t>(i)] * g(mid + half * r.x[static_cast<std::size_t>(i)]);
  return s * half;
}

Eigen::VectorXd sorted_magnitudes(const GridFunction& f) {
  Eigen::VectorXd s = f.samples.cwiseAbs();
  std::sort(s.data(), s.data() + s.size(), std::greater<>());
  return s;
}

/// Root of the decreasing modular rho(lambda) = 1 by bisection in log lambda.
double luxemburg(const std::function<double(double)>& rho, double guess, const LuxemburgOptions& opts) {
  double lo = guess;
  double hi = guess;
  for (int k = 0; k < 2000 && !(rho(hi) <= 1.0); ++k) hi *= 2.0;
  for (int k = 0; k < 2000 && !(rho(lo) > 1.0); ++k) lo *= 0.5;
  if (!(rho(hi) <= 1.0) || !(rho(lo) > 1.0)) throw Error(Errc::BracketFailure, "could not bracket the Luxemburg norm");
  for (int it = 0; it < opts.max_iterations && hi / lo - 1.0 > opts.rel_tol; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (rho(mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::sqrt(lo * hi);
}

}  // namespace

// ---------------------------------------------------------------------------
// Young functions and exponents

YoungFunction YoungFunction::power(double p, double scale) {
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(Errc::InvalidArgument, "power Young function needs 1 < p < inf");
  if (!(scale > 0.0)) throw Error(Errc::InvalidArgument, "Young function scale must be positive");
  YoungFunction y;
  y.p_ = p;
  y.scale_ = scale;
  return y;
}

YoungFunction YoungFunction::tabulated(std::vector<double> breakpoints, std::vector<double> values) {
  if (breakpoints.empty() || breakpoints.front() != 0.0) throw Error(Errc::InvalidArgument, "density breakpoints must start at 0");
  if (values.size() != breakpoints.size()) throw Error(Errc::InvalidArgument, "one density value per breakpoint");
  for (std::size_t k = 1; k < breakpoints.size(); ++k) {
    if (!(breakpoints[k] > breakpoints[k - 1])) throw Error(Errc::InvalidArgument, "density breakpoints must increase");
  }
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] < 0.0 || (k > 0 && values[k] < values[k - 1])) {
      throw Error(Errc::InvalidArgument, "density must be nonnegative and nondecreasing");
    }
  }
  if (!(values.back() > 0.0)) throw Error(Errc::InvalidArgument, "density must be eventually positive");
  YoungFunction y;
  y.p_ = 0.0;
  y.breakpoints_ = std::move(breakpoints);
  y.values_ = std::move(values);
  y.cumulative_.assign(y.breakpoints_.size(), 0.0);
  for (std::size_t k = 1; k < y.breakpoints_.size(); ++k) {
    y.cumulative_[k] = y.cumulative_[k - 1] + y.values_[k - 1] * (y.breakpoints_[k] - y.breakpoints_[k - 1]);
  }
  return y;
}

double YoungFunction::operator()(double x) const {
  if (x <= 0.0) return 0.0;
  if (is_power()) return scale_ * std::pow(x, p_) / p_;
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  const auto k = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  return cumulative_[k] + values_[k] * (x - breakpoints_[k]);
}

double YoungFunction::density(double x) const {
  if (x <= 0.0) return 0.0;
  if (is_power()) return scale_ * std::pow(x, p_ - 1.0);
  const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
  return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

VariableExponent VariableExponent::constant(double p) { return piecewise({}, {p}); }

VariableExponent VariableExponent::piecewise(std::vector<double> breakpoints, std::vector<double> values) {
  if (values.size() != breakpoints.size() + 1) throw Error(Errc::InvalidArgument, "exponent needs one more value than breakpoints");
  for (std::size_t k = 1; k < breakpoints.size(); ++k) {
    if (!(breakpoints[k] > breakpoints[k - 1])) throw Error(Errc::InvalidArgument, "exponent breakpoints must increase");
  }
  for (double p : values) {
    if (!(p > 1.0) || !std::isfinite(p)) throw Error(Errc::InvalidArgument, "exponent values must satisfy 1 < p < inf");
  }
  return VariableExponent{std::move(breakpoints), std::move(values)};
}

double VariableExponent::operator()(double x) const {
  const auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), x);
  return values[static_cast<std::size_t>(it - breakpoints.begin())];
}

double VariableExponent::p_minus() const { return *std::min_element(values.begin(), values.end()); }
double VariableExponent::p_plus() const { return *std::max_element(values.begin(), values.end()); }

// ---------------------------------------------------------------------------
// Rearrangements

double distribution_function(const GridFunction& f, double lambda) {
  if (lambda < 0.0) throw Error(Errc::InvalidArgument, "distribution function needs lambda >= 0");
  return f.step() * static_cast<double>((f.samples.cwiseAbs().array() > lambda).count());
}

GridFunction decreasing_rearrangement(const GridFunction& f) {
  return GridFunction(f.domain, sorted_magnitudes(f).cast<Complex>());
}

double double_star(const GridFunction& f, double t) {
  if (!(t > 0.0)) throw Error(Errc::InvalidArgument, "f** needs t > 0");
  const Eigen::VectorXd s = sorted_magnitudes(f);
  const double h = f.step();
  double mass = 0.0;
  for (Index k = 0; k < s.size(); ++k) {
    const double a = h * static_cast<double>(k);
    if (t <= a) break;
    mass += s(k) * (std::min(t, a + h) - a);
  }
  return mass / t;
}

// ---------------------------------------------------------------------------
// Norms

double lp_norm(const GridFunction& f, double p) {
  if (!(p >= 1.0)) throw Error(Errc::InvalidArgument, "L^p norm needs p >= 1");
  return std::pow(f.step() * f.samples.cwiseAbs().array().pow(p).sum(), 1.0 / p);
}

double lorentz_norm(const GridFunction& f, double p, double q) {
  if (!(p > 1.0 && p < INFINITY && q > 1.0 && q < INFINITY)) {
    throw Error(Errc::DivergentTail, "Lorentz norm needs 1 < p, q < inf");
  }
  const Eigen::VectorXd s = sorted_magnitudes(f);
  const double h = f.step();
  const double r = q / p;
  const Index n = s.size();
  if (n == 0 || s(0) == 0.0) return 0.0;

  double total = 0.0;
  double prefix = 0.0;  // int_0^{t_a} f*
  Index k = 0;
  while (k < n) {
    Index e = k;
    while (e + 1 < n && s(e + 1) == s(k)) ++e;
    const double ta = h * static_cast<double>(k);
    const double tb = h * static_cast<double>(e + 1);
    const double v = s(k);
    if (k == 0) {
      // f** is the constant v on the first run.
      total += std::pow(v, q) * std::pow(tb, r) / r;
    } else {
      // f**(t) = v + c / t on (ta, tb].
      const double c = prefix - v * ta;
      const auto g = [&](double t) { return std::pow(t, r - 1.0) * std::pow(v + c / t, q); };
      for (double lo = ta; lo < tb;) {
        const double hi = std::min(tb, 2.0 * lo);
        total += gauss(g, lo, hi);
        lo = hi;
      }
    }
    prefix += v * (tb - ta);
    k = e + 1;
  }
  // Beyond the grid f** = ||f||_1 / t.
  const double big_t = h * static_cast<double>(n);
  total += std::pow(prefix, q) * std::pow(big_t, r - q) / (q - r);
  return std::pow(total, 1.0 / q);
}

double orlicz_norm(const GridFunction& f, const YoungFunction& phi, const LuxemburgOptions& opts) {
  const Eigen::VectorXd m = f.samples.cwiseAbs();
  const double sup = m.maxCoeff();
  if (sup == 0.0) return 0.0;
  const double h = f.step();
  const auto rho = [&](double lambda) {
    double s = 0.0;
    for (Index j = 0; j < m.size(); ++j) s += phi(m(j) / lambda);
    return h * s;
  };
  const double l1 = h * m.sum();
  return luxemburg(rho, std::max(sup, l1), opts);
}

double variable_lebesgue_norm(const GridFunction& f, const VariableExponent& p, const LuxemburgOptions& opts) {
  const Eigen::VectorXd m = f.samples.cwiseAbs();
  const double sup = m.maxCoeff();
  if (sup == 0.0) return 0.0;
  const Eigen::VectorXd x = f.nodes();
  Eigen::VectorXd exps(x.size());
  for (Index j = 0; j < x.size(); ++j) {
    exps(j) = p(x(j));
    if (!(exps(j) > 1.0)) throw Error(Errc::InvalidArgument, "exponent must exceed 1");
  }
  const double h = f.step();
  const auto rho = [&](double lambda) {
    double s = 0.0;
    for (Index j = 0; j < m.size(); ++j) {
      if (m(j) > 0.0) s += std::pow(m(j) / lambda, exps(j));
    }
    return h * s;
  };
  return luxemburg(rho, std::max(sup, h * m.sum()), opts);
}

double norm(const GridFunction& f, const SpaceSpec& space) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Lorentz>) {
          return lorentz_norm(f, s.p, s.q);
        } else if constexpr (std::is_same_v<T, Orlicz>) {
          return orlicz_norm(f, s.phi);
        } else {
          return variable_lebesgue_norm(f, s.exponent);
        }
      },
      space);
}

GridFunction maximal_operator(const GridFunction& f) {
  const Eigen::VectorXd m = f.samples.cwiseAbs();
  const Index n = m.size();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd suffix(n);
  for (Index l = 0; l < n; ++l) {
    // avg(l, r) for r >= l, then suffix maxima so out(i) sees every interval [l, r] with r >= i.
    double sum = 0.0;
    for (Index r = l; r < n; ++r) {
      sum += m(r);
      suffix(r) = sum / static_cast<double>(r - l + 1);
    }
    for (Index r = n - 2; r >= l; --r) suffix(r) = std::max(suffix(r), suffix(r + 1));
    for (Index i = l; i < n; ++i) out(i) = std::max(out(i), suffix(i));
  }
  return GridFunction(f.domain, out.cast<Complex>());
}

double maximal_ratio(const GridFunction& f, const SpaceSpec& space) {
  const double nf = norm(f, space);
  if (nf == 0.0) return 0.0;
  return norm(maximal_operator(f), space) / nf;
}

BoydIndices boyd_indices(const SpaceSpec& space) {
  return std::visit(
      [](const auto& s) -> BoydIndices {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Lorentz>) {
          return {1.0 / s.p, 1.0 / s.p};
        } else if constexpr (std::is_same_v<T, Orlicz>) {
          if (!s.phi.is_power()) throw Error(Errc::Unsupported, "Boyd indices of tabulated Young functions");
          return {1.0 / s.phi.exponent(), 1.0 / s.phi.exponent()};
        } else {
          return {1.0 / s.exponent.p_plus(), 1.0 / s.exponent.p_minus()};
        }
      },
      space);
}

}  // namespace whlab
