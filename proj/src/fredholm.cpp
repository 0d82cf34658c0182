#include "whlab/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "whlab/errors.hpp"
#include "whlab/operator.hpp"
#include "whlab/singular_values.hpp"

namespace whlab {

namespace {

Eigen::VectorXcd closed_form_psi(int k, const HalfLineGrid& grid) {
  Eigen::VectorXcd v(grid.cells);
  for (Index j = 0; j < grid.cells; ++j) {
    const double x = grid.node(j);
    v(j) = std::sqrt(2.0) * std::exp(-x) * laguerre(k, 2.0 * x);
  }
  return v;
}

double relative(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) { return (a - b).norm() / b.norm(); }

/// Consecutive psi_k (k = 0, 1, ...) annihilated by W(a) up to tol. Confident when the
/// first rejected function misses by at least min_gap * tol.
std::pair<Index, bool> explicit_count(const Eigen::MatrixXcd& w, const HalfLineGrid& grid, const FredholmOptions& o,
                                      std::map<std::string, double>& residuals, const std::string& tag) {
  for (int k = 0; k < o.max_explicit; ++k) {
    const Eigen::VectorXcd psi = closed_form_psi(k, grid);
    const double r = (w * psi).norm() / psi.norm();
    residuals[tag + ".psi" + std::to_string(k)] = r;
    if (!(r < o.residual_tol)) return {k, r >= o.min_gap * o.residual_tol};
  }
  return {o.max_explicit, false};
}

EstimatorResult svd_estimator(const std::string& name, const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& a_conj,
                              const FredholmOptions& o, std::map<std::string, double>& residuals) {
  EstimatorResult e;
  e.name = name;
  e.ran = true;
  const NullityEstimate k = count_small(singular_values(a), o.zero_rel, o.min_gap);
  const NullityEstimate c = count_small(singular_values(a_conj), o.zero_rel, o.min_gap);
  e.kernel = k.count;
  e.cokernel = c.count;
  e.confident = k.confident && c.confident;
  residuals[name + ".kernel_gap"] = k.gap_ratio;
  residuals[name + ".cokernel_gap"] = c.gap_ratio;
  if (e.confident) e.index = static_cast<int>(e.kernel - e.cokernel);
  return e;
}

Complex curve_derivative(const Symbol& a, double theta) {
  const double d = 1e-5;
  return (a(xi_of_theta(theta + d)) - a(xi_of_theta(theta - d))) / (2.0 * d);
}

}  // namespace

double laguerre(int k, double x) {
  if (k < 0) throw Error(Errc::InvalidArgument, "Laguerre degree must be nonnegative");
  double l0 = 1.0;
  if (k == 0) return l0;
  double l1 = 1.0 - x;
  for (int j = 1; j < k; ++j) {
    const double l2 = ((2.0 * j + 1.0 - x) * l1 - j * l0) / (j + 1.0);
    l0 = l1;
    l1 = l2;
  }
  return l1;
}

KernelBasis kernel_basis(int n, const HalfLineGrid& grid, Index oversample, double tol) {
  if (n < 1) throw Error(Errc::InvalidArgument, "kernel basis needs n >= 1");
  KernelBasis basis;
  basis.n = n;
  basis.grid = grid;
  const WienerHopfOptions opts{oversample, 1};
  const Eigen::VectorXcd psi0 = closed_form_psi(0, grid);
  const Eigen::MatrixXcd w_minus = wiener_hopf(Symbol::rational(-n), grid, opts).entries;
  const double h = grid.step();

  for (int k = 0; k < n; ++k) {
    Eigen::VectorXcd numeric = psi0;
    if (k > 0) numeric = wiener_hopf(Symbol::rational(k), grid, opts).entries * psi0;
    const Eigen::VectorXcd closed = closed_form_psi(k, grid);
    const double cv = relative(numeric, closed);
    basis.cross_validation.push_back(cv);
    basis.residuals.push_back((w_minus * numeric).norm() / numeric.norm());
    basis.functions.emplace_back(grid, numeric);
    basis.closed_form.emplace_back(grid, closed);
    if (!(cv <= tol)) {
      throw Error(Errc::CrossValidationFailure, "psi_" + std::to_string(k) + " numeric and closed forms differ by " +
                                                    std::to_string(cv));
    }
  }

  Eigen::MatrixXcd gram(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) gram(i, j) = h * basis.functions[static_cast<std::size_t>(i)].samples.dot(basis.functions[static_cast<std::size_t>(j)].samples);
  }
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(gram, Eigen::EigenvaluesOnly).eigenvalues();
  basis.gram_condition = ev.maxCoeff() / ev.minCoeff();
  return basis;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Fredholm: return "Fredholm";
    case Verdict::NotFredholm: return "NotFredholm";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

FredholmReport analyze(const Symbol& a, const FredholmOptions& opts) {
  FredholmReport r;
  r.symbol = a.describe();
  r.options = opts;
  const Extremum m = minimum_modulus(a);
  r.margin = m.value;
  r.margin_location = m.theta;
  r.elliptic = m.value > opts.margin_tol;
  if (!r.elliptic) {
    r.verdict = Verdict::NotFredholm;
    r.notes.push_back("symbol vanishes (to tolerance) at xi = " + std::to_string(xi_of_theta(m.theta)));
    return r;
  }
  try {
    r.winding = winding_number(a, WindingOptions{.margin_tol = opts.margin_tol});
  } catch (const Error& e) {
    r.verdict = Verdict::Inconclusive;
    r.notes.push_back(e.what());
    return r;
  }
  r.predicted_index = -*r.winding;

  if (!opts.numerics) {
    r.verdict = Verdict::Fredholm;
    r.index = r.predicted_index;
    r.notes.push_back("numerics skipped; verdict from ellipticity and winding number");
    return r;
  }

  const HalfLineGrid& grid = opts.grid;
  const Symbol a_conj = conj(a);
  const WienerHopfOptions square{opts.oversample, 1};

  // Explicit kernel functions, only for c * r_m.
  EstimatorResult expl;
  expl.name = "explicit";
  if (rational_exponent(a)) {
    expl.ran = true;
    const auto [k, kc] = explicit_count(wiener_hopf(a, grid, square).entries, grid, opts, r.residuals, "W(a)");
    const auto [c, cc] = explicit_count(wiener_hopf(a_conj, grid, square).entries, grid, opts, r.residuals, "W(conj a)");
    expl.kernel = k;
    expl.cokernel = c;
    expl.confident = kc && cc;
    if (expl.confident) expl.index = static_cast<int>(k - c);
  } else {
    expl.note = "symbol is not a multiple of r_n";
  }
  r.estimators.push_back(expl);

  // Rectangular Wiener-Hopf matrices with range twice the domain.
  if (opts.oversample >= 2) {
    const WienerHopfOptions rect{opts.oversample, 2};
    r.estimators.push_back(svd_estimator("wiener_hopf_svd", wiener_hopf(a, grid, rect).entries,
                                         wiener_hopf(a_conj, grid, rect).entries, opts, r.residuals));
  } else {
    EstimatorResult e;
    e.name = "wiener_hopf_svd";
    e.note = "needs oversample >= 2";
    r.estimators.push_back(e);
  }

  // Toeplitz sections of B0 a.
  const Index tn = opts.toeplitz_size > 0 ? opts.toeplitz_size : grid.cells;
  {
    const OperatorMatrix t = toeplitz_section(a, tn, 2 * tn);
    const OperatorMatrix tc = toeplitz_section(a_conj, tn, 2 * tn);
    EstimatorResult e = svd_estimator("toeplitz_svd", t.entries, tc.entries, opts, r.residuals);
    const NullityEstimate sq = count_small(singular_values(toeplitz_section(a, tn).entries), opts.zero_rel, opts.min_gap);
    r.residuals["toeplitz_svd.square_defect"] = static_cast<double>(sq.count);
    if (e.confident && sq.confident && sq.count != static_cast<Index>(std::abs(*e.index))) {
      e.note = "square defect " + std::to_string(sq.count) + " does not match |index|";
      e.confident = false;
      e.index.reset();
    }
    for (const auto& w : t.warnings) r.notes.push_back("toeplitz: " + w);
    r.estimators.push_back(e);
  }

  const std::size_t ne = r.estimators.size();
  r.agreement.assign(ne, std::vector<bool>(ne, false));
  int agreeing = 0;
  for (std::size_t i = 0; i < ne; ++i) {
    for (std::size_t j = 0; j < ne; ++j) {
      const auto& x = r.estimators[i];
      const auto& y = r.estimators[j];
      r.agreement[i][j] = x.index && y.index && *x.index == *y.index;
    }
    if (r.estimators[i].index == r.predicted_index) ++agreeing;
  }
  for (const auto& e : r.estimators) {
    if (e.index == r.predicted_index) {
      r.numerical_kernel_dim = e.kernel;
      r.numerical_cokernel_dim = e.cokernel;
      if (e.name == "wiener_hopf_svd") break;
    }
  }
  if (agreeing >= 2) {
    r.verdict = Verdict::Fredholm;
    r.index = r.predicted_index;
  } else {
    r.verdict = Verdict::Inconclusive;
    r.notes.push_back("fewer than two estimators confirm the predicted index");
  }
  return r;
}

HomotopyVerification homotopy_verify(const Symbol& b, int steps, double margin_tol) {
  if (steps < 1) throw Error(Errc::InvalidArgument, "homotopy needs at least one step");
  HomotopyVerification v;
  std::vector<double> ts;
  for (int s = 0; s <= steps; ++s) ts.push_back(static_cast<double>(s) / steps);
  v.trace = homotopy_trace(b, ts);
  const int kappa = v.trace.kappa;

  for (std::size_t s = 0; s < ts.size(); ++s) {
    if (!(v.trace.margin[s] > margin_tol)) {
      throw Error(Errc::PathEllipticityFailure, "h_t loses ellipticity at t = " + std::to_string(ts[s]));
    }
  }
  v.elliptic_everywhere = true;

  for (double t : ts) v.predicted_index.push_back(-winding_number(homotopy(b, t, kappa)));
  v.index_constant = std::all_of(v.predicted_index.begin(), v.predicted_index.end(), [&](int i) { return i == -kappa; });

  const auto grid = verification_grid(b);
  const Eigen::VectorXd xi = Eigen::Map<const Eigen::VectorXd>(grid.data(), static_cast<Index>(grid.size()));
  v.endpoint_start_error = (homotopy(b, 0.0, kappa)(xi) - Symbol::rational(kappa)(xi)).cwiseAbs().maxCoeff();
  v.endpoint_end_error = (homotopy(b, 1.0, kappa)(xi) - b(xi)).cwiseAbs().maxCoeff();

  for (std::size_t s = 0; s < ts.size(); ++s) {
    const double bound = v.trace.power_variation_bound[s];
    v.variation_bound_ok.push_back(v.trace.power_variation[s] <= bound * (1.0 + 1e-6) + 1e-9);
  }

  // Sup-norm continuity at t0 = 1/2 with the Lipschitz-type bound
  // ||b||^min(t,t0) sup|Log f| max(1, ||b||^d) d, Log the continued logarithm of f = r_-kappa b.
  const double t0 = 0.5;
  const Symbol f = Symbol::product({Symbol::rational(-kappa), b});
  const Eigen::VectorXcd h_half = Symbol::power(f, 0.5)(xi);
  double log_sup = 0.0;
  for (Index j = 0; j < xi.size(); ++j) log_sup = std::max(log_sup, std::abs(2.0 * std::log(h_half(j))));
  log_sup = std::max(log_sup, std::abs(std::log(f.at_infinity())));
  const double b_sup = sup_norm(b);
  const Eigen::VectorXcd base = homotopy(b, t0, kappa)(xi);
  v.lipschitz_ok = true;
  v.convergence_monotone = true;
  for (int k = 0; k < 6; ++k) {
    const double d = 0.1 * std::pow(0.5, k);
    const double dist = (homotopy(b, t0 + d, kappa)(xi) - base).cwiseAbs().maxCoeff();
    const double bound = std::pow(b_sup, t0) * log_sup * std::max(1.0, std::pow(b_sup, d)) * d;
    if (!v.convergence_distance.empty() && !(dist < v.convergence_distance.back()) && dist > 1e-14) {
      v.convergence_monotone = false;
    }
    if (dist > bound * (1.0 + 1e-9) + 1e-14) v.lipschitz_ok = false;
    v.convergence_steps.push_back(d);
    v.convergence_distance.push_back(dist);
    v.convergence_bound.push_back(bound);
  }

  v.passed = v.elliptic_everywhere && v.index_constant && v.endpoint_start_error < 1e-10 &&
             v.endpoint_end_error < 1e-10 &&
             std::all_of(v.variation_bound_ok.begin(), v.variation_bound_ok.end(), [](bool x) { return x; }) &&
             v.convergence_monotone && v.lipschitz_ok;
  return v;
}

PerturbationReport perturbation_experiment(const Symbol& a, std::optional<Complex> v, double epsilon,
                                           const FredholmOptions& opts) {
  if (!(epsilon > 0.0)) throw Error(Errc::InvalidArgument, "epsilon must be positive");
  PerturbationReport p;
  const Extremum m = minimum_modulus(a);
  p.theta0 = m.theta;
  p.xi0 = xi_of_theta(m.theta);
  p.min_modulus = m.value;
  if (v) {
    p.direction = *v;
  } else {
    const Complex d = curve_derivative(a, m.theta);
    if (std::abs(d) == 0.0) throw Error(Errc::TransversalityFailure, "curve has no tangent at the zero");
    p.direction = Complex(0.0, 1.0) * d / std::abs(d);
  }
  p.epsilon = epsilon;

  const Symbol a_plus = a + epsilon * p.direction;
  const Symbol a_minus = a + (-epsilon) * p.direction;
  for (const auto* s : {&a_plus, &a_minus}) {
    if (!is_elliptic(*s, opts.margin_tol)) {
      throw Error(Errc::TransversalityFailure, "perturbation does not clear the origin at epsilon = " + std::to_string(epsilon));
    }
  }
  p.plus = analyze(a_plus, opts);
  p.minus = analyze(a_minus, opts);
  p.wind_plus = winding_number(a_plus);
  p.wind_minus = winding_number(a_minus);
  p.index_jump = std::abs(p.wind_minus - p.wind_plus) == 1;

  const WienerHopfOptions square{opts.oversample, 1};
  p.operator_gap = spectral_norm(wiener_hopf(a_plus, opts.grid, square).entries -
                                 wiener_hopf(a_minus, opts.grid, square).entries);
  p.expected_gap = 2.0 * epsilon * std::abs(p.direction);
  return p;
}

}  // namespace whlab
