#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "whlab/whlab.hpp"

using namespace whlab;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
};

#define EXPECT(out, cond, msg)                 \
  do {                                         \
    if (!(cond)) {                             \
      (out).pass = false;                      \
      (out).detail << " [" << msg << "]";      \
    }                                          \
  } while (0)

int failures = 0;

void run(const char* id, const char* title, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!out.pass) ++failures;
  std::printf("%s %s %s (%.1fs)%s\n", out.pass ? "PASS" : "FAIL", id, title, secs, out.detail.str().c_str());
  std::fflush(stdout);
}

Symbol random_pl_continuous(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x;
  std::vector<Complex> v;
  double pos = -4.0 + u(rng);
  for (int k = 0; k < 7; ++k) {
    x.push_back(pos);
    v.push_back(k == 0 || k == 6 ? Complex(0.0) : Complex(u(rng), u(rng)));
    pos += 0.5 + std::abs(u(rng)) * 1.5;
  }
  return Symbol::constant(Complex(1.0 + 0.5 * u(rng), 0.5 * u(rng))) + Symbol::piecewise_linear(PLData::interpolate(x, v));
}

Eigen::VectorXcd random_smooth(std::mt19937& rng, const HalfLineGrid& g) {
  std::uniform_real_distribution<double> center(1.0, 0.6 * g.length);
  std::uniform_real_distribution<double> width(0.5, 3.0);
  std::normal_distribution<double> amp;
  Eigen::VectorXcd f = Eigen::VectorXcd::Zero(g.cells);
  for (int term = 0; term < 4; ++term) {
    const double c = center(rng);
    const double w = width(rng);
    const Complex a(amp(rng), amp(rng));
    for (Index j = 0; j < g.cells; ++j) {
      const double z = (g.node(j) - c) / w;
      f(j) += a * std::exp(-0.5 * z * z);
    }
  }
  return f;
}

void c1(Outcome& out) {
  double worst = 0.0;
  for (int n = -8; n <= 8; ++n) worst = std::max(worst, std::abs(variation(Symbol::rational(n)) - 2.0 * kPi * std::abs(n)));
  out.detail << " max |V(r_n) - 2 pi |n|| = " << worst;
  EXPECT(out, worst < 1e-6, "variation off");
}

void c2(Outcome& out) {
  FredholmOptions opts;
  opts.grid = HalfLineGrid{40.0, 1024};
  for (int n = -4; n <= 4; ++n) {
    const FredholmReport r = analyze(Symbol::rational(n), opts);
    EXPECT(out, r.verdict == Verdict::Fredholm, "n=" << n << " verdict " << to_string(r.verdict));
    EXPECT(out, r.index && *r.index == -n, "n=" << n << " index");
    int agreeing = 0;
    for (const EstimatorResult& e : r.estimators) {
      if (e.ran && e.confident && e.index && *e.index == -n) ++agreeing;
    }
    EXPECT(out, agreeing == 3, "n=" << n << " only " << agreeing << " estimators agree");
  }
  out.detail << " n=-4..4 at N=1024 L=40";
}

void c3(Outcome& out) {
  const HalfLineGrid g{40.0, 1024};
  double worst_res = 0.0;
  for (int n = 1; n <= 4; ++n) {
    const KernelBasis k = kernel_basis(n, g);
    for (double r : k.residuals) worst_res = std::max(worst_res, r);
    FredholmOptions opts;
    opts.grid = g;
    const FredholmReport r = analyze(Symbol::rational(-n), opts);
    const Index dim = r.numerical_kernel_dim.value_or(-1);
    EXPECT(out, dim == n, "n=" << n << " kernel estimate " << dim);
  }
  out.detail << " max residual " << worst_res;
  EXPECT(out, worst_res < 5e-3, "residual");

  const HalfLineGrid fine{40.0, 2048};
  const KernelBasis k = kernel_basis(4, fine, 2, 1e-3);
  double worst_cv = 0.0;
  for (double c : k.cross_validation) worst_cv = std::max(worst_cv, c);
  out.detail << ", cross-validation " << worst_cv << " (N=2048)";
  EXPECT(out, worst_cv < 1e-3, "cross-validation");
}

void c4(Outcome& out) {
  const HalfLineGrid g{40.0, 1024};
  std::mt19937 rng(2024);
  double worst = 0.0;
  for (int n = 1; n <= 4; ++n) {
    const Eigen::MatrixXcd prod =
        wiener_hopf(Symbol::rational(-n), g).entries * wiener_hopf(Symbol::rational(n), g).entries;
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::VectorXcd f = random_smooth(rng, g);
      worst = std::max(worst, (prod * f - f).norm() / f.norm());
    }
  }
  out.detail << " max relative error " << worst;
  EXPECT(out, worst < 1e-2, "right inverse");
}

void c5(Outcome& out) {
  const HalfLineGrid g{40.0, 1024};
  std::mt19937 rng(77);
  std::vector<std::pair<Symbol, Symbol>> pairs{{Symbol::rational(1), Symbol::rational(-1)}};
  for (int k = 0; k < 2; ++k) {
    Symbol a = random_pl_continuous(rng);
    Symbol b = random_pl_continuous(rng);
    pairs.emplace_back(a, b);
  }
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const Eigen::MatrixXcd e = semi_commutator_embedded(pairs[k].first, pairs[k].second, g).entries;
    const Eigen::MatrixXcd f = semi_commutator_fourier(pairs[k].first, pairs[k].second, g).entries;
    const double ne = spectral_norm(e);
    const double nf = spectral_norm(f);
    const double rel = std::abs(ne - nf) / nf;
    const double diff = spectral_norm(e - f) / nf;
    out.detail << " pair" << k << ": |A|=" << ne << " rel " << rel << " diff " << diff << ";";
    EXPECT(out, rel < 0.05 && diff < 0.05, "pair " << k);
  }
  const Eigen::MatrixXcd p1 = -semi_commutator(Symbol::rational(1), Symbol::rational(-1), g).entries;
  const SingularValueProfile s = singular_values(p1);
  const Index rank = (s.sigma.array() > 1e-3 * s.max()).count();
  out.detail << " rank P_1 = " << rank;
  EXPECT(out, rank == 1, "rank");
}

void c6(Outcome& out) {
  const std::vector<Index> sizes{256, 512, 1024};
  const CompactnessEvidence sc = compactness_evidence(
      [](Index n) { return semi_commutator(Symbol::rational(2), Symbol::rational(-2), HalfLineGrid{40.0, n}).entries; },
      sizes);
  out.detail << " semi-commutator ranks";
  for (Index r : sc.numerical_rank) out.detail << " " << r;
  EXPECT(out, sc.rank_stable && sc.numerical_rank.front() == 2, "rank not 2");
  EXPECT(out, sc.leading_stable, "leading values drift");

  const CompactnessEvidence w = compactness_evidence(
      [](Index n) { return wiener_hopf(Symbol::rational(1), HalfLineGrid{40.0, n}).entries; }, sizes);
  out.detail << "; W(r_1) plateau fractions";
  for (double f : w.plateau_fraction) out.detail << " " << f;
  EXPECT(out, w.plateau, "no plateau");
  for (Index r : w.numerical_rank) EXPECT(out, r >= w.sizes.front() - 1, "W(r_1) rank decays");
}

void c7(Outcome& out) {
  const HalfLineGrid g{4.0, 512};
  const GridFunction chi = sample(g, [](double x) { return x < 1.0 ? 1.0 : 0.0; });
  const double lor = lorentz_norm(chi, 2.0, 2.0);
  out.detail << " Lorentz err " << std::abs(lor - std::sqrt(2.0));
  EXPECT(out, std::abs(lor - std::sqrt(2.0)) < 1e-6, "Lorentz");

  std::mt19937 rng(5);
  std::normal_distribution<double> nd;
  Eigen::VectorXcd s(g.cells);
  for (Index j = 0; j < g.cells; ++j) s(j) = Complex(nd(rng), nd(rng));
  const GridFunction f(g, s);
  double worst = 0.0;
  for (double p : {1.5, 2.0, 3.0}) {
    const double lp = std::pow(g.step() * s.cwiseAbs().array().pow(p).sum(), 1.0 / p);
    worst = std::max(worst, std::abs(orlicz_norm(f, YoungFunction::power(p, p)) - lp) / lp);
  }
  out.detail << ", Orlicz vs L^p " << worst;
  EXPECT(out, worst < 1e-9, "Orlicz");

  double lo = 1.0;
  double hi = 3.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (std::pow(mid, -2.0) + std::pow(mid, -3.0) > 1.0 ? lo : hi) = mid;
  }
  const GridFunction two = sample(g, [](double x) { return x < 2.0 ? 1.0 : 0.0; });
  const double v = variable_lebesgue_norm(two, VariableExponent::piecewise({1.0}, {2.0, 3.0}));
  out.detail << ", variable " << v << " vs " << lo;
  EXPECT(out, std::abs(v - lo) < 1e-9, "variable exponent");

  const GridFunction r = decreasing_rearrangement(f);
  const double m1 = f.step() * f.samples.cwiseAbs().sum();
  const double m2 = r.step() * r.samples.cwiseAbs().sum();
  out.detail << ", mass " << std::abs(m1 - m2) / m1;
  EXPECT(out, std::abs(m1 - m2) <= 1e-12 * m1, "mass");
}

void check_homotopy(Outcome& out, const std::string& name, const Symbol& b) {
  const HomotopyVerification h = homotopy_verify(b, 20);
  bool bound = true;
  for (bool ok : h.variation_bound_ok) bound = bound && ok;
  out.detail << " " << name << ": endpoints " << h.endpoint_start_error << "/" << h.endpoint_end_error << ";";
  EXPECT(out, h.trace.t_samples.size() == 21, name << " sample count");
  EXPECT(out, h.elliptic_everywhere, name << " ellipticity");
  EXPECT(out, h.endpoint_start_error < 1e-10 && h.endpoint_end_error < 1e-10, name << " endpoints");
  EXPECT(out, bound, name << " variation bound");
  EXPECT(out, h.index_constant, name << " index");
}

void c8(Outcome& out) {
  check_homotopy(out, "2+r_1", Symbol::constant(2.0) + Symbol::rational(1));
  check_homotopy(out, "PL(r_1)", Symbol::piecewise_linear(pl_approximate(Symbol::rational(1)).pl));
}

void c9(Outcome& out) {
  FredholmOptions opts;
  opts.grid = HalfLineGrid{40.0, 1024};
  const PerturbationReport p = perturbation_experiment(Symbol::rational(1) + Complex(1.0), Complex(1.0), 0.1, opts);
  out.detail << " wind(a-) - wind(a+) = " << p.wind_minus - p.wind_plus << ", gap " << p.operator_gap;
  EXPECT(out, p.wind_minus - p.wind_plus == 1, "index jump");
  EXPECT(out, std::abs(p.operator_gap - 0.2) < 1e-3, "gap");
}

void c10(Outcome& out) {
  double prev = INFINITY;
  double mesh = 1.0 / 16.0;
  double window = 64.0;
  for (int k = 0; k <= 5; ++k) {
    const PLApproximation c = pl_approximate(Symbol::rational(1), mesh, window);
    out.detail << " " << c.sup_error;
    EXPECT(out, c.sup_error < prev, "error not decreasing at step " << k);
    EXPECT(out, c.variation <= 2.0 * kPi + 1e-9, "V(c) too large at step " << k);
    prev = c.sup_error;
    mesh *= 0.5;
    window *= 2.0;
  }
}

}  // namespace

int main() {
  run("c1", "variation of rational symbols", c1);
  run("c2", "index law for W(r_n)", c2);
  run("c3", "kernel basis of W(r_-n)", c3);
  run("c4", "right invertibility of W(r_-n)", c4);
  run("c5", "semi-commutator identity", c5);
  run("c6", "compactness evidence", c6);
  run("c7", "norm oracles", c7);
  run("c8", "homotopy", c8);
  run("c9", "perturbation index jump", c9);
  run("c10", "PL density surrogate", c10);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
