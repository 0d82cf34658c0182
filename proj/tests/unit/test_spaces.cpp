#include <doctest.h>

#include <cmath>
#include <random>

#include "whlab/errors.hpp"
#include "whlab/spaces.hpp"

using namespace whlab;

namespace {

GridFunction indicator(double a, double length, Index cells, double value = 1.0) {
  return sample(HalfLineGrid{length, cells}, [&](double x) { return x < a ? value : 0.0; });
}

GridFunction random_function(std::mt19937& rng, Index cells) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::VectorXcd s(cells);
  for (Index j = 0; j < cells; ++j) s(j) = Complex(n(rng), n(rng));
  return GridFunction(HalfLineGrid{8.0, cells}, s);
}

// Root of g on [lo, hi] by plain bisection; g decreasing.
template <typename G>
double bisect(G g, double lo, double hi) {
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("distribution function and rearrangement") {
  const GridFunction f = sample(HalfLineGrid{4.0, 400}, [](double x) { return x < 1.0 ? 3.0 : (x < 2.0 ? 1.0 : 0.0); });
  CHECK(distribution_function(f, 0.5) == doctest::Approx(2.0));
  CHECK(distribution_function(f, 2.0) == doctest::Approx(1.0));
  CHECK(distribution_function(f, 3.0) == 0.0);
  CHECK(double_star(f, 2.0) == doctest::Approx(2.0));
  CHECK(double_star(indicator(1.0, 4.0, 400), 0.5) == doctest::Approx(1.0));

  const GridFunction r = decreasing_rearrangement(f);
  for (Index j = 1; j < r.size(); ++j) CHECK(std::abs(r.samples(j)) <= std::abs(r.samples(j - 1)));
}

TEST_CASE("rearrangement conserves mass and level sets") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const GridFunction f = random_function(rng, 1000);
    const GridFunction r = decreasing_rearrangement(f);
    const double m1 = f.step() * f.samples.cwiseAbs().sum();
    const double m2 = r.step() * r.samples.cwiseAbs().sum();
    CHECK(std::abs(m1 - m2) <= 1e-12 * m1);
    for (double lambda : {0.1, 0.7, 1.5}) CHECK(distribution_function(f, lambda) == doctest::Approx(distribution_function(r, lambda)));
  }
}

TEST_CASE("Lorentz norm of indicators") {
  CHECK(lorentz_norm(indicator(1.0, 4.0, 256), 2.0, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(lorentz_norm(indicator(1.0, 4.0, 256, 2.0), 2.0, 2.0) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
  for (double a : {0.5, 2.0}) CHECK(lorentz_norm(indicator(a, 4.0, 256), 2.0, 2.0) == doctest::Approx(std::sqrt(2.0 * a)).epsilon(1e-12));
  CHECK_THROWS_AS(lorentz_norm(indicator(1.0, 4.0, 64), 1.0, 2.0), Error);
  CHECK_THROWS_AS(lorentz_norm(indicator(1.0, 4.0, 64), 2.0, INFINITY), Error);
}

TEST_CASE("Lorentz norm of a two-level function against quadrature") {
  // f = 3 chi_[0,1] + chi_(1,2]: f** = 3 on (0,1], (2 + t)/t on (1,2], 4/t beyond.
  const GridFunction f = sample(HalfLineGrid{4.0, 400}, [](double x) { return x < 1.0 ? 3.0 : (x < 2.0 ? 1.0 : 0.0); });
  const double p = 3.0;
  const double q = 1.5;
  double integral = std::pow(3.0, q) * p / q;  // int_0^1 t^{q/p - 1} 3^q dt
  const int m = 200000;
  for (int i = 0; i < m; ++i) {
    const double t = 1.0 + (i + 0.5) / m;
    integral += std::pow(std::pow(t, 1.0 / p) * (2.0 + t) / t, q) / t / m;
  }
  const double r = q / p - q;
  integral += std::pow(4.0, q) * std::pow(2.0, r) / -r;
  CHECK(lorentz_norm(f, p, q) == doctest::Approx(std::pow(integral, 1.0 / q)).epsilon(1e-8));
}

TEST_CASE("Orlicz with Phi(x) = x^p equals L^p") {
  std::mt19937 rng(5);
  for (double p : {1.5, 2.0, 3.0}) {
    const YoungFunction phi = YoungFunction::power(p, p);
    for (int trial = 0; trial < 3; ++trial) {
      const GridFunction f = random_function(rng, 500);
      const double lp = std::pow(f.step() * f.samples.cwiseAbs().array().pow(p).sum(), 1.0 / p);
      CHECK(std::abs(orlicz_norm(f, phi) - lp) <= 1e-9 * lp);
    }
  }
  CHECK(orlicz_norm(indicator(8.0, 8.0, 64, 2.0), YoungFunction::power(3.0, 3.0)) == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(orlicz_norm(indicator(1.0, 2.0, 64, 0.0), YoungFunction::power(2.0, 2.0)) == 0.0);
}

TEST_CASE("tabulated Young function") {
  const YoungFunction phi = YoungFunction::tabulated({0.0, 1.0, 2.0}, {1.0, 2.0, 4.0});
  CHECK(phi(0.5) == doctest::Approx(0.5));
  CHECK(phi(1.5) == doctest::Approx(2.0));
  CHECK(phi(3.0) == doctest::Approx(7.0));
  CHECK_THROWS_AS(YoungFunction::tabulated({0.0, 1.0}, {2.0, 1.0}), Error);
  // chi_[0,1/2]: Phi(1/lambda) = 2 gives 1 + 2 (1/lambda - 1) = 2.
  CHECK(orlicz_norm(indicator(0.5, 2.0, 64), phi) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("variable exponent norms") {
  CHECK(variable_lebesgue_norm(indicator(1.0, 4.0, 128), VariableExponent::constant(2.0)) == doctest::Approx(1.0).epsilon(1e-10));
  const VariableExponent two_piece = VariableExponent::piecewise({1.0}, {2.0, 3.0});
  const double oracle = bisect([](double l) { return std::pow(l, -2.0) + std::pow(l, -3.0) - 1.0; }, 1.0, 3.0);
  CHECK(oracle == doctest::Approx(1.324718).epsilon(1e-6));
  const double v = variable_lebesgue_norm(indicator(2.0, 4.0, 400), two_piece);
  CHECK(std::abs(v - oracle) <= 1e-9);
  CHECK(two_piece.p_minus() == 2.0);
  CHECK(two_piece.p_plus() == 3.0);

  std::mt19937 rng(9);
  const GridFunction f = random_function(rng, 300);
  const double lp = std::pow(f.step() * f.samples.cwiseAbs().array().pow(2.5).sum(), 1.0 / 2.5);
  CHECK(std::abs(variable_lebesgue_norm(f, VariableExponent::constant(2.5)) - lp) <= 1e-9 * lp);
}

TEST_CASE("norm properties") {
  std::mt19937 rng(13);
  const std::vector<SpaceSpec> spaces{Lorentz{2.0, 3.0}, Lorentz{1.5, 1.5}, Orlicz{YoungFunction::power(2.5)},
                                      Orlicz{YoungFunction::tabulated({0.0, 0.5}, {1.0, 3.0})},
                                      VariableLebesgue{VariableExponent::piecewise({2.0, 5.0}, {1.5, 3.0, 2.0})}};
  for (const SpaceSpec& space : spaces) {
    const GridFunction f = random_function(rng, 400);
    const GridFunction g = random_function(rng, 400);
    const double nf = norm(f, space);
    CHECK(nf > 0.0);
    CHECK(norm(GridFunction(f.domain, Complex(-2.0, 1.5) * f.samples), space) ==
          doctest::Approx(std::abs(Complex(-2.0, 1.5)) * nf).epsilon(1e-8));
    CHECK(norm(GridFunction(f.domain, f.samples + g.samples), space) <= nf + norm(g, space) + 1e-9);
  }
  // Rearrangement invariance for the r.i. spaces.
  const GridFunction f = random_function(rng, 400);
  Eigen::VectorXcd rev = f.samples.reverse();
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(norm(GridFunction(f.domain, rev), spaces[k]) == doctest::Approx(norm(f, spaces[k])).epsilon(1e-9));
  }
}

TEST_CASE("maximal operator") {
  const GridFunction c = sample(HalfLineGrid{4.0, 64}, [](double) { return Complex(0.0, -3.0); });
  const GridFunction mc = maximal_operator(c);
  CHECK((mc.samples.array() - 3.0).abs().maxCoeff() < 1e-12);

  const GridFunction f = indicator(1.0, 8.0, 400);
  const GridFunction mf = maximal_operator(f);
  const double h = f.step();
  for (Index j = 0; j < f.size(); ++j) {
    const double x = f.nodes()(j);
    CHECK(mf.samples(j).real() >= std::abs(f.samples(j)) - 1e-15);
    if (x < 1.0) {
      CHECK(mf.samples(j).real() == doctest::Approx(1.0));
    } else {
      // Cell-aligned intervals reach 1/x within two cells.
      CHECK(mf.samples(j).real() <= 1.0 / (x - 2.0 * h) + 1e-12);
      CHECK(mf.samples(j).real() >= 1.0 / (x + 2.0 * h) - 1e-12);
    }
  }
  CHECK(maximal_ratio(f, Lorentz{2.0, 2.0}) >= 1.0);
}

TEST_CASE("Boyd indices") {
  const BoydIndices l = boyd_indices(Lorentz{4.0, 2.0});
  CHECK(l.alpha == 0.25);
  CHECK(l.beta == 0.25);
  const BoydIndices o = boyd_indices(Orlicz{YoungFunction::power(3.0)});
  CHECK(o.alpha == doctest::Approx(1.0 / 3.0));
  const BoydIndices v = boyd_indices(VariableLebesgue{VariableExponent::piecewise({0.0}, {2.0, 4.0})});
  CHECK(v.alpha == 0.25);
  CHECK(v.beta == 0.5);
  CHECK_THROWS_AS(boyd_indices(Orlicz{YoungFunction::tabulated({0.0, 1.0}, {1.0, 2.0})}), Error);
}
