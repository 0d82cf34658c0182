#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "whlab/errors.hpp"
#include "whlab/symbol.hpp"
#include "whlab/symbol_analysis.hpp"

using namespace whlab;

namespace {

constexpr double kPi = std::numbers::pi;

// Brute-force argument accumulation on a dense uniform theta grid.
int winding_oracle(const Symbol& a, int samples = 100000) {
  double total = 0.0;
  Complex prev = a.at_infinity();
  for (int j = 1; j <= samples; ++j) {
    const double theta = -kPi + 2.0 * kPi * j / samples;
    const Complex cur = j == samples ? a.at_infinity() : a(std::tan(0.5 * theta));
    total += std::arg(cur / prev);
    prev = cur;
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

// Chord sum of the curve on a dense theta grid.
double variation_oracle(const Symbol& a, int samples = 400000) {
  double v = 0.0;
  Complex prev = a.at_infinity();
  for (int j = 1; j <= samples; ++j) {
    const double theta = -kPi + 2.0 * kPi * j / samples;
    const Complex cur = j == samples ? a.at_infinity() : a(std::tan(0.5 * theta));
    v += std::abs(cur - prev);
    prev = cur;
  }
  return v;
}

Symbol tent() {
  return Symbol::piecewise_linear(PLData::interpolate({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0}));
}

Symbol random_pl(std::mt19937& rng, int vertices, Complex base) {
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  std::vector<double> x;
  std::vector<Complex> v;
  double pos = -5.0;
  for (int k = 0; k < vertices; ++k) {
    pos += 0.3 + std::abs(u(rng)) * 3.0;
    x.push_back(pos);
    v.push_back(k == 0 || k + 1 == vertices ? base : base + Complex(u(rng), u(rng)));
  }
  return Symbol::piecewise_linear(PLData::interpolate(x, v));
}

}  // namespace

TEST_CASE("rational symbol values") {
  CHECK(std::abs(Symbol::rational(1)(0.0) - Complex(-1.0, 0.0)) < 1e-15);
  for (int n = -3; n <= 3; ++n) CHECK(Symbol::rational(n)(INFINITY) == Complex(1.0, 0.0));
  const Complex w = (Complex(1.0, 0.0) - Complex(0.0, 1.0)) / (Complex(1.0, 0.0) + Complex(0.0, 1.0));
  CHECK(std::abs(Symbol::rational(2)(1.0) - w * w) < 1e-15);
  CHECK(std::abs(Symbol::rational(2)(1.0) - Complex(-1.0, 0.0)) < 1e-15);
  for (double xi : {-7.0, -0.3, 0.0, 0.9, 40.0}) CHECK(std::abs(std::abs(Symbol::rational(5)(xi)) - 1.0) < 1e-14);
}

TEST_CASE("vectorized evaluation matches scalar evaluation") {
  const Symbol a = Symbol::sum({Symbol::rational(2), Symbol::scaled(tent(), Complex(0.5, 1.0)), Symbol::constant(3.0)});
  Eigen::VectorXd xi(6);
  xi << -INFINITY, -3.0, 0.5, 1.0, 1.7, INFINITY;
  const Eigen::VectorXcd v = a(xi);
  for (Index j = 0; j < xi.size(); ++j) CHECK(std::abs(v(j) - a(xi(j))) < 1e-14);
}

TEST_CASE("PL normal form and continuity flag") {
  const Symbol t = tent();
  CHECK(t.continuous_on_rdot());
  CHECK(std::abs(t(0.5) - 0.5) < 1e-15);
  CHECK(std::abs(t(-3.0)) < 1e-15);
  CHECK(std::abs(t(1.0) - 1.0) < 1e-15);
  const PLData jump = PLData::normal_form({0.0, 1.0}, 0.0, 2.0, {{Complex(0.0), Complex(1.0)}});
  CHECK_FALSE(jump.continuous_on_rdot);
  CHECK_THROWS_AS(PLData::normal_form({1.0, 0.0}, 0.0, 0.0, {{0.0, 0.0}}), Error);
}

TEST_CASE("exact variation") {
  for (int n = -8; n <= 8; ++n) CHECK(variation(Symbol::rational(n)) == doctest::Approx(2.0 * kPi * std::abs(n)).epsilon(1e-14));
  CHECK(variation(Symbol::constant(Complex(2.0, 1.0))) == 0.0);
  CHECK(variation(tent()) == doctest::Approx(2.0));
  // PL with a jump counts the jump.
  const Symbol step = Symbol::piecewise_linear(PLData::normal_form({0.0}, 1.0, -1.0, {}));
  CHECK(variation(step) == doctest::Approx(2.0));
}

TEST_CASE("bv norm examples") {
  CHECK(bv_norm(Symbol::rational(1)) == doctest::Approx(1.0 + 2.0 * kPi).epsilon(1e-12));
  CHECK(bv_norm(Symbol::constant(3.0)) == doctest::Approx(3.0));
  const Symbol half_r2 = Complex(0.5) * Symbol::rational(2);
  CHECK(bv_norm(half_r2) == doctest::Approx(0.5 + 2.0 * kPi).epsilon(1e-12));
  // Cross-check V(c f) against a sampled chord sum.
  CHECK(variation(half_r2) == doctest::Approx(variation_oracle(half_r2)).epsilon(1e-6));
}

TEST_CASE("numeric variation agrees with a chord-sum oracle") {
  const Symbol a = Symbol::product({Symbol::rational(1), Symbol::rational(1) + Complex(3.0)});
  CHECK(a.kind() == SymbolKind::Product);
  CHECK(variation(a) == doctest::Approx(variation_oracle(a)).epsilon(1e-6));
  const Symbol p = Symbol::power(Symbol::rational(1) + Complex(3.0), 0.5);
  CHECK(variation(p) == doctest::Approx(variation_oracle(p)).epsilon(1e-6));
}

TEST_CASE("PL variation equals the integral of |a'|") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const Symbol a = random_pl(rng, 9, Complex(1.0, 0.5));
    const auto& pl = std::get<node::PiecewiseLinear>(a.node().data).pl;
    // Riemann sum of |a'| with midpoint samples between vertices.
    double integral = 0.0;
    for (std::size_t k = 0; k + 1 < pl.vertices.size(); ++k) {
      const int m = 2000;
      const double dx = (pl.vertices[k + 1] - pl.vertices[k]) / m;
      for (int i = 0; i < m; ++i) {
        const double x = pl.vertices[k] + (i + 0.5) * dx;
        integral += std::abs(a(x + 0.25 * dx) - a(x - 0.25 * dx)) / (0.5 * dx) * dx;
      }
    }
    CHECK(variation(a) == doctest::Approx(integral).epsilon(1e-6));
  }
}

TEST_CASE("ellipticity margin on grids") {
  const std::vector<double> grid{-2.0, -1.0, 0.0, 1.0, 5.0};
  CHECK(ellipticity_margin(Symbol::rational(1), grid) == doctest::Approx(1.0));
  CHECK(ellipticity_margin(Symbol::rational(1) + Complex(1.0), grid) < 1e-15);
  CHECK(ellipticity_margin(Symbol::constant(0.0), grid) == 0.0);
  CHECK(ellipticity_margin(Symbol::rational(1) + Complex(1.0)) < 1e-12);
}

TEST_CASE("winding numbers against the argument oracle") {
  for (int n = -3; n <= 3; ++n) {
    CHECK(winding_number(Symbol::rational(n)) == n);
    CHECK(winding_oracle(Symbol::rational(n)) == n);
  }
  CHECK(winding_number(Symbol::constant(5.0)) == 0);
  const Symbol shifted = Symbol::rational(1) + Complex(3.0);
  CHECK(winding_number(shifted) == 0);
  CHECK(winding_oracle(shifted) == 0);
  CHECK_THROWS_AS(winding_number(Symbol::rational(1) + Complex(1.0)), Error);
}

TEST_CASE("winding number is additive and scale invariant") {
  for (int m = -2; m <= 2; ++m) {
    for (int n = -2; n <= 2; ++n) {
      const Symbol a = Symbol::rational(m) + Complex(0.1);
      const Symbol b = Symbol::rational(n);
      CHECK(winding_number(a * b) == winding_number(a) + winding_number(b));
    }
  }
  const Symbol c1 = Symbol::rational(1) + Complex(0.5);  // encloses the origin
  const Symbol c2 = Symbol::rational(-1) + Complex(2.0);  // does not
  CHECK(winding_number(c1 * c2) == winding_number(c1) + winding_number(c2));
  for (Complex c : {Complex(2.0, 0.0), Complex(-1.0, 3.0), Complex(0.0, -0.01)}) {
    CHECK(winding_number(c * c1) == winding_number(c1));
  }
}

TEST_CASE("inversion") {
  for (int n = -3; n <= 3; ++n) {
    const auto inv = invert(Symbol::rational(n));
    REQUIRE(rational_exponent(inv.symbol));
    CHECK(*rational_exponent(inv.symbol) == -n);
  }
  const auto half = invert(Symbol::constant(2.0));
  CHECK(half.symbol.kind() == SymbolKind::Constant);
  CHECK(half.symbol.at_infinity() == Complex(0.5));

  const Symbol a = Symbol::rational(1) + Complex(3.0);
  const auto inv = invert(a);
  CHECK(inv.bound_holds);
  double worst = 0.0;
  for (int j = 0; j < 10000; ++j) {
    const double xi = std::tan(-0.5 * kPi + kPi * (j + 0.5) / 10000.0);
    worst = std::max(worst, std::abs(a(xi) * inv.symbol(xi) - 1.0));
  }
  CHECK(worst < 1e-12);
  CHECK_THROWS_AS(invert(Symbol::rational(1) + Complex(1.0)), Error);
}

TEST_CASE("PL approximation") {
  // Fixed point: b already PL on the node lattice.
  const Symbol b = tent();
  const auto c = pl_approximate(b, 0.25, 4.0);
  CHECK(c.sup_error < 1e-14);
  CHECK(c.variation == doctest::Approx(variation(b)));

  const auto k = pl_approximate(Symbol::constant(Complex(1.0, 2.0)));
  CHECK(k.sup_error == 0.0);
  CHECK(k.variation == 0.0);

  const auto r = pl_approximate(Symbol::rational(1));
  CHECK(r.variation <= 2.0 * kPi + 1e-9);
  CHECK(Symbol::piecewise_linear(r.pl).continuous_on_rdot());

  CHECK_THROWS_AS(pl_approximate(Symbol::piecewise_linear(PLData::normal_form({0.0}, 1.0, -1.0, {}))), Error);
}

TEST_CASE("PL approximation never increases variation") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 4; ++trial) {
    const Symbol b = Symbol::sum({random_pl(rng, 12, Complex(2.0, 0.0)), Symbol::rational(trial - 2)});
    const auto c = pl_approximate(b, 0.125, 32.0);
    CHECK(c.variation <= c.variation_target + 1e-9);
  }
}

TEST_CASE("Mobius pullback") {
  for (int n = -3; n <= 3; ++n) {
    double worst = 0.0;
    for (int j = 0; j < 1000; ++j) {
      const double theta = 2.0 * kPi * j / 1000.0;
      worst = std::max(worst, std::abs(mobius_pullback(Symbol::rational(n), theta) - std::polar(1.0, n * theta)));
    }
    CHECK(worst < 1e-10);
  }
  CHECK(mobius_pullback(Symbol::constant(Complex(2.0, -1.0)), 1.3) == Complex(2.0, -1.0));
  const Symbol t = tent() + Complex(7.0);
  CHECK(mobius_pullback(t, 0.0) == t.at_infinity());
}

TEST_CASE("power and homotopy") {
  CHECK_THROWS_AS(Symbol::power(Symbol::rational(1), 0.5), Error);
  CHECK_THROWS_AS(Symbol::power(Symbol::rational(1) + Complex(3.0), 1.5), Error);

  // r_-2 r_2 folds to 1, so every h_t is r_2 exactly.
  const Symbol r2 = Symbol::rational(2);
  for (double t : {0.0, 0.3, 1.0}) {
    const Symbol h = homotopy(r2, t);
    REQUIRE(rational_exponent(h));
    CHECK(*rational_exponent(h) == 2);
  }

  const Symbol b = Symbol::rational(1) + Complex(2.0);
  const auto grid = verification_grid(b, 2048);
  double start = 0.0;
  double end = 0.0;
  for (double xi : grid) {
    start = std::max(start, std::abs(homotopy(b, 0.0)(xi) - 1.0));
    end = std::max(end, std::abs(homotopy(b, 1.0)(xi) - b(xi)));
  }
  CHECK(start < 1e-10);
  CHECK(end < 1e-10);

  // Square root squared gives back the base along the continued branch.
  const Symbol s = Symbol::power(b, 0.5);
  for (double xi : {-3.0, 0.0, 0.2, 11.0}) CHECK(std::abs(s(xi) * s(xi) - b(xi)) < 1e-13);
}

TEST_CASE("homotopy trace margins and bounds") {
  const Symbol b = Symbol::rational(1) + Complex(2.0);
  const std::vector<double> ts{0.0, 0.25, 0.5, 0.75, 1.0};
  const auto trace = homotopy_trace(b, ts);
  CHECK(trace.kappa == 0);
  for (std::size_t s = 0; s < ts.size(); ++s) {
    CHECK(trace.margin[s] > 0.0);
    CHECK(trace.power_variation[s] <= trace.power_variation_bound[s] * (1.0 + 1e-6) + 1e-9);
  }
  CHECK(trace.sup_distance[0] == 0.0);
}
