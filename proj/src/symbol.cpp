#include "whlab/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "whlab/errors.hpp"
#include "whlab/symbol_analysis.hpp"

namespace whlab {

namespace {

constexpr Complex kI{0.0, 1.0};

Complex ipow(Complex w, int n) {
  Complex result{1.0, 0.0};
  unsigned e = static_cast<unsigned>(n < 0 ? -n : n);
  while (e != 0) {
    if (e & 1U) result *= w;
    w *= w;
    e >>= 1U;
  }
  return result;
}

Complex rational_value(int n, double xi) {
  if (n == 0 || std::isinf(xi)) return {1.0, 0.0};
  const Complex w = n > 0 ? (xi - kI) / (xi + kI) : (xi + kI) / (xi - kI);
  return ipow(w, n);
}

bool close(Complex a, Complex b) {
  return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a) + std::abs(b));
}

std::vector<double> merge_breakpoints(const std::vector<Symbol>& parts) {
  std::vector<double> out;
  for (const auto& p : parts) out.insert(out.end(), p.breakpoints().begin(), p.breakpoints().end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Complex power_value(const node::Power& p, double xi, Complex base_value) {
  const auto& table = *p.branch;
  const double theta = theta_of_xi(xi);
  const auto last = static_cast<double>(table.theta.size() - 1);
  auto m = static_cast<std::size_t>(std::lround((theta + std::numbers::pi) / (2.0 * std::numbers::pi) * last));
  m = std::min(m, table.theta.size() - 1);
  const double arg = table.arg[m] + std::arg(base_value / table.value[m]);
  return std::exp(p.t * Complex(std::log(std::abs(base_value)), arg));
}

}  // namespace

double xi_of_theta(double theta) {
  if (theta <= -std::numbers::pi) return -std::numeric_limits<double>::infinity();
  if (theta >= std::numbers::pi) return std::numeric_limits<double>::infinity();
  return std::tan(0.5 * theta);
}

double theta_of_xi(double xi) { return 2.0 * std::atan(xi); }

// ---------------------------------------------------------------------------
// PLData

PLData PLData::normal_form(std::vector<double> vertices, Complex left, Complex right,
                           std::vector<std::pair<Complex, Complex>> segments) {
  if (vertices.empty()) throw Error(Errc::InvalidArgument, "piecewise-linear symbol needs at least one vertex");
  for (std::size_t k = 1; k < vertices.size(); ++k) {
    if (!(vertices[k] > vertices[k - 1])) throw Error(Errc::InvalidArgument, "vertices must be strictly increasing");
  }
  if (segments.size() + 1 != vertices.size()) {
    throw Error(Errc::InvalidArgument, "piecewise-linear symbol with n vertices needs n-1 segments");
  }
  PLData pl;
  pl.vertices = std::move(vertices);
  pl.left_value = left;
  pl.right_value = right;
  pl.segments = std::move(segments);

  const auto n = pl.vertices.size();
  bool continuous = close(pl.left_value, pl.right_value);
  if (n == 1) {
    continuous = continuous && close(pl.left_value, pl.right_value);
  } else {
    const auto seg_value = [&](std::size_t k, double x) { return pl.segments[k].first + pl.segments[k].second * x; };
    continuous = continuous && close(pl.left_value, seg_value(0, pl.vertices[0]));
    for (std::size_t k = 1; k + 1 < n; ++k) {
      continuous = continuous && close(seg_value(k - 1, pl.vertices[k]), seg_value(k, pl.vertices[k]));
    }
    continuous = continuous && close(seg_value(n - 2, pl.vertices[n - 1]), pl.right_value);
  }
  pl.continuous_on_rdot = continuous;
  return pl;
}

PLData PLData::interpolate(std::vector<double> vertices, const std::vector<Complex>& values, Complex left_tail,
                           Complex right_tail) {
  if (values.size() != vertices.size()) throw Error(Errc::InvalidArgument, "one value per vertex required");
  if (vertices.empty()) throw Error(Errc::InvalidArgument, "piecewise-linear symbol needs at least one vertex");
  std::vector<std::pair<Complex, Complex>> segments;
  segments.reserve(vertices.size() - 1);
  for (std::size_t k = 0; k + 1 < vertices.size(); ++k) {
    const double dx = vertices[k + 1] - vertices[k];
    if (!(dx > 0.0)) throw Error(Errc::InvalidArgument, "vertices must be strictly increasing");
    const Complex slope = (values[k + 1] - values[k]) / dx;
    segments.emplace_back(values[k] - slope * vertices[k], slope);
  }
  auto pl = normal_form(std::move(vertices), left_tail, right_tail, std::move(segments));
  // Interpolation is continuous by construction; the generic check can be fooled by
  // cancellation in c_k + d_k x_k on wide windows.
  pl.continuous_on_rdot = close(left_tail, values.front()) && close(right_tail, values.back()) &&
                          close(left_tail, right_tail);
  return pl;
}

PLData PLData::interpolate(std::vector<double> vertices, const std::vector<Complex>& values) {
  if (values.empty()) throw Error(Errc::InvalidArgument, "one value per vertex required");
  const Complex l = values.front();
  const Complex r = values.back();
  return interpolate(std::move(vertices), values, l, r);
}

Complex PLData::operator()(double xi) const {
  if (std::isnan(xi)) return {std::nan(""), std::nan("")};
  if (xi <= vertices.front()) return xi == -std::numeric_limits<double>::infinity() ? left_value : left_value;
  if (xi > vertices.back()) return right_value;
  const auto it = std::lower_bound(vertices.begin(), vertices.end(), xi);
  const auto k = static_cast<std::size_t>(it - vertices.begin()) - 1;
  return segments[k].first + segments[k].second * xi;
}

double PLData::variation() const {
  const auto n = vertices.size();
  if (n == 1) return std::abs(left_value - right_value);
  const auto seg_value = [&](std::size_t k, double x) { return segments[k].first + segments[k].second * x; };
  double v = std::abs(left_value - seg_value(0, vertices[0]));
  for (std::size_t k = 0; k + 1 < n; ++k) {
    v += std::abs(segments[k].second) * (vertices[k + 1] - vertices[k]);
    if (k + 2 < n) v += std::abs(seg_value(k, vertices[k + 1]) - seg_value(k + 1, vertices[k + 1]));
  }
  v += std::abs(seg_value(n - 2, vertices[n - 1]) - right_value);
  return v;
}

// ---------------------------------------------------------------------------
// Symbol construction

Symbol Symbol::constant(Complex c) {
  auto n = std::make_shared<SymbolNode>();
  n->data = node::Constant{c};
  n->at_infinity = c;
  return Symbol(std::move(n));
}

Symbol Symbol::rational(int k) {
  if (k == 0) return constant(1.0);
  auto n = std::make_shared<SymbolNode>();
  n->data = node::Rational{k};
  n->at_infinity = 1.0;
  return Symbol(std::move(n));
}

Symbol Symbol::piecewise_linear(PLData pl) {
  auto n = std::make_shared<SymbolNode>();
  n->breakpoints = pl.vertices;
  n->continuous_on_rdot = pl.continuous_on_rdot;
  n->at_infinity = close(pl.left_value, pl.right_value) ? pl.right_value : 0.5 * (pl.left_value + pl.right_value);
  n->data = node::PiecewiseLinear{std::move(pl)};
  return Symbol(std::move(n));
}

Symbol Symbol::sum(std::vector<Symbol> parts) {
  std::vector<Symbol> flat;
  Complex c{0.0, 0.0};
  bool has_constant = false;
  for (auto& p : parts) {
    if (const auto* s = std::get_if<node::Sum>(&p.node().data)) {
      for (const auto& q : s->parts) flat.push_back(q);
    } else if (const auto* k = std::get_if<node::Constant>(&p.node().data)) {
      c += k->value;
      has_constant = true;
    } else {
      flat.push_back(p);
    }
  }
  if (has_constant && (c != Complex(0.0, 0.0) || flat.empty())) flat.push_back(constant(c));
  if (flat.empty()) return constant(0.0);
  if (flat.size() == 1) return flat.front();

  auto n = std::make_shared<SymbolNode>();
  n->at_infinity = 0.0;
  for (const auto& p : flat) {
    n->at_infinity += p.at_infinity();
    n->continuous_on_rdot = n->continuous_on_rdot && p.continuous_on_rdot();
  }
  n->breakpoints = merge_breakpoints(flat);
  n->data = node::Sum{std::move(flat)};
  return Symbol(std::move(n));
}

Symbol Symbol::product(std::vector<Symbol> parts) {
  std::vector<Symbol> others;
  Complex c{1.0, 0.0};
  int exponent = 0;
  std::vector<Symbol> queue(parts.begin(), parts.end());
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const Symbol p = queue[i];
    const auto& d = p.node().data;
    if (const auto* s = std::get_if<node::Product>(&d)) {
      queue.insert(queue.end(), s->parts.begin(), s->parts.end());
    } else if (const auto* k = std::get_if<node::Constant>(&d)) {
      c *= k->value;
    } else if (const auto* r = std::get_if<node::Rational>(&d)) {
      exponent += r->n;
    } else if (const auto* sc = std::get_if<node::Scaled>(&d)) {
      c *= sc->factor;
      queue.push_back(sc->s);
    } else {
      others.push_back(p);
    }
  }
  if (c == Complex(0.0, 0.0)) return constant(0.0);
  if (exponent != 0) others.push_back(rational(exponent));
  Symbol core = constant(1.0);
  if (others.size() == 1) {
    core = others.front();
  } else if (!others.empty()) {
    auto n = std::make_shared<SymbolNode>();
    n->at_infinity = 1.0;
    for (const auto& p : others) {
      n->at_infinity *= p.at_infinity();
      n->continuous_on_rdot = n->continuous_on_rdot && p.continuous_on_rdot();
    }
    n->breakpoints = merge_breakpoints(others);
    n->data = node::Product{std::move(others)};
    core = Symbol(std::move(n));
  }
  return scaled(core, c);
}

Symbol Symbol::scaled(const Symbol& s, Complex factor) {
  if (factor == Complex(1.0, 0.0)) return s;
  if (const auto* k = std::get_if<node::Constant>(&s.node().data)) return constant(factor * k->value);
  if (const auto* sc = std::get_if<node::Scaled>(&s.node().data)) return scaled(sc->s, factor * sc->factor);
  auto n = std::make_shared<SymbolNode>();
  n->at_infinity = factor * s.at_infinity();
  n->breakpoints = s.breakpoints();
  n->continuous_on_rdot = s.continuous_on_rdot();
  n->data = node::Scaled{s, factor};
  return Symbol(std::move(n));
}

Symbol Symbol::reciprocal(const Symbol& base) {
  const auto& d = base.node().data;
  if (const auto* k = std::get_if<node::Constant>(&d)) {
    if (k->value == Complex(0.0, 0.0)) throw Error(Errc::NonElliptic, "reciprocal of the zero constant");
    return constant(1.0 / k->value);
  }
  if (const auto* r = std::get_if<node::Rational>(&d)) return rational(-r->n);
  if (const auto* sc = std::get_if<node::Scaled>(&d)) return scaled(reciprocal(sc->s), 1.0 / sc->factor);
  if (const auto* rc = std::get_if<node::Reciprocal>(&d)) return rc->base;
  if (const auto* p = std::get_if<node::Product>(&d)) {
    std::vector<Symbol> inv;
    for (const auto& q : p->parts) inv.push_back(reciprocal(q));
    return product(std::move(inv));
  }
  auto n = std::make_shared<SymbolNode>();
  n->at_infinity = 1.0 / base.at_infinity();
  n->breakpoints = base.breakpoints();
  n->continuous_on_rdot = base.continuous_on_rdot();
  n->data = node::Reciprocal{base};
  return Symbol(std::move(n));
}

Symbol Symbol::conjugate(const Symbol& base) {
  const auto& d = base.node().data;
  if (const auto* k = std::get_if<node::Constant>(&d)) return constant(std::conj(k->value));
  if (const auto* r = std::get_if<node::Rational>(&d)) return rational(-r->n);
  if (const auto* sc = std::get_if<node::Scaled>(&d)) return scaled(conjugate(sc->s), std::conj(sc->factor));
  if (const auto* cj = std::get_if<node::Conjugate>(&d)) return cj->base;
  if (const auto* rc = std::get_if<node::Reciprocal>(&d)) return reciprocal(conjugate(rc->base));
  if (const auto* pl = std::get_if<node::PiecewiseLinear>(&d)) {
    PLData c = pl->pl;
    c.left_value = std::conj(c.left_value);
    c.right_value = std::conj(c.right_value);
    for (auto& [a, b] : c.segments) {
      a = std::conj(a);
      b = std::conj(b);
    }
    return piecewise_linear(std::move(c));
  }
  if (const auto* s = std::get_if<node::Sum>(&d)) {
    std::vector<Symbol> parts;
    for (const auto& q : s->parts) parts.push_back(conjugate(q));
    return sum(std::move(parts));
  }
  if (const auto* p = std::get_if<node::Product>(&d)) {
    std::vector<Symbol> parts;
    for (const auto& q : p->parts) parts.push_back(conjugate(q));
    return product(std::move(parts));
  }
  auto n = std::make_shared<SymbolNode>();
  n->at_infinity = std::conj(base.at_infinity());
  n->breakpoints = base.breakpoints();
  n->continuous_on_rdot = base.continuous_on_rdot();
  n->data = node::Conjugate{base};
  return Symbol(std::move(n));
}

Symbol Symbol::power(const Symbol& base, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(Errc::InvalidArgument, "power exponent must lie in [0, 1]");
  if (t == 0.0) return constant(1.0);
  if (const auto* k = std::get_if<node::Constant>(&base.node().data)) {
    if (k->value == Complex(0.0, 0.0)) throw Error(Errc::NonElliptic, "power of the zero constant");
    return constant(std::pow(k->value, t));
  }
  if (t == 1.0) return base;
  auto n = std::make_shared<SymbolNode>();
  auto table = detail::build_branch_table(base);
  const Complex inf = base.at_infinity();
  n->at_infinity = std::exp(t * Complex(std::log(std::abs(inf)), std::arg(inf)));
  n->breakpoints = base.breakpoints();
  n->continuous_on_rdot = base.continuous_on_rdot();
  n->data = node::Power{base, t, std::move(table)};
  return Symbol(std::move(n));
}

// ---------------------------------------------------------------------------
// Evaluation

Complex Symbol::operator()(double xi) const {
  if (std::isinf(xi)) return node_->at_infinity;
  return std::visit(
      [&](const auto& d) -> Complex {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, node::Constant>) {
          return d.value;
        } else if constexpr (std::is_same_v<T, node::PiecewiseLinear>) {
          return d.pl(xi);
        } else if constexpr (std::is_same_v<T, node::Rational>) {
          return rational_value(d.n, xi);
        } else if constexpr (std::is_same_v<T, node::Sum>) {
          Complex s{0.0, 0.0};
          for (const auto& p : d.parts) s += p(xi);
          return s;
        } else if constexpr (std::is_same_v<T, node::Product>) {
          Complex s{1.0, 0.0};
          for (const auto& p : d.parts) s *= p(xi);
          return s;
        } else if constexpr (std::is_same_v<T, node::Power>) {
          return power_value(d, xi, d.base(xi));
        } else if constexpr (std::is_same_v<T, node::Scaled>) {
          return d.factor * d.s(xi);
        } else if constexpr (std::is_same_v<T, node::Reciprocal>) {
          return 1.0 / d.base(xi);
        } else {
          return std::conj(d.base(xi));
        }
      },
      node_->data);
}

Eigen::VectorXcd Symbol::operator()(const Eigen::VectorXd& xi) const {
  const Index n = xi.size();
  Eigen::VectorXcd out(n);
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, node::Sum>) {
          out.setZero();
          for (const auto& p : d.parts) out += p(xi);
        } else if constexpr (std::is_same_v<T, node::Product>) {
          out.setOnes();
          for (const auto& p : d.parts) out.array() *= p(xi).array();
        } else if constexpr (std::is_same_v<T, node::Scaled>) {
          out = d.factor * d.s(xi);
        } else if constexpr (std::is_same_v<T, node::Reciprocal>) {
          out = d.base(xi).cwiseInverse();
        } else if constexpr (std::is_same_v<T, node::Conjugate>) {
          out = d.base(xi).conjugate();
        } else if constexpr (std::is_same_v<T, node::Power>) {
          const Eigen::VectorXcd b = d.base(xi);
          for (Index j = 0; j < n; ++j) out(j) = power_value(d, xi(j), b(j));
        } else {
          for (Index j = 0; j < n; ++j) out(j) = (*this)(xi(j));
        }
      },
      node_->data);
  for (Index j = 0; j < n; ++j) {
    if (std::isinf(xi(j))) out(j) = node_->at_infinity;
  }
  return out;
}

Complex Symbol::at_infinity() const { return node_->at_infinity; }

SymbolKind Symbol::kind() const { return static_cast<SymbolKind>(node_->data.index()); }

const std::vector<double>& Symbol::breakpoints() const { return node_->breakpoints; }

bool Symbol::continuous_on_rdot() const { return node_->continuous_on_rdot; }

std::string Symbol::describe() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        auto list = [&](const char* name, const std::vector<Symbol>& parts) {
          os << name << '(';
          for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? ", " : "") << parts[i].describe();
          os << ')';
        };
        if constexpr (std::is_same_v<T, node::Constant>) {
          os << "const(" << d.value.real() << (d.value.imag() < 0 ? "" : "+") << d.value.imag() << "i)";
        } else if constexpr (std::is_same_v<T, node::PiecewiseLinear>) {
          os << "pl[" << d.pl.vertices.size() << " vertices]";
        } else if constexpr (std::is_same_v<T, node::Rational>) {
          os << "r_" << d.n;
        } else if constexpr (std::is_same_v<T, node::Sum>) {
          list("sum", d.parts);
        } else if constexpr (std::is_same_v<T, node::Product>) {
          list("product", d.parts);
        } else if constexpr (std::is_same_v<T, node::Power>) {
          os << "power(" << d.base.describe() << ", " << d.t << ')';
        } else if constexpr (std::is_same_v<T, node::Scaled>) {
          os << "scaled(" << d.s.describe() << ", " << d.factor.real() << (d.factor.imag() < 0 ? "" : "+")
             << d.factor.imag() << "i)";
        } else if constexpr (std::is_same_v<T, node::Reciprocal>) {
          os << "reciprocal(" << d.base.describe() << ')';
        } else {
          os << "conj(" << d.base.describe() << ')';
        }
      },
      node_->data);
  return os.str();
}

Complex evaluate(const Symbol& a, double xi) { return a(xi); }

Symbol operator+(const Symbol& a, const Symbol& b) { return Symbol::sum({a, b}); }
Symbol operator-(const Symbol& a, const Symbol& b) { return Symbol::sum({a, Symbol::scaled(b, -1.0)}); }
Symbol operator*(const Symbol& a, const Symbol& b) { return Symbol::product({a, b}); }
Symbol operator*(Complex c, const Symbol& a) { return Symbol::scaled(a, c); }
Symbol operator+(const Symbol& a, Complex c) { return Symbol::sum({a, Symbol::constant(c)}); }
Symbol conj(const Symbol& a) { return Symbol::conjugate(a); }

std::optional<int> rational_exponent(const Symbol& a) {
  const auto& d = a.node().data;
  if (const auto* r = std::get_if<node::Rational>(&d)) return r->n;
  if (const auto* k = std::get_if<node::Constant>(&d)) {
    if (k->value != Complex(0.0, 0.0)) return 0;
    return std::nullopt;
  }
  if (const auto* sc = std::get_if<node::Scaled>(&d)) {
    if (sc->factor == Complex(0.0, 0.0)) return std::nullopt;
    return rational_exponent(sc->s);
  }
  return std::nullopt;
}

}  // namespace whlab
