#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "whlab/grid.hpp"

namespace whlab {

/// Piecewise-linear function in the normal form
///   a = c0 on (-inf, x1],  c_k + d_k xi on (x_k, x_{k+1}],  d0 on (x_n, inf).
struct PLData {
  std::vector<double> vertices;
  Complex left_value;
  Complex right_value;
  std::vector<std::pair<Complex, Complex>> segments;  // (c_k, d_k), k = 1..n-1
  bool continuous_on_rdot = false;

  /// Validates the layout and records whether the function is continuous on R
  /// and has equal limits at -inf and +inf.
  static PLData normal_form(std::vector<double> vertices, Complex left, Complex right,
                            std::vector<std::pair<Complex, Complex>> segments);

  /// Linear interpolation through (vertices[k], values[k]); constant tails.
  static PLData interpolate(std::vector<double> vertices, const std::vector<Complex>& values,
                            Complex left_tail, Complex right_tail);
  static PLData interpolate(std::vector<double> vertices, const std::vector<Complex>& values);

  Complex operator()(double xi) const;
  /// Exact total variation: segment lengths plus any jumps at vertices.
  double variation() const;
  Index size() const { return static_cast<Index>(vertices.size()); }
};

enum class SymbolKind { Constant, PiecewiseLinear, Rational, Sum, Product, Power, Scaled, Reciprocal, Conjugate };

struct SymbolNode;

/// Immutable closed-form function on the one-point compactification of R.
/// Copies share the underlying tree.
class Symbol {
 public:
  static Symbol constant(Complex c);
  /// r_n(xi) = ((xi - i) / (xi + i))^n.
  static Symbol rational(int n);
  static Symbol piecewise_linear(PLData pl);
  static Symbol sum(std::vector<Symbol> parts);
  /// Flattens nested products and folds rational and constant factors
  /// (r_m r_n = r_{m+n}).
  static Symbol product(std::vector<Symbol> parts);
  /// base^t on the argument branch that is principal at infinity and continued
  /// along xi. Requires base elliptic with winding number 0.
  static Symbol power(const Symbol& base, double t);
  static Symbol scaled(const Symbol& s, Complex factor);
  static Symbol reciprocal(const Symbol& base);
  static Symbol conjugate(const Symbol& base);

  /// Value at xi; +-infinity returns the value at infinity.
  Complex operator()(double xi) const;
  Eigen::VectorXcd operator()(const Eigen::VectorXd& xi) const;
  Complex at_infinity() const;

  SymbolKind kind() const;
  const SymbolNode& node() const { return *node_; }
  /// Sorted finite points where the symbol may fail to be smooth.
  const std::vector<double>& breakpoints() const;
  bool continuous_on_rdot() const;
  std::string describe() const;

 private:
  explicit Symbol(std::shared_ptr<const SymbolNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const SymbolNode> node_;
};

namespace node {

struct Constant {
  Complex value;
};
struct PiecewiseLinear {
  PLData pl;
};
struct Rational {
  int n;
};
struct Sum {
  std::vector<Symbol> parts;
};
struct Product {
  std::vector<Symbol> parts;
};

/// Continuous argument of the base sampled along theta = 2 atan(xi) in [-pi, pi].
struct BranchTable {
  std::vector<double> theta;
  std::vector<Complex> value;
  std::vector<double> arg;
};

struct Power {
  Symbol base;
  double t;
  std::shared_ptr<const BranchTable> branch;
};
struct Scaled {
  Symbol s;
  Complex factor;
};
struct Reciprocal {
  Symbol base;
};
struct Conjugate {
  Symbol base;
};

}  // namespace node

struct SymbolNode {
  std::variant<node::Constant, node::PiecewiseLinear, node::Rational, node::Sum, node::Product,
               node::Power, node::Scaled, node::Reciprocal, node::Conjugate>
      data;
  Complex at_infinity;
  std::vector<double> breakpoints;
  bool continuous_on_rdot = true;
};

Complex evaluate(const Symbol& a, double xi);

Symbol operator+(const Symbol& a, const Symbol& b);
Symbol operator-(const Symbol& a, const Symbol& b);
Symbol operator*(const Symbol& a, const Symbol& b);
Symbol operator*(Complex c, const Symbol& a);
Symbol operator+(const Symbol& a, Complex c);
Symbol conj(const Symbol& a);

/// Integer n when the symbol is exactly c * r_n, used by the explicit kernel estimator.
std::optional<int> rational_exponent(const Symbol& a);

/// theta in [-pi, pi] <-> xi = tan(theta / 2); the endpoints are the point at infinity.
double xi_of_theta(double theta);
double theta_of_xi(double xi);

}  // namespace whlab
