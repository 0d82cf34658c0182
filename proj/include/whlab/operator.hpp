#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "whlab/grid.hpp"
#include "whlab/symbol.hpp"

namespace whlab {

/// Dense discretization of an operator: rows follow the range grid, columns the domain grid.
struct OperatorMatrix {
  Eigen::MatrixXcd entries;
  Domain domain;
  Domain range;
  std::string label;
  std::vector<std::string> warnings;

  Index rows() const { return entries.rows(); }
  Index cols() const { return entries.cols(); }
};

struct WienerHopfOptions {
  /// The half-line [0, L) sits inside the line grid [-oversample L, oversample L).
  Index oversample = 2;
  /// Rows cover [0, range_factor L); 2 gives the rectangular kernel-counting layout.
  Index range_factor = 1;
};

/// W0(a) = F^{-1} a F on a line grid.
OperatorMatrix fourier_convolution(const Symbol& a, const LineGrid& grid);
/// W(a) = r+ W0(a) l+.
OperatorMatrix wiener_hopf(const Symbol& a, const HalfLineGrid& grid, const WienerHopfOptions& opts = {});
/// Line grid carrying the half-line for the given options.
LineGrid embedding_grid(const HalfLineGrid& grid, Index oversample);

/// S_R = W0(-sgn xi) under the e^{+i xi x} transform convention; flip reverses the half-axis.
OperatorMatrix cauchy_singular_line(const LineGrid& grid, bool flip = false);
/// P+ = (I + S_R) / 2.
OperatorMatrix riesz_projection(const LineGrid& grid, bool flip = false);
/// S_T on K uniform circle samples theta_j = 2 pi j / K: +1 on modes k >= 0, -1 on k < 0.
OperatorMatrix cauchy_singular_circle(Index samples);

/// (B f)(x) = 2^{1-1/p} / (x + i) f((x - i) / (x + i)).
Eigen::VectorXcd mobius_transform(const std::function<Complex(Complex)>& f, const Eigen::VectorXd& x, double p = 2.0);
/// (B^{-1} g)(t) = i 2^{1/p} / (1 - t) g(i (1 + t) / (1 - t)) at t = e^{i theta}; t = 1 is SingularPoint.
Eigen::VectorXcd inverse_mobius_transform(const std::function<Complex(double)>& g, const Eigen::VectorXd& theta,
                                          double p = 2.0);
/// B S_T B^{-1} g at the points x, with S_T applied spectrally on K midpoint circle samples.
Eigen::VectorXcd cauchy_via_circle(const std::function<Complex(double)>& g, const Eigen::VectorXd& x, Index samples);

/// Finite section of the Toeplitz matrix of B0 a: entry (j, k) is the Fourier coefficient
/// of index j - k. rows = 0 means square.
OperatorMatrix toeplitz_section(const Symbol& a, Index n, Index rows = 0, Index circle_samples = 0);

/// Adjoint with respect to the discrete L2 pairings of domain and range.
OperatorMatrix adjoint(const OperatorMatrix& a);

/// W(a) W(b) - W(ab) on the half-line grid.
OperatorMatrix semi_commutator(const Symbol& a, const Symbol& b, const HalfLineGrid& grid, Index oversample = 2);
/// l+ (W(a) W(b) - W(ab)) r+ on the line grid [-L, L) with 2N cells.
OperatorMatrix semi_commutator_embedded(const Symbol& a, const Symbol& b, const HalfLineGrid& grid);
/// (1/4) F^{-1} [aI, S] [bI, S] P+ F on the same line grid, with S and P+ acting on the
/// frequency side. flip reverses the half-axis of S.
OperatorMatrix semi_commutator_fourier(const Symbol& a, const Symbol& b, const HalfLineGrid& grid, bool flip = false);

/// max ||W0(a) f|| / ||f|| over the given test functions; a lower bound for the multiplier norm.
double multiplier_norm_lower_bound(const Symbol& a, const LineGrid& grid, const std::vector<Eigen::VectorXcd>& tests);

/// Row-major "re,im" pairs, one matrix row per line.
void write_csv(const OperatorMatrix& a, std::ostream& out);
/// Header: int64 rows, int64 cols; then row-major little-endian float64 (re, im) pairs.
void write_binary(const OperatorMatrix& a, std::ostream& out);

}  // namespace whlab
