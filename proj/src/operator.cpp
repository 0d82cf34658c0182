#include "whlab/operator.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <ostream>

#include "whlab/errors.hpp"
#include "whlab/fourier.hpp"

namespace whlab {

namespace {

constexpr Complex kI{0.0, 1.0};

std::string grid_label(const Domain& d) {
  return std::visit(
      [](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, HalfLineGrid>) {
          return "halfline(L=" + std::to_string(g.length) + ",N=" + std::to_string(g.cells) + ")";
        } else {
          return "line(X=" + std::to_string(g.half_width) + ",N=" + std::to_string(g.cells) + ")";
        }
      },
      d);
}

std::vector<std::string> alias_warnings(const Symbol& a, const LineGrid& grid) {
  std::vector<std::string> w;
  const auto& bp = a.breakpoints();
  double spacing = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < bp.size(); ++k) spacing = std::min(spacing, bp[k] - bp[k - 1]);
  if (spacing < grid.frequency_step()) {
    w.push_back("AliasWarning: symbol vertices are closer than the frequency spacing " +
                std::to_string(grid.frequency_step()));
  }
  return w;
}

Eigen::VectorXcd sign_multiplier(const LineGrid& grid, bool flip) {
  const Eigen::VectorXd xi = grid.frequencies();
  Eigen::VectorXcd m(xi.size());
  for (Index k = 0; k < xi.size(); ++k) m(k) = (xi(k) < 0.0) != flip ? 1.0 : -1.0;
  return m;
}

/// [D, S] for diagonal D: entry (i, j) = (d_i - d_j) S_ij.
Eigen::MatrixXcd diagonal_commutator(const Eigen::VectorXcd& d, const Eigen::MatrixXcd& s) {
  Eigen::MatrixXcd c(s.rows(), s.cols());
  for (Index j = 0; j < s.cols(); ++j) {
    for (Index i = 0; i < s.rows(); ++i) c(i, j) = (d(i) - d(j)) * s(i, j);
  }
  return c;
}

}  // namespace

LineGrid embedding_grid(const HalfLineGrid& grid, Index oversample) {
  if (oversample < 1) throw Error(Errc::InvalidArgument, "oversample must be at least 1");
  return LineGrid{static_cast<double>(oversample) * grid.length, 2 * oversample * grid.cells};
}

OperatorMatrix fourier_convolution(const Symbol& a, const LineGrid& grid) {
  const Eigen::VectorXcd m = a(warped_frequencies(grid));
  const Eigen::VectorXcd kernel = convolution_kernel(m);
  OperatorMatrix out{toeplitz_block(kernel, 0, grid.cells, 0, grid.cells), grid, grid,
                     "W0(" + a.describe() + ") on " + grid_label(grid), alias_warnings(a, grid)};
  return out;
}

OperatorMatrix wiener_hopf(const Symbol& a, const HalfLineGrid& grid, const WienerHopfOptions& opts) {
  if (opts.range_factor < 1 || opts.range_factor > opts.oversample) {
    throw Error(Errc::InvalidArgument, "range_factor must lie in [1, oversample]");
  }
  const LineGrid line = embedding_grid(grid, opts.oversample);
  const Eigen::VectorXcd kernel = convolution_kernel(a(warped_frequencies(line)));
  const Index rows = opts.range_factor * grid.cells;
  const HalfLineGrid range{grid.length * static_cast<double>(opts.range_factor), rows};
  OperatorMatrix out{toeplitz_block(kernel, 0, rows, 0, grid.cells), grid, range,
                     "W(" + a.describe() + ") on " + grid_label(grid), alias_warnings(a, line)};
  return out;
}

OperatorMatrix cauchy_singular_line(const LineGrid& grid, bool flip) {
  const Eigen::VectorXcd kernel = convolution_kernel(sign_multiplier(grid, flip));
  return OperatorMatrix{toeplitz_block(kernel, 0, grid.cells, 0, grid.cells), grid, grid,
                        std::string(flip ? "S_R(flipped)" : "S_R") + " on " + grid_label(grid), {}};
}

OperatorMatrix riesz_projection(const LineGrid& grid, bool flip) {
  OperatorMatrix s = cauchy_singular_line(grid, flip);
  s.entries = 0.5 * (s.entries + Eigen::MatrixXcd::Identity(grid.cells, grid.cells));
  s.label = std::string(flip ? "P+(flipped)" : "P+") + " on " + grid_label(grid);
  return s;
}

OperatorMatrix cauchy_singular_circle(Index samples) {
  if (samples < 2) throw Error(Errc::InvalidArgument, "circle needs at least two samples");
  const double kd = static_cast<double>(samples);
  Eigen::MatrixXcd s(samples, samples);
  for (Index l = 0; l < samples; ++l) {
    for (Index j = 0; j < samples; ++j) {
      Complex v{0.0, 0.0};
      for (Index m = -samples / 2; m < samples - samples / 2; ++m) {
        const double sign = m >= 0 ? 1.0 : -1.0;
        v += sign * std::polar(1.0 / kd, 2.0 * std::numbers::pi * static_cast<double>(m * (j - l)) / kd);
      }
      s(j, l) = v;
    }
  }
  const HalfLineGrid circle{2.0 * std::numbers::pi, samples};
  return OperatorMatrix{std::move(s), circle, circle, "S_T on " + std::to_string(samples) + " circle samples", {}};
}

Eigen::VectorXcd mobius_transform(const std::function<Complex(Complex)>& f, const Eigen::VectorXd& x, double p) {
  const double c = std::pow(2.0, 1.0 - 1.0 / p);
  Eigen::VectorXcd out(x.size());
  for (Index j = 0; j < x.size(); ++j) {
    const Complex z = x(j) + kI;
    out(j) = c / z * f((x(j) - kI) / z);
  }
  return out;
}

Eigen::VectorXcd inverse_mobius_transform(const std::function<Complex(double)>& g, const Eigen::VectorXd& theta,
                                          double p) {
  const double c = std::pow(2.0, 1.0 / p);
  Eigen::VectorXcd out(theta.size());
  for (Index j = 0; j < theta.size(); ++j) {
    if (std::remainder(theta(j), 2.0 * std::numbers::pi) == 0.0) {
      throw Error(Errc::SingularPoint, "t = 1 maps to the point at infinity");
    }
    const Complex t = std::polar(1.0, theta(j));
    const Complex x = kI * (1.0 + t) / (1.0 - t);
    out(j) = kI * c / (1.0 - t) * g(x.real());
  }
  return out;
}

Eigen::VectorXcd cauchy_via_circle(const std::function<Complex(double)>& g, const Eigen::VectorXd& x, Index samples) {
  const double kd = static_cast<double>(samples);
  Eigen::VectorXd theta(samples);
  for (Index j = 0; j < samples; ++j) theta(j) = 2.0 * std::numbers::pi * (static_cast<double>(j) + 0.5) / kd;
  const Eigen::VectorXcd f = inverse_mobius_transform(g, theta, 2.0);
  // Coefficients on the shifted grid: c_m = e^{-i pi m / K} * DFT(f)_m / K.
  const Eigen::VectorXcd raw = circle_coefficients(f);
  Eigen::VectorXcd coeff(samples);
  for (Index k = 0; k < samples; ++k) {
    const Index m = k < samples / 2 ? k : k - samples;
    coeff(k) = std::polar(1.0, -std::numbers::pi * static_cast<double>(m) / kd) * raw(k) * (m >= 0 ? 1.0 : -1.0);
  }
  const double c = std::pow(2.0, 0.5);
  Eigen::VectorXcd out(x.size());
  for (Index j = 0; j < x.size(); ++j) {
    const Complex z = x(j) + kI;
    const double phi = std::arg((x(j) - kI) / z);
    Complex v{0.0, 0.0};
    for (Index k = 0; k < samples; ++k) {
      const Index m = k < samples / 2 ? k : k - samples;
      v += coeff(k) * std::polar(1.0, static_cast<double>(m) * phi);
    }
    out(j) = c / z * v;
  }
  return out;
}

OperatorMatrix toeplitz_section(const Symbol& a, Index n, Index rows, Index circle_samples) {
  if (n < 1) throw Error(Errc::InvalidArgument, "section size must be positive");
  if (rows == 0) rows = n;
  Index k = circle_samples;
  if (k == 0) k = static_cast<Index>(std::bit_ceil(static_cast<std::uint64_t>(std::max<Index>(8 * (rows + n), 8192))));
  if (k < rows + n) throw Error(Errc::InvalidArgument, "too few circle samples for the section");

  // theta_j = 2 pi j / K; B0 a there is a(-cot(theta/2)) and a(infinity) at theta = 0.
  Eigen::VectorXd xi(k);
  xi(0) = std::numeric_limits<double>::infinity();
  for (Index j = 1; j < k; ++j) xi(j) = -1.0 / std::tan(std::numbers::pi * static_cast<double>(j) / static_cast<double>(k));
  const Eigen::VectorXcd c = circle_coefficients(a(xi));

  OperatorMatrix out;
  out.entries.resize(rows, n);
  for (Index col = 0; col < n; ++col) {
    for (Index row = 0; row < rows; ++row) out.entries(row, col) = c(((row - col) % k + k) % k);
  }
  double tail = 0.0;
  const Index reach = std::max(rows, n);
  for (Index m = reach; m <= k / 2; ++m) tail = std::max({tail, std::abs(c(m)), std::abs(c(k - m))});
  if (tail > 1e-12) {
    out.warnings.push_back("AliasWarning: Fourier coefficients beyond the section are still " + std::to_string(tail));
  }
  out.domain = HalfLineGrid{static_cast<double>(n), n};
  out.range = HalfLineGrid{static_cast<double>(rows), rows};
  out.label = "T(B0 " + a.describe() + ") " + std::to_string(rows) + "x" + std::to_string(n);
  return out;
}

OperatorMatrix adjoint(const OperatorMatrix& a) {
  const double hd = std::visit([](const auto& g) { return g.step(); }, a.domain);
  const double hr = std::visit([](const auto& g) { return g.step(); }, a.range);
  OperatorMatrix out{(hr / hd) * a.entries.adjoint(), a.range, a.domain, "adjoint(" + a.label + ")", a.warnings};
  return out;
}

OperatorMatrix semi_commutator(const Symbol& a, const Symbol& b, const HalfLineGrid& grid, Index oversample) {
  const WienerHopfOptions opts{oversample, 1};
  const OperatorMatrix wa = wiener_hopf(a, grid, opts);
  const OperatorMatrix wb = wiener_hopf(b, grid, opts);
  const OperatorMatrix wab = wiener_hopf(a * b, grid, opts);
  OperatorMatrix out{wa.entries * wb.entries - wab.entries, grid, grid,
                     "W(a)W(b)-W(ab) for a=" + a.describe() + ", b=" + b.describe(), wa.warnings};
  out.warnings.insert(out.warnings.end(), wb.warnings.begin(), wb.warnings.end());
  return out;
}

OperatorMatrix semi_commutator_embedded(const Symbol& a, const Symbol& b, const HalfLineGrid& grid) {
  const LineGrid line = embedding_grid(grid, 1);
  const OperatorMatrix sc = semi_commutator(a, b, grid, 1);
  OperatorMatrix out{Eigen::MatrixXcd::Zero(line.cells, line.cells), line, line, "l+ (" + sc.label + ") r+", sc.warnings};
  out.entries.bottomRightCorner(grid.cells, grid.cells) = sc.entries;
  return out;
}

OperatorMatrix semi_commutator_fourier(const Symbol& a, const Symbol& b, const HalfLineGrid& grid, bool flip) {
  const LineGrid line = embedding_grid(grid, 1);
  const LineGrid dual = line.dual();
  const Eigen::VectorXd xi = warped_frequencies(line);
  const Eigen::MatrixXcd s = cauchy_singular_line(dual, flip).entries;
  const Eigen::MatrixXcd ca = diagonal_commutator(a(xi), s);
  const Eigen::MatrixXcd cb = diagonal_commutator(b(xi), s);
  const Eigen::MatrixXcd p = 0.5 * (s + Eigen::MatrixXcd::Identity(s.rows(), s.cols()));
  Eigen::MatrixXcd inner = ca * cb;
  inner = (inner * p).eval();
  inner = (inner * fourier_matrix(line)).eval();
  OperatorMatrix out{0.25 * (inverse_fourier_matrix(line) * inner), line, line,
                     "(1/4) F^-1 [a,S][b,S] P+ F for a=" + a.describe() + ", b=" + b.describe(), {}};
  return out;
}

double multiplier_norm_lower_bound(const Symbol& a, const LineGrid& grid, const std::vector<Eigen::VectorXcd>& tests) {
  const OperatorMatrix w = fourier_convolution(a, grid);
  double best = 0.0;
  for (const auto& f : tests) {
    const double nf = f.norm();
    if (nf > 0.0) best = std::max(best, (w.entries * f).norm() / nf);
  }
  return best;
}

void write_csv(const OperatorMatrix& a, std::ostream& out) {
  out.precision(17);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (j > 0) out << ',';
      out << a.entries(i, j).real() << ',' << a.entries(i, j).imag();
    }
    out << '\n';
  }
}

void write_binary(const OperatorMatrix& a, std::ostream& out) {
  static_assert(std::endian::native == std::endian::little, "binary export assumes a little-endian host");
  const std::int64_t dims[2] = {a.rows(), a.cols()};
  out.write(reinterpret_cast<const char*>(dims), sizeof dims);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      const double v[2] = {a.entries(i, j).real(), a.entries(i, j).imag()};
      out.write(reinterpret_cast<const char*>(v), sizeof v);
    }
  }
}

}  // namespace whlab
