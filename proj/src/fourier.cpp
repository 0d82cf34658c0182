#include "whlab/fourier.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "whlab/errors.hpp"

namespace whlab {

double frequency_warp(double xi, double h) { return std::tan(0.5 * xi * h) / std::tanh(0.5 * h); }

Eigen::VectorXd warped_frequencies(const LineGrid& grid) {
  Eigen::VectorXd xi = grid.frequencies();
  const double h = grid.step();
  for (Index k = 0; k < xi.size(); ++k) xi(k) = frequency_warp(xi(k), h);
  return xi;
}

Eigen::VectorXcd convolution_kernel(const Eigen::VectorXcd& multiplier) {
  const Index m = multiplier.size();
  if (m < 2 || m % 2 != 0) throw Error(Errc::InvalidArgument, "line grids need an even number of cells");
  std::vector<Complex> in(multiplier.data(), multiplier.data() + m);
  std::vector<Complex> out;
  Eigen::FFT<double> fft;
  fft.fwd(out, in);

  const double md = static_cast<double>(m);
  Eigen::VectorXcd kernel(2 * m - 1);
  for (Index d = -(m - 1); d < m; ++d) {
    const Index wrapped = ((d % m) + m) % m;
    const double phase = -std::numbers::pi * (1.0 - md) * static_cast<double>(d) / md;
    kernel(d + m - 1) = std::polar(1.0 / md, std::remainder(phase, 2.0 * std::numbers::pi)) * out[static_cast<std::size_t>(wrapped)];
  }
  return kernel;
}

Eigen::MatrixXcd toeplitz_block(const Eigen::VectorXcd& kernel, Index row0, Index rows, Index col0, Index cols) {
  const Index m = (kernel.size() + 1) / 2;
  Eigen::MatrixXcd a(rows, cols);
  for (Index l = 0; l < cols; ++l) {
    for (Index j = 0; j < rows; ++j) {
      const Index d = (row0 + j) - (col0 + l);
      a(j, l) = kernel(d + m - 1);
    }
  }
  return a;
}

Eigen::MatrixXcd fourier_matrix(const LineGrid& grid) {
  const Eigen::VectorXd xi = grid.frequencies();
  const Eigen::VectorXd x = grid.nodes();
  const double h = grid.step();
  Eigen::MatrixXcd f(grid.cells, grid.cells);
  for (Index j = 0; j < grid.cells; ++j) {
    for (Index k = 0; k < grid.cells; ++k) f(k, j) = std::polar(h, xi(k) * x(j));
  }
  return f;
}

Eigen::MatrixXcd inverse_fourier_matrix(const LineGrid& grid) {
  const Eigen::VectorXd xi = grid.frequencies();
  const Eigen::VectorXd x = grid.nodes();
  const double scale = 1.0 / (static_cast<double>(grid.cells) * grid.step());
  Eigen::MatrixXcd f(grid.cells, grid.cells);
  for (Index k = 0; k < grid.cells; ++k) {
    for (Index j = 0; j < grid.cells; ++j) f(j, k) = std::polar(scale, -xi(k) * x(j));
  }
  return f;
}

Eigen::VectorXcd circle_coefficients(const Eigen::VectorXcd& samples) {
  std::vector<Complex> in(samples.data(), samples.data() + samples.size());
  std::vector<Complex> out;
  Eigen::FFT<double> fft;
  fft.fwd(out, in);
  Eigen::VectorXcd c(samples.size());
  for (Index k = 0; k < samples.size(); ++k) c(k) = out[static_cast<std::size_t>(k)] / static_cast<double>(samples.size());
  return c;
}

}  // namespace whlab
