#pragma once

#include <Eigen/Core>

#include "whlab/grid.hpp"

namespace whlab {

/// Frequency at which a symbol is sampled for the discrete mode xi:
/// coth(h/2) tan(xi h / 2). It agrees with xi to second order near 0 and sends the
/// edge of the discrete band to infinity, so the discrete multiplier of a rational
/// symbol is exactly rational in the shift.
double frequency_warp(double xi, double h);
Eigen::VectorXd warped_frequencies(const LineGrid& grid);

/// Entries kappa(d), d = -(M-1)..M-1 (stored at d + M - 1), of the Toeplitz matrix
/// F^{-1} diag(m) F on a line grid with M cells.
Eigen::VectorXcd convolution_kernel(const Eigen::VectorXcd& multiplier);

/// rows x cols block of the Toeplitz matrix with entry (j, l) = kernel(j - l + row0 - col0).
Eigen::MatrixXcd toeplitz_block(const Eigen::VectorXcd& kernel, Index row0, Index rows, Index col0, Index cols);

/// (F f)_k = h sum_j f_j e^{i xi_k x_j}.
Eigen::MatrixXcd fourier_matrix(const LineGrid& grid);
/// (F^{-1} g)_j = (1 / (M h)) sum_k g_k e^{-i xi_k x_j}; exact inverse of fourier_matrix.
Eigen::MatrixXcd inverse_fourier_matrix(const LineGrid& grid);

/// Fourier coefficients c_m = (1/K) sum_j f(2 pi j / K) e^{-i m theta_j}, m = 0..K-1 (negative m at K + m).
Eigen::VectorXcd circle_coefficients(const Eigen::VectorXcd& samples);

}  // namespace whlab
