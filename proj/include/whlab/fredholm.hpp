#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "whlab/grid.hpp"
#include "whlab/symbol.hpp"
#include "whlab/symbol_analysis.hpp"

namespace whlab {

struct KernelBasis {
  int n = 0;
  HalfLineGrid grid;
  std::vector<GridFunction> functions;    // psi_k = W(r_k) psi_0, computed on the grid
  std::vector<GridFunction> closed_form;  // sqrt(2) e^{-x} L_k(2x)
  std::vector<double> cross_validation;   // ||numeric - closed|| / ||closed||
  std::vector<double> residuals;          // ||W(r_-n) psi_k|| / ||psi_k||
  double gram_condition = 0.0;
};

/// Laguerre polynomial L_k(x) by the three-term recurrence.
double laguerre(int k, double x);

/// Throws CrossValidationFailure when a numeric psi_k differs from the closed form by more than tol.
KernelBasis kernel_basis(int n, const HalfLineGrid& grid = {}, Index oversample = 2, double tol = 1e-2);

struct FredholmOptions {
  HalfLineGrid grid{};
  Index oversample = 2;
  double margin_tol = kEllipticTolerance;
  bool numerics = true;
  double zero_rel = 1e-3;      // sigma < zero_rel * sigma_max counts as zero
  double min_gap = 10.0;       // required ratio between kept and counted values
  double residual_tol = 5e-3;  // explicit kernel functions
  int max_explicit = 8;
  Index toeplitz_size = 0;     // 0 means grid.cells
};

enum class Verdict { Fredholm, NotFredholm, Inconclusive };
std::string to_string(Verdict v);

struct EstimatorResult {
  std::string name;
  bool ran = false;
  bool confident = false;
  Index kernel = 0;
  Index cokernel = 0;
  std::optional<int> index;
  std::string note;
};

struct FredholmReport {
  std::string symbol;
  bool elliptic = false;
  double margin = 0.0;
  double margin_location = 0.0;  // theta on the compactified circle
  std::optional<int> winding;
  std::optional<int> predicted_index;
  std::optional<Index> numerical_kernel_dim;
  std::optional<Index> numerical_cokernel_dim;
  std::map<std::string, double> residuals;
  std::vector<EstimatorResult> estimators;
  /// agreement[i][j]: estimators i and j are both confident and report the same index.
  std::vector<std::vector<bool>> agreement;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<int> index;  // set when verdict is Fredholm
  FredholmOptions options;
  std::vector<std::string> notes;
};

FredholmReport analyze(const Symbol& a, const FredholmOptions& opts = {});

struct HomotopyVerification {
  HomotopyTrace trace;
  std::vector<int> predicted_index;  // -wind h_t at each sample
  double endpoint_start_error = 0.0;  // max |h_0 - r_kappa|
  double endpoint_end_error = 0.0;    // max |h_1 - b|
  std::vector<bool> variation_bound_ok;
  /// Sup-norm continuity at t0 = 0.5: ||h_{t0 + d} - h_{t0}||_inf for d = 0.1 * 2^-k.
  std::vector<double> convergence_steps;
  std::vector<double> convergence_distance;
  std::vector<double> convergence_bound;
  bool convergence_monotone = false;
  bool lipschitz_ok = false;
  bool elliptic_everywhere = false;
  bool index_constant = false;
  bool passed = false;
};

/// Builds h_t on t = 0, 1/steps, ..., 1 and checks ellipticity, endpoints, the variation
/// bound, sup-norm continuity and constancy of -wind h_t. Throws PathEllipticityFailure.
HomotopyVerification homotopy_verify(const Symbol& b, int steps = 20, double margin_tol = kEllipticTolerance);

struct PerturbationReport {
  double xi0 = 0.0;
  double theta0 = 0.0;
  double min_modulus = 0.0;
  Complex direction;
  double epsilon = 0.0;
  FredholmReport plus;
  FredholmReport minus;
  int wind_plus = 0;
  int wind_minus = 0;
  double operator_gap = 0.0;   // ||W(a+) - W(a-)|| on the grid
  double expected_gap = 0.0;   // 2 eps |v|
  bool index_jump = false;     // |wind(a-) - wind(a+)| == 1
};

/// a +- eps v around the zero of a. v defaults to the unit normal i a'(theta)/|a'(theta)|.
/// Throws TransversalityFailure when a perturbation still touches the origin.
PerturbationReport perturbation_experiment(const Symbol& a, std::optional<Complex> v, double epsilon,
                                           const FredholmOptions& opts = {});

}  // namespace whlab
