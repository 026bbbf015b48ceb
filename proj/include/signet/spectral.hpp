#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

namespace signet {

struct EllipsePrediction;  // theory.hpp

struct Spectrum {
  std::vector<std::complex<double>> eigenvalues;
  std::vector<double> moduli_sorted;  // rho_1 >= rho_2 >= ... with multiplicity
  double solver_residual = 0.0;       // relative trace-identity defect

  int n() const { return static_cast<int>(eigenvalues.size()); }
  double rho(int k = 1) const { return moduli_sorted.at(k - 1); }
};

enum class RateRegime { subunit_radius, unit_radius_second, all_unit };

struct EmpiricalRateResult {
  double rate = 0.0;  // nats per step; +inf when every mode is on the unit circle
  double governing_modulus = 0.0;
  RateRegime regime = RateRegime::subunit_radius;
};

// Full dense nonsymmetric spectrum (Hessenberg reduction + shifted QR via
// LAPACK dgeev). Throws ConfigError for non-finite or oversized input and
// NumericError if the QR iteration fails to converge.
Spectrum eigenvalues(const Eigen::MatrixXd& A, int solver_cap = 3000);

// Block power-iteration estimate of rho(A), used only as an independent
// oracle: subspace iteration on a 12-vector block whose Rayleigh-Ritz
// projection is resolved by a hand-rolled characteristic-polynomial root
// finder (no shared machinery with eigenvalues()). Complex dominant pairs
// survive as 2x2 blocks of the projection. tol is the stability demanded of
// consecutive estimates; the default matches the noise floor of coefficient-
// form root-finding with clustered Ritz values. Throws NumericError (message
// carries the last estimate) if estimates still drift after max_iters sweeps.
double power_radius(const Eigen::MatrixXd& A, int max_iters = 5000,
                    double tol = 1e-5, std::uint64_t probe_seed = 12345);

// Convergence-rate rule on a computed spectrum of an influence matrix:
// rho_1 < 1 - one_tol        -> rate = -ln rho_1
// otherwise                  -> drop the cluster within one_tol of +1
//                               (semisimple unit cluster), rate = -ln of the
//                               largest remaining modulus
// nothing left (W ~ I)       -> +inf, regime all_unit.
// Throws NumericError when rho_1 > 1 + 1e-6 (inconsistent with a normalized
// influence matrix).
EmpiricalRateResult rate_from_spectrum(const Spectrum& spec,
                                       double one_tol = 1e-8);

// Fraction of eigenvalues outside the ellipse inflated by (1 + inflate).
// Optionally ignores the `exclude_outliers` largest-|.| eigenvalues and, when
// drop_unit_cluster is set, everything within one_tol of +1. Throws
// ConfigError on a degenerate ellipse.
double ellipse_containment(const Spectrum& spec, const EllipsePrediction& ell,
                           double inflate, int exclude_outliers = 0,
                           bool drop_unit_cluster = false,
                           double one_tol = 1e-8);

}  // namespace signet
