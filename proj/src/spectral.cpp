#include "signet/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "signet/errors.hpp"
#include "signet/rng.hpp"
#include "signet/theory.hpp"

namespace signet {

Spectrum eigenvalues(const Eigen::MatrixXd& A, int solver_cap) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n) throw ConfigError("eigenvalues: matrix not square");
  if (n > solver_cap) {
    std::ostringstream os;
    os << "eigenvalues: n = " << n << " exceeds solver cap " << solver_cap;
    throw ConfigError(os.str());
  }
  if (!A.allFinite()) throw ConfigError("eigenvalues: non-finite entries");

  // Eigen stores column-major, exactly what LAPACK expects; dgeev overwrites
  // its input, so work on a copy.
  Eigen::MatrixXd work = A;
  std::vector<double> wr(n), wi(n);
  const lapack_int info =
      LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), std::max(n, 1),
                    wr.data(), wi.data(), nullptr, 1, nullptr, 1);
  if (info != 0) {
    std::ostringstream os;
    if (info > 0) {
      os << "eigenvalues: QR iteration failed to converge; eigenvalues "
         << info << ".." << n << " of " << n
         << " unresolved (residual report: first " << info
         << " values unavailable)";
      throw NumericError(os.str());
    }
    os << "eigenvalues: illegal argument " << -info << " to dgeev";
    throw NumericError(os.str());
  }

  Spectrum spec;
  spec.eigenvalues.reserve(n);
  double trace_sum = 0.0;
  for (int k = 0; k < n; ++k) {
    spec.eigenvalues.emplace_back(wr[k], wi[k]);
    trace_sum += wr[k];
  }
  spec.moduli_sorted.resize(n);
  std::transform(spec.eigenvalues.begin(), spec.eigenvalues.end(),
                 spec.moduli_sorted.begin(),
                 [](const std::complex<double>& z) { return std::abs(z); });
  std::sort(spec.moduli_sorted.rbegin(), spec.moduli_sorted.rend());
  const double scale =
      std::max(1.0, spec.moduli_sorted.empty() ? 0.0 : spec.moduli_sorted[0]);
  spec.solver_residual =
      std::abs(trace_sum - A.trace()) / (scale * std::max(1, n));
  return spec;
}

namespace {

// Spectral radius of a small projected matrix via Faddeev-LeVerrier
// characteristic-polynomial coefficients and Durand-Kerner root iteration.
// Hand-rolled on purpose: power_radius must share no eigenvalue machinery
// with eigenvalues(), or agreement between the two would prove nothing.
double small_matrix_radius(const Eigen::MatrixXd& H) {
  const int b = static_cast<int>(H.rows());
  const double scale = H.cwiseAbs().rowwise().sum().maxCoeff();
  if (scale == 0.0) return 0.0;
  const Eigen::MatrixXd Hs = H / scale;  // rho(Hs) <= 1: tame coefficients
  std::vector<double> c(static_cast<std::size_t>(b) + 1, 0.0);
  c[0] = 1.0;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(b, b);
  for (int k = 1; k <= b; ++k) {
    M = Hs * M + c[static_cast<std::size_t>(k - 1)] *
                     Eigen::MatrixXd::Identity(b, b);
    c[static_cast<std::size_t>(k)] = -(Hs * M).trace() / k;
  }
  std::vector<std::complex<double>> z(static_cast<std::size_t>(b));
  const std::complex<double> seedpt(0.4, 0.9);
  std::complex<double> pw(1.0, 0.0);
  for (int i = 0; i < b; ++i) {
    pw *= seedpt;
    z[static_cast<std::size_t>(i)] = pw;
  }
  auto eval = [&](std::complex<double> x) {
    std::complex<double> acc(1.0, 0.0);
    for (int k = 1; k <= b; ++k) acc = acc * x + c[static_cast<std::size_t>(k)];
    return acc;
  };
  for (int it = 0; it < 2000; ++it) {
    double moved = 0.0;
    for (int i = 0; i < b; ++i) {
      std::complex<double> denom(1.0, 0.0);
      for (int j = 0; j < b; ++j)
        if (j != i)
          denom *= z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)];
      const std::complex<double> step = eval(z[static_cast<std::size_t>(i)]) / denom;
      z[static_cast<std::size_t>(i)] -= step;
      moved = std::max(moved, std::abs(step));
    }
    if (moved < 1e-15) break;
  }
  double radius = 0.0;
  for (const auto& root : z) radius = std::max(radius, std::abs(root));
  return scale * radius;
}

}  // namespace

double power_radius(const Eigen::MatrixXd& A, int max_iters, double tol,
                    std::uint64_t probe_seed) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n || n == 0) throw ConfigError("power_radius: matrix not square");
  if (!A.allFinite()) throw ConfigError("power_radius: non-finite entries");

  // Block power iteration (subspace iteration): a single probe vector stalls
  // when several moduli crowd the spectral edge, which is exactly what
  // normalized influence matrices produce. A 12-dimensional block converges
  // at the (rho_13 / rho_1)^k rate instead, and its Rayleigh-Ritz projection
  // carries complex dominant pairs as intact 2x2 blocks.
  const int b = std::min(n, 12);
  CounterRng rng(probe_seed, StreamDomain::probe, 0);
  Eigen::MatrixXd Q(n, b);
  for (int j = 0; j < b; ++j)
    for (int i = 0; i < n; ++i)
      Q(i, j) = rng.uniform(static_cast<std::uint64_t>(j) * n + i, -1.0, 1.0);
  Q = Eigen::HouseholderQR<Eigen::MatrixXd>(Q).householderQ() *
      Eigen::MatrixXd::Identity(n, b);

  // Ritz extraction every 5th sweep, stopping once three consecutive
  // extractions agree within tol. The characteristic-polynomial route caps
  // the certifiable stability near 1e-6 when Ritz values cluster (root
  // accuracy of a coefficient-form polynomial degrades to sqrt(eps) for
  // near-multiple roots), hence the 1e-5 default rather than machine level.
  constexpr int kExtractEvery = 5;
  double e1 = -1.0, e2 = -1.0;
  int extractions = 0;
  for (int it = 0; it < max_iters; ++it) {
    const Eigen::MatrixXd Y = A * Q;
    if (it % kExtractEvery == 0) {
      const double est = small_matrix_radius(Q.transpose() * Y);
      ++extractions;
      const double span = std::max(std::abs(est - e1), std::abs(est - e2));
      if (extractions >= 4 && span <= tol * std::max(1.0, est)) return est;
      e2 = e1;
      e1 = est;
    }
    Q = Eigen::HouseholderQR<Eigen::MatrixXd>(Y).householderQ() *
        Eigen::MatrixXd::Identity(n, b);
  }
  std::ostringstream os;
  os << "power_radius: no convergence after " << max_iters
     << " iterations; last estimate " << e1;
  throw NumericError(os.str());
}

EmpiricalRateResult rate_from_spectrum(const Spectrum& spec, double one_tol) {
  if (spec.n() == 0) throw ConfigError("rate_from_spectrum: empty spectrum");
  const double rho1 = spec.moduli_sorted.front();
  if (rho1 > 1.0 + 1e-6)
    throw NumericError(
        "rate_from_spectrum: spectrum inconsistent with a normalized "
        "influence matrix (rho_1 > 1 + 1e-6)");
  EmpiricalRateResult res;
  if (rho1 < 1.0 - one_tol) {
    res.regime = RateRegime::subunit_radius;
    res.governing_modulus = rho1;
    res.rate = -std::log(rho1);
    return res;
  }
  // Semisimple unit cluster: everything within one_tol of +1 converges
  // rather than decays; the rate is set by the largest survivor.
  double mu = 0.0;
  for (const auto& z : spec.eigenvalues)
    if (std::abs(z - std::complex<double>(1.0, 0.0)) > one_tol)
      mu = std::max(mu, std::abs(z));
  if (mu == 0.0) {
    res.regime = RateRegime::all_unit;
    res.governing_modulus = 1.0;
    res.rate = std::numeric_limits<double>::infinity();
    return res;
  }
  res.regime = RateRegime::unit_radius_second;
  res.governing_modulus = mu;
  res.rate = -std::log(mu);
  return res;
}

double ellipse_containment(const Spectrum& spec, const EllipsePrediction& ell,
                           double inflate, int exclude_outliers,
                           bool drop_unit_cluster, double one_tol) {
  if (!(ell.a > 0.0) || !(ell.b > 0.0))
    throw ConfigError("ellipse_containment: degenerate ellipse");
  // The excluded "outliers" are the eigenvalues the prediction already
  // accounts for separately: the largest-modulus ones.
  std::vector<std::complex<double>> evs = spec.eigenvalues;
  std::sort(evs.begin(), evs.end(),
            [](const std::complex<double>& p, const std::complex<double>& q) {
              return std::abs(p) > std::abs(q);
            });
  const double A = ell.a * (1.0 + inflate);
  const double B = ell.b * (1.0 + inflate);
  std::int64_t outside = 0, total = 0;
  for (std::size_t k = 0; k < evs.size(); ++k) {
    if (static_cast<int>(k) < exclude_outliers) continue;
    if (drop_unit_cluster &&
        std::abs(evs[k] - std::complex<double>(1.0, 0.0)) <= one_tol)
      continue;
    const double dx = (evs[k].real() - ell.center_x) / A;
    const double dy = evs[k].imag() / B;
    ++total;
    if (dx * dx + dy * dy > 1.0) ++outside;
  }
  if (total == 0) return 0.0;
  return static_cast<double>(outside) / static_cast<double>(total);
}

}  // namespace signet
