#pragma once

#include <array>
#include <optional>

namespace robin::exact1d {

/// One Laplacian mode on (0, 1). Outward normal derivatives use the
/// convention d_nu = -d/dx at x = 0 and +d/dx at x = 1.
struct Mode1D {
  int n = 1;
  double lambda = 0.0;
  std::optional<double> alpha;  // empty for the Dirichlet mode
  std::array<double, 2> trace{};             // phi(0), phi(1)
  std::array<double, 2> trace_derivative{};  // d_nu phi at 0 and 1
};

/// Harmonic (affine) torsion minimizer U(x) = a + b x on (0, 1) for the
/// Robin data -U'(0) + alpha U(0) = f0, U'(1) + alpha U(1) = f1.
struct Torsion1D {
  double alpha = 0.0;
  std::array<double, 2> f{};
  double a = 0.0;
  double b = 0.0;
  double T = 0.0;

  [[nodiscard]] double U0() const { return a; }
  [[nodiscard]] double U1() const { return a + b; }
  [[nodiscard]] double grad_energy() const { return b * b; }
  [[nodiscard]] double boundary_energy() const { return alpha * (U0() * U0() + U1() * U1()); }
  [[nodiscard]] double l2_mass() const { return a * a + a * b + b * b / 3.0; }
};

struct Expansion1D {
  double zeroth = 0.0;  // n^2 pi^2
  double first = 0.0;   // n^2 pi^2 - 4 n^2 pi^2 / alpha
  double second = 0.0;  // ... + 12 n^2 pi^2 / alpha^2
};

/// alpha^2 + 2 alpha sqrt(l) cot(sqrt(l)) - l, with cot reduced modulo pi.
[[nodiscard]] double secular(double lambda, double alpha);
[[nodiscard]] double secular_derivative(double lambda, double alpha);

/// n-th Robin eigenvalue of (0, 1), bracketed in ((n-1)^2 pi^2, n^2 pi^2).
[[nodiscard]] Mode1D robin_eigen_1d(int n, double alpha, double tol = 1e-14);

/// phi_n = sqrt(2) sin(n pi x).
[[nodiscard]] Mode1D dirichlet_mode_1d(int n);

/// Value of the L2-normalized Robin eigenfunction of `mode` at x, with the
/// sign fixed so that it pairs positively with sqrt(2) sin(n pi x).
[[nodiscard]] double robin_eigenfunction(const Mode1D& mode, double x);

[[nodiscard]] Expansion1D expansion_1d(int n, double alpha);

/// Robin eigenvalue on (0, length) via lambda_(0,l)^alpha = lambda_(0,1)^(alpha l) / l^2.
[[nodiscard]] double robin_eigenvalue_on(double length, int n, double alpha);
[[nodiscard]] double dirichlet_eigenvalue_on(double length, int n);

[[nodiscard]] Torsion1D torsion_1d(double alpha, double f0, double f1);

}  // namespace robin::exact1d
