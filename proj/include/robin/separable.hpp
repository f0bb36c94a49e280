#pragma once

#include <optional>
#include <vector>

namespace robin::separable {

/// Tensor mode of (0, l) x (0, L):
/// phi_{n,m} = 2/sqrt(lL) sin(n pi x / l) sin(m pi y / L).
struct RectMode {
  int n = 1;
  int m = 1;
  double lambda = 0.0;
  std::optional<double> alpha;
  double l = 1.0;
  double L = 1.0;
};

/// Mode J_k(sqrt(lambda) r) {cos, sin}(k theta) of the disk of radius R.
struct DiskMode {
  int k = 0;
  int s = 1;
  double lambda = 0.0;
  std::optional<double> alpha;
  double R = 1.0;
  int multiplicity = 1;
};

/// First `count` Dirichlet eigenvalues, ascending; equal eigenvalues (to
/// 1e-12 relative) are ordered by (n, m).
[[nodiscard]] std::vector<RectMode> rect_dirichlet_spectrum(double l, double L, int count);

/// Robin eigenvalues as sums of 1D Robin eigenvalues on (0, l) and (0, L).
[[nodiscard]] std::vector<RectMode> rect_robin_spectrum(double l, double L, double alpha, int count);

[[nodiscard]] double rect_robin_eigenvalue(double l, double L, double alpha, int n, int m);
[[nodiscard]] double rect_dirichlet_eigenvalue(double l, double L, int n, int m);

/// Boundary integral of d_nu phi_a * d_nu phi_b for two Dirichlet modes of
/// the same rectangle (closed form).
[[nodiscard]] double rect_boundary_gram(const RectMode& a, const RectMode& b);

struct BesselValue {
  double value = 0.0;
  double derivative = 0.0;
};

inline constexpr int kMaxBesselOrder = 20;
inline constexpr double kMaxBesselArgument = 200.0;

/// J_k(x) and J_k'(x) for 0 <= k <= 20, 0 <= x <= 200, absolute error ~1e-13.
[[nodiscard]] BesselValue bessel_j(int k, double x);

/// s-th positive zero of J_k.
[[nodiscard]] double bessel_zero(int k, int s);
/// First `count` positive zeros of J_k.
[[nodiscard]] std::vector<double> bessel_zeros(int k, int count);

/// Robin (alpha set) or Dirichlet (alpha empty) eigenvalue of mode (k, s).
[[nodiscard]] double disk_eigenvalue(double R, std::optional<double> alpha, int k, int s);

/// First `count` eigenvalues with multiplicity: modes with k >= 1 appear twice.
[[nodiscard]] std::vector<DiskMode> disk_spectrum(double R, std::optional<double> alpha, int count);

/// Boundary integral of (d_nu phi)^2 for the L2-normalized Dirichlet mode,
/// with the normalization integral evaluated by Gauss-Legendre quadrature.
[[nodiscard]] double disk_boundary_flux_norm(const DiskMode& mode);

}  // namespace robin::separable
