#include "robin/exact1d.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "robin/error.hpp"
#include "robin/roots.hpp"

namespace robin::exact1d {

namespace {

constexpr double kPi = std::numbers::pi;
// pi = kPiHi + kPiLo to about 2^-106.
constexpr double kPiHi = 3.141592653589793116;
constexpr double kPiLo = 1.2246467991473532e-16;

// t - j pi for the nearest integer j, keeping the low-order bits of pi.
double reduce_mod_pi(double t) {
  const double j = std::nearbyint(t / kPi);
  return (t - j * kPiHi) - j * kPiLo;
}

double cot(double t) {
  const double r = reduce_mod_pi(t);
  return std::cos(r) / std::sin(r);
}

void require_index(int n) {
  if (n < 1) throw Error("mode index must be >= 1, got " + std::to_string(n));
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error("alpha must be positive and finite");
}

}  // namespace

double secular(double lambda, double alpha) {
  const double t = std::sqrt(lambda);
  return alpha * alpha + 2.0 * alpha * t * cot(t) - lambda;
}

double secular_derivative(double lambda, double alpha) {
  const double t = std::sqrt(lambda);
  const double r = reduce_mod_pi(t);
  const double s = std::sin(r);
  const double c = std::cos(r);
  // d/dl [t cot t] = (cot t - t / sin^2 t) / (2 t)
  return alpha * (c / s - t / (s * s)) / t - 1.0;
}

Mode1D robin_eigen_1d(int n, double alpha, double tol) {
  require_index(n);
  require_alpha(alpha);
  if (!(tol >= 1e-14)) throw Error("tol must be >= 1e-14");
  const double upper = n * n * kPi * kPi;
  const double lower = (n - 1) * (n - 1) * kPi * kPi;
  const double eps = 1e-9 * upper;
  RootOptions opt;
  opt.tol = tol;
  opt.bisection_width = 1e-8;
  const double lambda = bracketed_root(
      [alpha](double l) { return std::pair{secular(l, alpha), secular_derivative(l, alpha)}; }, lower + eps,
      upper - eps, opt);

  Mode1D mode;
  mode.n = n;
  mode.lambda = lambda;
  mode.alpha = alpha;
  mode.trace = {robin_eigenfunction(mode, 0.0), robin_eigenfunction(mode, 1.0)};
  // Robin condition: d_nu phi = -alpha phi.
  mode.trace_derivative = {-alpha * mode.trace[0], -alpha * mode.trace[1]};
  return mode;
}

double robin_eigenfunction(const Mode1D& mode, double x) {
  if (!mode.alpha) return std::sqrt(2.0) * std::sin(mode.n * kPi * x);
  const double a = *mode.alpha;
  const double k = std::sqrt(mode.lambda);
  // phi = k cos(kx) + a sin(kx) satisfies -phi'(0) + a phi(0) = 0.
  const double norm2 = 0.5 * (k * k + a * a) + (k * k - a * a) * std::sin(2.0 * k) / (4.0 * k) +
                       a * std::sin(k) * std::sin(k);
  const double p = mode.n * kPi;
  const double cos_sin = 0.5 * ((1.0 - std::cos(p + k)) / (p + k) + (1.0 - std::cos(p - k)) / (p - k));
  const double sin_sin = 0.5 * (std::sin(p - k) / (p - k) - std::sin(p + k) / (p + k));
  const double sign = (k * cos_sin + a * sin_sin) >= 0.0 ? 1.0 : -1.0;
  return sign * (k * std::cos(k * x) + a * std::sin(k * x)) / std::sqrt(norm2);
}

Mode1D dirichlet_mode_1d(int n) {
  require_index(n);
  Mode1D mode;
  mode.n = n;
  mode.lambda = n * n * kPi * kPi;
  const double slope = std::sqrt(2.0) * n * kPi;
  const double parity = (n % 2 == 0) ? 1.0 : -1.0;
  mode.trace = {0.0, 0.0};
  mode.trace_derivative = {-slope, slope * parity};
  return mode;
}

Expansion1D expansion_1d(int n, double alpha) {
  require_index(n);
  require_alpha(alpha);
  const double c = n * n * kPi * kPi;
  Expansion1D e;
  e.zeroth = c;
  e.first = c - 4.0 * c / alpha;
  e.second = e.first + 12.0 * c / (alpha * alpha);
  return e;
}

double robin_eigenvalue_on(double length, int n, double alpha) {
  if (!(length > 0.0)) throw Error("interval length must be positive");
  return robin_eigen_1d(n, alpha * length).lambda / (length * length);
}

double dirichlet_eigenvalue_on(double length, int n) {
  if (!(length > 0.0)) throw Error("interval length must be positive");
  require_index(n);
  const double k = n * kPi / length;
  return k * k;
}

Torsion1D torsion_1d(double alpha, double f0, double f1) {
  require_alpha(alpha);
  Torsion1D t;
  t.alpha = alpha;
  t.f = {f0, f1};
  t.b = (f1 - f0) / (2.0 + alpha);
  t.a = (f0 + t.b) / alpha;
  t.T = f0 * t.U0() + f1 * t.U1();
  return t;
}

}  // namespace robin::exact1d
