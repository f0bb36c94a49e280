#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "robin/fem.hpp"

namespace robin::torsion {

using Field = Eigen::VectorXd;
using BoundaryField = Eigen::VectorXd;

/// Discretization-independent access to the boundary-loaded Robin problem
///   int grad U . grad v + alpha int_bd U v = int_bd f v.
class TorsionBackend {
 public:
  virtual ~TorsionBackend() = default;

  [[nodiscard]] virtual std::size_t boundary_size() const = 0;
  [[nodiscard]] virtual double boundary_measure() const = 0;
  [[nodiscard]] virtual Field solve(double alpha, const BoundaryField& f) const = 0;
  /// Harmonic field with trace f.
  [[nodiscard]] virtual Field harmonic_extension(const BoundaryField& f) const = 0;
  /// Normal derivative of a harmonic field, when the backend can recover it.
  [[nodiscard]] virtual std::optional<BoundaryField> harmonic_flux(const Field& u) const = 0;
  [[nodiscard]] virtual BoundaryField trace(const Field& u) const = 0;
  [[nodiscard]] virtual double boundary_dot(const BoundaryField& f, const BoundaryField& g) const = 0;
  [[nodiscard]] virtual double grad_dot(const Field& u, const Field& v) const = 0;
  [[nodiscard]] virtual double l2_dot(const Field& u, const Field& v) const = 0;
  /// Mesh size entering discretization slacks; 0 for exact backends.
  [[nodiscard]] virtual double mesh_size() const { return 0.0; }
};

/// (0, 1): fields are endpoint values (U(0), U(1)) of the affine minimizer;
/// the boundary is the two endpoints with counting measure.
class IntervalTorsion final : public TorsionBackend {
 public:
  [[nodiscard]] std::size_t boundary_size() const override { return 2; }
  [[nodiscard]] double boundary_measure() const override { return 2.0; }
  [[nodiscard]] Field solve(double alpha, const BoundaryField& f) const override;
  [[nodiscard]] Field harmonic_extension(const BoundaryField& f) const override;
  [[nodiscard]] std::optional<BoundaryField> harmonic_flux(const Field& u) const override;
  [[nodiscard]] BoundaryField trace(const Field& u) const override { return u; }
  [[nodiscard]] double boundary_dot(const BoundaryField& f, const BoundaryField& g) const override;
  [[nodiscard]] double grad_dot(const Field& u, const Field& v) const override;
  [[nodiscard]] double l2_dot(const Field& u, const Field& v) const override;
};

/// P1 backend. One sparse factorization of K + alpha B is cached per alpha.
class FemTorsion final : public TorsionBackend {
 public:
  explicit FemTorsion(std::shared_ptr<const fem::FemSystem> sys);
  ~FemTorsion() override;

  [[nodiscard]] const fem::FemSystem& system() const { return *sys_; }
  [[nodiscard]] std::size_t boundary_size() const override { return sys_->boundary_count(); }
  [[nodiscard]] double boundary_measure() const override { return sys_->mesh.boundary_length(); }
  [[nodiscard]] Field solve(double alpha, const BoundaryField& f) const override;
  [[nodiscard]] Field harmonic_extension(const BoundaryField& f) const override;
  [[nodiscard]] std::optional<BoundaryField> harmonic_flux(const Field& u) const override;
  [[nodiscard]] BoundaryField trace(const Field& u) const override { return sys_->trace(u); }
  [[nodiscard]] double boundary_dot(const BoundaryField& f, const BoundaryField& g) const override;
  [[nodiscard]] double grad_dot(const Field& u, const Field& v) const override;
  [[nodiscard]] double l2_dot(const Field& u, const Field& v) const override;
  [[nodiscard]] double mesh_size() const override { return sys_->mesh.h; }

 private:
  struct Factorizations;
  std::shared_ptr<const fem::FemSystem> sys_;
  std::unique_ptr<Factorizations> cache_;
  mutable std::mutex mutex_;
};

struct TorsionResult {
  double alpha = 0.0;
  double T = 0.0;  // int_bd f U
  Field U;
  double grad_energy = 0.0;      // int |grad U|^2
  double boundary_energy = 0.0;  // alpha int_bd U^2
  BoundaryField trace_alphaU;

  /// max |T - (grad_energy + boundary_energy)| relative to T.
  [[nodiscard]] double identity_defect() const;
};

[[nodiscard]] TorsionResult torsion_solve(const TorsionBackend& backend, double alpha, const BoundaryField& f);

/// (int_bd f trial)^2 / (int |grad trial|^2 + alpha int_bd trial^2).
[[nodiscard]] double torsion_max_form(const TorsionBackend& backend, double alpha, const BoundaryField& f,
                                      const Field& trial);

struct BoundReport {
  double alpha = 0.0;
  double alphaT = 0.0;
  double f_norm2 = 0.0;        // ||f||^2 on the boundary
  double mean_lower = 0.0;     // (int f)^2 / |bd|
  double extension_lower = 0.0;  // alpha ||f||^4 / (||grad U_f||^2 + alpha ||f||^2)
  double trace_distance2 = 0.0;  // ||alpha U - f||^2
  double trace_bound = 0.0;      // 2 ||f|| ||grad U_f|| / sqrt(alpha)
  double grad_extension = 0.0;   // ||grad U_f||
  std::optional<double> flux_rate_bound;  // ||d_nu U_f|| / alpha, when recoverable
  double extension_energy_gap = 0.0;      // ||grad(alpha U - U_f)||

  // Non-negative when the corresponding inequality holds.
  [[nodiscard]] double slack_mean_lower() const { return alphaT - mean_lower; }
  [[nodiscard]] double slack_upper() const { return f_norm2 - alphaT; }
  [[nodiscard]] double slack_extension_lower() const { return alphaT - extension_lower; }
  [[nodiscard]] double slack_trace() const { return trace_bound - trace_distance2; }
};

[[nodiscard]] BoundReport check_bounds(const TorsionBackend& backend, double alpha, const BoundaryField& f);

struct MonotonicityResult {
  double fd_derivative = 0.0;  // central difference of alpha -> alpha T
  double grad_energy = 0.0;    // int |grad U_alpha|^2
};

[[nodiscard]] MonotonicityResult monotonicity_check(const TorsionBackend& backend, double alpha,
                                                    const BoundaryField& f, double dalpha);

/// Values uniform in [-1, 1] from std::minstd_rand(seed).
[[nodiscard]] BoundaryField random_boundary_data(std::size_t size, std::uint32_t seed);
/// `count` consecutive fields drawn from one generator.
[[nodiscard]] std::vector<BoundaryField> random_boundary_data(std::size_t size, std::uint32_t seed,
                                                               std::size_t count);

}  // namespace robin::torsion
