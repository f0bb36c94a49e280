#pragma once

#include <Eigen/Core>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "robin/fem.hpp"
#include "robin/torsion.hpp"

namespace robin::asymptotics {

/// Robin eigenvalues converging to one Dirichlet eigenvalue of multiplicity m.
struct Cluster {
  int n = 1;  // first Dirichlet index (1-based)
  int m = 1;
  double lambda_n = 0.0;
  double gamma = 0.0;  // half the distance to the neighbouring Dirichlet eigenvalues
  std::vector<int> members;  // indices n .. n+m-1
  std::map<double, std::vector<double>> robin_by_alpha;  // alpha -> m ascending values
  // Smallest grid alpha from which every larger grid alpha has all m values
  // within gamma of lambda_n.
  std::optional<double> attachment_threshold;
};

/// Spectra are ascending and 1-based in meaning (element 0 is index 1).
/// Multiplicity: maximal run with |lambda_{n+j} - lambda_n| <= mult_tol lambda_n.
[[nodiscard]] Cluster build_cluster(const std::vector<double>& dirichlet,
                                    const std::map<double, std::vector<double>>& robin_by_alpha, int n,
                                    double mult_tol = 1e-9);

struct GramDiag {
  Eigen::MatrixXd gram;
  Eigen::VectorXd mu;        // nonincreasing
  Eigen::MatrixXd rotation;  // column i: coefficients of the i-th diagonalizing basis vector
};

[[nodiscard]] GramDiag gram_diag(const Eigen::MatrixXd& gram);

using BoundaryDot = std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;
[[nodiscard]] GramDiag gram_diag(const std::vector<Eigen::VectorXd>& normal_derivatives, const BoundaryDot& dot);

/// new_i = sum_j rotation(j, i) basis_j.
[[nodiscard]] std::vector<Eigen::VectorXd> rotate_basis(const std::vector<Eigen::VectorXd>& basis,
                                                        const Eigen::MatrixXd& rotation);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

/// Least squares on (log alpha, log error); zero errors are skipped. Throws
/// AnalysisError with fewer than 4 usable points.
[[nodiscard]] RateFit fit_rate(const std::vector<double>& alphas, const std::vector<double>& errors);

struct ExpansionRow {
  int n = 1;
  int i = 1;
  double alpha = 0.0;
  double observed = 0.0;   // lambda_n - lambda^alpha_{n+i-1}
  double predicted = 0.0;  // mu_i / alpha
  double residual = 0.0;   // observed - predicted
};

struct ExpansionReport {
  std::vector<ExpansionRow> rows;
  std::vector<std::optional<RateFit>> slopes;  // per branch i, of |residual|
};

/// Pairs the ascending Robin values with mu in nonincreasing order. Uses the
/// grid alphas at or above the attachment threshold; needs at least 4.
[[nodiscard]] ExpansionReport predict_and_compare(const Cluster& cluster, const GramDiag& gd);

struct OmegaRho {
  double omega = 0.0;
  double rho = 0.0;
};

/// omega = largest eigenvalue of W_ij = int U_i U_j, rho = largest singular
/// value of R_ij = int_bd (U_j - g_j / alpha) g_i, where U_i solves the
/// torsion problem with data g_i (normal derivatives of an orthonormal basis).
[[nodiscard]] OmegaRho omega_rho(const std::vector<torsion::BoundaryField>& normal_derivatives,
                                 const torsion::TorsionBackend& backend, double alpha);

struct EigenfunctionResidual {
  int i = 1;
  double alpha = 0.0;
  double projection_norm = 0.0;  // ||Pi phi||
  double r1 = 0.0;               // ||phi - Pi phi/||Pi phi|| - U^phi||_{H_alpha}
  double r2 = 0.0;               // ||phi - Pi phi/||Pi phi|| ||^2_{H_alpha}
  double flux_norm2 = 0.0;       // int_bd (d_nu phi)^2 from the supplied flux
  double boundary_mass = 0.0;    // int_bd psi^2 for psi = Pi phi/||Pi phi||
};

/// `dirichlet` and `fluxes` describe an M-orthonormal Dirichlet basis of the
/// cluster; `robin` are the M-orthonormal Robin eigenvectors of the cluster
/// at this alpha. Throws AnalysisError when ||Pi phi|| < 1/2.
[[nodiscard]] std::vector<EigenfunctionResidual> eigenfunction_residuals(
    const torsion::FemTorsion& backend, const std::vector<fem::DiscreteField>& dirichlet,
    const std::vector<fem::BoundaryField>& fluxes, const std::vector<fem::DiscreteField>& robin, double alpha);

}  // namespace robin::asymptotics
