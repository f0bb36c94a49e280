#include "robin/asymptotics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "robin/error.hpp"

namespace robin::asymptotics {

Cluster build_cluster(const std::vector<double>& dirichlet, const std::map<double, std::vector<double>>& robin_by_alpha,
                      int n, double mult_tol) {
  if (n < 1) throw AnalysisError("cluster index must be >= 1");
  if (!(mult_tol >= 0.0)) throw AnalysisError("mult_tol must be non-negative");
  const auto size = static_cast<int>(dirichlet.size());
  if (n > size) throw AnalysisError("Dirichlet spectrum has no index " + std::to_string(n));
  auto value = [&](int idx) { return dirichlet[static_cast<std::size_t>(idx) - 1]; };

  Cluster c;
  c.n = n;
  c.lambda_n = value(n);
  const double tol = mult_tol * std::abs(c.lambda_n);
  if (n > 1 && std::abs(value(n - 1) - c.lambda_n) <= tol) {
    throw AnalysisError("index " + std::to_string(n) + " is not the first of its eigenvalue cluster");
  }
  int m = 1;
  while (n + m <= size && std::abs(value(n + m) - c.lambda_n) <= tol) ++m;
  if (n + m > size) {
    throw AnalysisError("Dirichlet spectrum ends inside the cluster at index " + std::to_string(n) +
                        "; supply at least index " + std::to_string(n + m));
  }
  c.m = m;
  for (int j = 0; j < m; ++j) c.members.push_back(n + j);
  const double above = value(n + m) - c.lambda_n;
  c.gamma = n == 1 ? 0.5 * above : 0.5 * std::min(c.lambda_n - value(n - 1), above);
  if (!(c.gamma > 0.0)) throw AnalysisError("cluster is not separated from its neighbours");

  for (const auto& [alpha, spectrum] : robin_by_alpha) {
    if (static_cast<int>(spectrum.size()) < n + m - 1) {
      throw AnalysisError("Robin spectrum at alpha = " + std::to_string(alpha) + " is shorter than index " +
                          std::to_string(n + m - 1));
    }
    std::vector<double> vals(spectrum.begin() + (n - 1), spectrum.begin() + (n - 1 + m));
    std::sort(vals.begin(), vals.end());
    c.robin_by_alpha.emplace(alpha, std::move(vals));
  }
  // Walk the grid from the top down; the threshold is the last alpha of the
  // attached tail.
  for (auto it = c.robin_by_alpha.rbegin(); it != c.robin_by_alpha.rend(); ++it) {
    const bool attached = std::all_of(it->second.begin(), it->second.end(),
                                      [&](double v) { return std::abs(v - c.lambda_n) < c.gamma; });
    if (!attached) break;
    c.attachment_threshold = it->first;
  }
  return c;
}

GramDiag gram_diag(const Eigen::MatrixXd& gram) {
  if (gram.rows() == 0 || gram.rows() != gram.cols()) throw AnalysisError("Gram matrix must be square and nonempty");
  const double asym = (gram - gram.transpose()).cwiseAbs().maxCoeff();
  const double scale = gram.cwiseAbs().maxCoeff();
  if (asym > 1e-10 * std::max(scale, 1e-300)) throw AnalysisError("Gram matrix is not symmetric");
  GramDiag gd;
  gd.gram = 0.5 * (gram + gram.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gd.gram);
  if (es.info() != Eigen::Success) throw AnalysisError("Gram eigendecomposition failed");
  const auto m = gram.rows();
  gd.mu.resize(m);
  gd.rotation.resize(m, m);
  // Eigen returns ascending eigenvalues.
  for (Eigen::Index i = 0; i < m; ++i) {
    gd.mu[i] = es.eigenvalues()[m - 1 - i];
    Eigen::VectorXd v = es.eigenvectors().col(m - 1 - i);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0.0) v = -v;
    gd.rotation.col(i) = v;
  }
  if (!(gd.mu[m - 1] > 1e-12 * std::max(gd.mu[0], 1e-300))) {
    throw AnalysisError("boundary Gram matrix is not positive definite (smallest eigenvalue " +
                        std::to_string(gd.mu[m - 1]) + ")");
  }
  return gd;
}

GramDiag gram_diag(const std::vector<Eigen::VectorXd>& normal_derivatives, const BoundaryDot& dot) {
  const auto m = static_cast<Eigen::Index>(normal_derivatives.size());
  Eigen::MatrixXd g(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      g(i, j) = g(j, i) = dot(normal_derivatives[static_cast<std::size_t>(i)], normal_derivatives[static_cast<std::size_t>(j)]);
    }
  }
  return gram_diag(g);
}

std::vector<Eigen::VectorXd> rotate_basis(const std::vector<Eigen::VectorXd>& basis, const Eigen::MatrixXd& rotation) {
  if (static_cast<Eigen::Index>(basis.size()) != rotation.rows()) throw AnalysisError("rotation does not match basis size");
  std::vector<Eigen::VectorXd> out;
  for (Eigen::Index i = 0; i < rotation.cols(); ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(basis.front().size());
    for (Eigen::Index j = 0; j < rotation.rows(); ++j) v += rotation(j, i) * basis[static_cast<std::size_t>(j)];
    out.push_back(std::move(v));
  }
  return out;
}

RateFit fit_rate(const std::vector<double>& alphas, const std::vector<double>& errors) {
  if (alphas.size() != errors.size()) throw AnalysisError("fit_rate: alphas and errors differ in length");
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0)) throw AnalysisError("fit_rate: alphas must be positive");
    if (errors[i] < 0.0) throw AnalysisError("fit_rate: errors must be non-negative");
    if (errors[i] == 0.0) continue;
    xs.push_back(std::log(alphas[i]));
    ys.push_back(std::log(errors[i]));
  }
  if (xs.size() < 4) {
    throw AnalysisError("fit_rate needs at least 4 nonzero errors, got " + std::to_string(xs.size()));
  }
  const double k = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / k;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / k;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw AnalysisError("fit_rate: alphas are all equal");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.points = xs.size();
  return fit;
}

ExpansionReport predict_and_compare(const Cluster& cluster, const GramDiag& gd) {
  if (gd.mu.size() != static_cast<Eigen::Index>(cluster.m)) throw AnalysisError("Gram size does not match cluster multiplicity");
  if (!cluster.attachment_threshold) throw AnalysisError("Robin values never attach to the cluster on this grid");
  std::vector<double> alphas;
  for (const auto& [alpha, vals] : cluster.robin_by_alpha) {
    if (alpha >= *cluster.attachment_threshold) alphas.push_back(alpha);
  }
  if (alphas.size() < 4) {
    throw AnalysisError("need at least 4 attached alphas, got " + std::to_string(alphas.size()));
  }
  ExpansionReport rep;
  for (int i = 1; i <= cluster.m; ++i) {
    std::vector<double> abs_res;
    for (double alpha : alphas) {
      const double robin = cluster.robin_by_alpha.at(alpha)[static_cast<std::size_t>(i) - 1];
      ExpansionRow row;
      row.n = cluster.n;
      row.i = i;
      row.alpha = alpha;
      row.observed = cluster.lambda_n - robin;
      row.predicted = gd.mu[i - 1] / alpha;
      row.residual = row.observed - row.predicted;
      abs_res.push_back(std::abs(row.residual));
      rep.rows.push_back(row);
    }
    try {
      rep.slopes.emplace_back(fit_rate(alphas, abs_res));
    } catch (const AnalysisError&) {
      rep.slopes.emplace_back(std::nullopt);
    }
  }
  return rep;
}

OmegaRho omega_rho(const std::vector<torsion::BoundaryField>& normal_derivatives, const torsion::TorsionBackend& backend,
                   double alpha) {
  const auto m = static_cast<Eigen::Index>(normal_derivatives.size());
  if (m == 0) throw AnalysisError("omega_rho needs a nonempty basis");
  std::vector<torsion::Field> U;
  std::vector<torsion::BoundaryField> defect;
  for (const auto& g : normal_derivatives) {
    U.push_back(backend.solve(alpha, g));
    defect.push_back(backend.trace(U.back()) - g / alpha);
  }
  Eigen::MatrixXd W(m, m);
  Eigen::MatrixXd R(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto si = static_cast<std::size_t>(i);
      const auto sj = static_cast<std::size_t>(j);
      W(i, j) = backend.l2_dot(U[si], U[sj]);
      R(i, j) = backend.boundary_dot(defect[sj], normal_derivatives[si]);
    }
  }
  OmegaRho out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (W + W.transpose()), Eigen::EigenvaluesOnly);
  out.omega = es.eigenvalues().maxCoeff();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(R);
  out.rho = svd.singularValues()[0];
  return out;
}

std::vector<EigenfunctionResidual> eigenfunction_residuals(const torsion::FemTorsion& backend,
                                                           const std::vector<fem::DiscreteField>& dirichlet,
                                                           const std::vector<fem::BoundaryField>& fluxes,
                                                           const std::vector<fem::DiscreteField>& robin, double alpha) {
  if (dirichlet.size() != fluxes.size()) throw AnalysisError("one flux per Dirichlet basis vector is required");
  const auto& sys = backend.system();
  std::vector<EigenfunctionResidual> out;
  for (std::size_t k = 0; k < dirichlet.size(); ++k) {
    const auto& phi = dirichlet[k];
    const fem::DiscreteField proj = fem::l2_project(robin, phi, sys.M);
    EigenfunctionResidual r;
    r.i = static_cast<int>(k) + 1;
    r.alpha = alpha;
    r.projection_norm = std::sqrt(std::max(fem::m_dot(sys, proj, proj), 0.0));
    if (r.projection_norm < 0.5) {
      throw AnalysisError("projection onto the Robin cluster has norm " + std::to_string(r.projection_norm) +
                          " < 1/2 at alpha = " + std::to_string(alpha));
    }
    // Pi phi / ||Pi phi|| pairs positively with phi by construction.
    const fem::DiscreteField psi = proj / r.projection_norm;
    const fem::DiscreteField diff = phi - psi;
    const torsion::Field U = backend.solve(alpha, fluxes[k]);
    r.r1 = fem::h_alpha_norm(sys, alpha, diff - U);
    const double n2 = fem::h_alpha_norm(sys, alpha, diff);
    r.r2 = n2 * n2;
    r.flux_norm2 = fem::boundary_dot(sys, fluxes[k], fluxes[k]);
    r.boundary_mass = psi.dot(sys.B * psi);
    out.push_back(r);
  }
  return out;
}

}  // namespace robin::asymptotics
