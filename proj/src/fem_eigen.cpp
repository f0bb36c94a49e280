// Dense generalized eigensolver for the FEM matrices (LAPACK dsygvx).
#include <lapacke.h>

#include <Eigen/Dense>
#include <string>

#include "robin/error.hpp"
#include "robin/fem.hpp"

namespace robin::fem {

namespace {

std::vector<EigenPair> lowest_pairs(Eigen::MatrixXd A, Eigen::MatrixXd B, int k) {
  const auto n = static_cast<lapack_int>(A.rows());
  if (k < 1 || k > n) throw FemError("requested " + std::to_string(k) + " eigenpairs of a " + std::to_string(n) + "-dimensional problem");
  lapack_int found = 0;
  Eigen::VectorXd w(n);
  Eigen::MatrixXd Z(n, k);
  std::vector<lapack_int> ifail(static_cast<std::size_t>(n));
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  const lapack_int info = LAPACKE_dsygvx(LAPACK_COL_MAJOR, 1, 'V', 'I', 'U', n, A.data(), n, B.data(), n, 0.0, 0.0, 1, k,
                                         abstol, &found, w.data(), Z.data(), n, ifail.data());
  if (info > n) throw FemError("mass matrix is not positive definite (dsygvx info " + std::to_string(info) + ")");
  if (info != 0) throw FemError("dense eigensolver failed (dsygvx info " + std::to_string(info) + ")");
  if (found != k) throw FemError("dense eigensolver returned " + std::to_string(found) + " of " + std::to_string(k) + " pairs");
  std::vector<EigenPair> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    EigenPair p;
    p.index = i + 1;
    p.lambda = w[i];
    p.vector = Z.col(i);
    Eigen::Index arg = 0;
    p.vector.cwiseAbs().maxCoeff(&arg);
    if (p.vector[arg] < 0.0) p.vector = -p.vector;
    out.push_back(std::move(p));
  }
  return out;
}

void check_cap(std::size_t n, std::size_t cap) {
  if (n > cap) {
    throw FemError("dense eigensolver limited to " + std::to_string(cap) + " unknowns, system has " + std::to_string(n));
  }
}

}  // namespace

std::vector<EigenPair> robin_eigs(const FemSystem& sys, double alpha, int k, std::size_t cap) {
  if (!(alpha >= 0.0)) throw FemError("alpha must be non-negative");
  check_cap(sys.node_count(), cap);
  Eigen::MatrixXd A = Eigen::MatrixXd(sys.K) + alpha * Eigen::MatrixXd(sys.B);
  return lowest_pairs(std::move(A), Eigen::MatrixXd(sys.M), k);
}

std::vector<EigenPair> dirichlet_eigs(const FemSystem& sys, int k, std::size_t cap) {
  const auto& inner = sys.interior_nodes;
  check_cap(inner.size(), cap);
  if (inner.empty()) throw FemError("mesh has no interior nodes");
  const auto ni = static_cast<Eigen::Index>(inner.size());
  std::vector<long> position(sys.node_count(), -1);
  for (std::size_t i = 0; i < inner.size(); ++i) position[inner[i]] = static_cast<long>(i);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(ni, ni);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(ni, ni);
  auto scatter = [&](const SparseMatrix& S, Eigen::MatrixXd& D) {
    for (Eigen::Index c = 0; c < S.outerSize(); ++c) {
      for (SparseMatrix::InnerIterator it(S, c); it; ++it) {
        const long r = position[static_cast<std::size_t>(it.row())];
        const long cc = position[static_cast<std::size_t>(it.col())];
        if (r >= 0 && cc >= 0) D(r, cc) = it.value();
      }
    }
  };
  scatter(sys.K, A);
  scatter(sys.M, B);
  auto pairs = lowest_pairs(std::move(A), std::move(B), k);
  for (auto& p : pairs) {
    DiscreteField full = DiscreteField::Zero(static_cast<Eigen::Index>(sys.node_count()));
    for (std::size_t i = 0; i < inner.size(); ++i) full[static_cast<Eigen::Index>(inner[i])] = p.vector[static_cast<Eigen::Index>(i)];
    p.vector = std::move(full);
  }
  return pairs;
}

}  // namespace robin::fem
