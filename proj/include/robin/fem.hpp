#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "robin/geometry.hpp"

namespace robin::fem {

using SparseMatrix = Eigen::SparseMatrix<double>;
/// Nodal values over all mesh nodes.
using DiscreteField = Eigen::VectorXd;
/// Nodal values over boundary nodes, in boundary loop order.
using BoundaryField = Eigen::VectorXd;

struct ElementMatrices {
  Eigen::Matrix3d stiffness;
  Eigen::Matrix3d mass;
  double area = 0.0;
};

/// Exact P1 element integrals on the triangle (a, b, c).
[[nodiscard]] ElementMatrices element_matrices(const Point& a, const Point& b, const Point& c);

struct FemSystem {
  TriMesh mesh;
  SparseMatrix K;   // int grad u . grad v
  SparseMatrix M;   // int u v
  SparseMatrix B;   // boundary int u v, full node numbering
  SparseMatrix Bd;  // same, restricted to boundary nodes
  std::vector<std::size_t> boundary_nodes;  // loop order
  std::vector<long> boundary_index;          // node -> position in boundary_nodes, -1 if interior
  std::vector<std::size_t> interior_nodes;

  [[nodiscard]] std::size_t node_count() const { return mesh.nodes.size(); }
  [[nodiscard]] std::size_t boundary_count() const { return boundary_nodes.size(); }
  [[nodiscard]] BoundaryField trace(const DiscreteField& u) const;
  /// Field equal to f on the boundary and zero inside.
  [[nodiscard]] DiscreteField extend_by_zero(const BoundaryField& f) const;
  /// Nodal interpolant of a function of (x, y).
  template <class F>
  [[nodiscard]] DiscreteField interpolate(F&& fn) const {
    DiscreteField u(static_cast<Eigen::Index>(node_count()));
    for (std::size_t i = 0; i < node_count(); ++i) u[static_cast<Eigen::Index>(i)] = fn(mesh.nodes[i].x, mesh.nodes[i].y);
    return u;
  }
};

/// Throws FemError for a triangle whose area is below 1e-14 of the mean.
[[nodiscard]] FemSystem assemble(const TriMesh& mesh);

struct EigenPair {
  int index = 1;  // 1-based position in the ascending spectrum
  double lambda = 0.0;
  DiscreteField vector;  // M-normalized; largest-magnitude entry positive
};

inline constexpr std::size_t kDenseCap = 6000;

/// Lowest k pairs of (K + alpha B) u = lambda M u.
[[nodiscard]] std::vector<EigenPair> robin_eigs(const FemSystem& sys, double alpha, int k,
                                                std::size_t cap = kDenseCap);

/// Lowest k pairs of the problem restricted to interior nodes; vectors are
/// extended by zero to the boundary.
[[nodiscard]] std::vector<EigenPair> dirichlet_eigs(const FemSystem& sys, int k, std::size_t cap = kDenseCap);

enum class FluxMode { eigen, harmonic };

/// Normal derivative recovered from the residual functional: solves
/// Bd g = (K u - lambda M u) on the boundary rows. Harmonic mode requires
/// lambda == 0.
[[nodiscard]] BoundaryField variational_flux(const FemSystem& sys, const DiscreteField& u, double lambda,
                                             FluxMode mode);

/// sqrt(u'Ku + alpha u'Bu).
[[nodiscard]] double h_alpha_norm(const FemSystem& sys, double alpha, const DiscreteField& u);

[[nodiscard]] double m_dot(const FemSystem& sys, const DiscreteField& u, const DiscreteField& v);
[[nodiscard]] double k_dot(const FemSystem& sys, const DiscreteField& u, const DiscreteField& v);
/// Boundary L2 product of two boundary fields (each edge counted once).
[[nodiscard]] double boundary_dot(const FemSystem& sys, const BoundaryField& f, const BoundaryField& g);

/// Sum_i (u' M b_i) b_i; throws FemError when the basis Gram matrix deviates
/// from the identity by more than 1e-8.
[[nodiscard]] DiscreteField l2_project(const std::vector<DiscreteField>& basis, const DiscreteField& u,
                                       const SparseMatrix& M);

/// `i j value` lines, 0-based, upper and lower entries both written.
void write_coordinate(std::ostream& out, const SparseMatrix& A);

}  // namespace robin::fem
