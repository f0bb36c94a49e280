#include "robin/fem.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "robin/error.hpp"

namespace robin::fem {

ElementMatrices element_matrices(const Point& a, const Point& b, const Point& c) {
  ElementMatrices e;
  e.area = signed_area(a, b, c);
  // Gradient of barycentric i is (y_j - y_k, x_k - x_j) / (2A).
  const double bx[3] = {b.y - c.y, c.y - a.y, a.y - b.y};
  const double by[3] = {c.x - b.x, a.x - c.x, b.x - a.x};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      e.stiffness(i, j) = (bx[i] * bx[j] + by[i] * by[j]) / (4.0 * e.area);
      e.mass(i, j) = e.area / 12.0 * (i == j ? 2.0 : 1.0);
    }
  }
  return e;
}

BoundaryField FemSystem::trace(const DiscreteField& u) const {
  BoundaryField f(static_cast<Eigen::Index>(boundary_count()));
  for (std::size_t i = 0; i < boundary_count(); ++i) f[static_cast<Eigen::Index>(i)] = u[static_cast<Eigen::Index>(boundary_nodes[i])];
  return f;
}

DiscreteField FemSystem::extend_by_zero(const BoundaryField& f) const {
  if (static_cast<std::size_t>(f.size()) != boundary_count()) throw FemError("boundary field has wrong length");
  DiscreteField u = DiscreteField::Zero(static_cast<Eigen::Index>(node_count()));
  for (std::size_t i = 0; i < boundary_count(); ++i) u[static_cast<Eigen::Index>(boundary_nodes[i])] = f[static_cast<Eigen::Index>(i)];
  return u;
}

FemSystem assemble(const TriMesh& mesh) {
  validate(mesh);
  FemSystem sys;
  sys.mesh = mesh;
  const auto n = static_cast<Eigen::Index>(mesh.nodes.size());
  const double mean_area = mesh.area() / static_cast<double>(mesh.triangles.size());

  std::vector<Eigen::Triplet<double>> k_entries;
  std::vector<Eigen::Triplet<double>> m_entries;
  k_entries.reserve(9 * mesh.triangles.size());
  m_entries.reserve(9 * mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const auto e = element_matrices(mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]);
    if (!(e.area >= 1e-14 * mean_area)) throw FemError("degenerate triangle " + std::to_string(t));
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const auto r = static_cast<Eigen::Index>(tri[static_cast<std::size_t>(i)]);
        const auto c = static_cast<Eigen::Index>(tri[static_cast<std::size_t>(j)]);
        k_entries.emplace_back(r, c, e.stiffness(i, j));
        m_entries.emplace_back(r, c, e.mass(i, j));
      }
    }
  }
  sys.K.resize(n, n);
  sys.M.resize(n, n);
  sys.K.setFromTriplets(k_entries.begin(), k_entries.end());
  sys.M.setFromTriplets(m_entries.begin(), m_entries.end());

  sys.boundary_nodes = mesh.boundary_loop();
  sys.boundary_index.assign(mesh.nodes.size(), -1);
  for (std::size_t i = 0; i < sys.boundary_nodes.size(); ++i) sys.boundary_index[sys.boundary_nodes[i]] = static_cast<long>(i);
  for (std::size_t v = 0; v < mesh.nodes.size(); ++v) {
    if (sys.boundary_index[v] < 0) sys.interior_nodes.push_back(v);
  }

  std::vector<Eigen::Triplet<double>> b_entries;
  std::vector<Eigen::Triplet<double>> bd_entries;
  for (const auto& edge : mesh.boundary_edges) {
    const double dx = mesh.nodes[edge.b].x - mesh.nodes[edge.a].x;
    const double dy = mesh.nodes[edge.b].y - mesh.nodes[edge.a].y;
    const double len = std::hypot(dx, dy);
    const std::size_t ends[2] = {edge.a, edge.b};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const double v = len / 6.0 * (i == j ? 2.0 : 1.0);
        b_entries.emplace_back(static_cast<Eigen::Index>(ends[i]), static_cast<Eigen::Index>(ends[j]), v);
        bd_entries.emplace_back(sys.boundary_index[ends[i]], sys.boundary_index[ends[j]], v);
      }
    }
  }
  const auto nb = static_cast<Eigen::Index>(sys.boundary_nodes.size());
  sys.B.resize(n, n);
  sys.Bd.resize(nb, nb);
  sys.B.setFromTriplets(b_entries.begin(), b_entries.end());
  sys.Bd.setFromTriplets(bd_entries.begin(), bd_entries.end());
  return sys;
}

BoundaryField variational_flux(const FemSystem& sys, const DiscreteField& u, double lambda, FluxMode mode) {
  if (static_cast<std::size_t>(u.size()) != sys.node_count()) throw FemError("field has wrong length");
  if (mode == FluxMode::harmonic && lambda != 0.0) throw FemError("harmonic flux recovery needs lambda = 0");
  const DiscreteField residual = sys.K * u - lambda * (sys.M * u);
  const BoundaryField r = sys.trace(residual);
  Eigen::SimplicialLDLT<SparseMatrix> solver(sys.Bd);
  if (solver.info() != Eigen::Success) throw FemError("boundary mass matrix is singular");
  return solver.solve(r);
}

double h_alpha_norm(const FemSystem& sys, double alpha, const DiscreteField& u) {
  const double e = k_dot(sys, u, u) + alpha * u.dot(sys.B * u);
  return std::sqrt(std::max(e, 0.0));
}

double m_dot(const FemSystem& sys, const DiscreteField& u, const DiscreteField& v) { return u.dot(sys.M * v); }

double k_dot(const FemSystem& sys, const DiscreteField& u, const DiscreteField& v) { return u.dot(sys.K * v); }

double boundary_dot(const FemSystem& sys, const BoundaryField& f, const BoundaryField& g) {
  if (static_cast<std::size_t>(f.size()) != sys.boundary_count() || f.size() != g.size()) {
    throw FemError("boundary field has wrong length");
  }
  return f.dot(sys.Bd * g);
}

DiscreteField l2_project(const std::vector<DiscreteField>& basis, const DiscreteField& u, const SparseMatrix& M) {
  DiscreteField out = DiscreteField::Zero(u.size());
  std::vector<DiscreteField> mb;
  mb.reserve(basis.size());
  for (const auto& b : basis) {
    if (b.size() != u.size()) throw FemError("basis field has wrong length");
    mb.push_back(M * b);
  }
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const double g = basis[i].dot(mb[j]);
      if (std::abs(g - (i == j ? 1.0 : 0.0)) > 1e-8) {
        throw FemError("projection basis is not M-orthonormal (Gram entry " + std::to_string(i) + "," +
                       std::to_string(j) + " = " + std::to_string(g) + ")");
      }
    }
  }
  for (std::size_t i = 0; i < basis.size(); ++i) out += u.dot(mb[i]) * basis[i];
  return out;
}

void write_coordinate(std::ostream& out, const SparseMatrix& A) {
  char buf[64];
  for (Eigen::Index c = 0; c < A.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(A, c); it; ++it) {
      std::snprintf(buf, sizeof buf, "%.17g", it.value());
      out << it.row() << ' ' << it.col() << ' ' << buf << '\n';
    }
  }
}

}  // namespace robin::fem
