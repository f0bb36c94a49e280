#include "robin/torsion.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <random>
#include <string>

#include "robin/error.hpp"
#include "robin/exact1d.hpp"

namespace robin::torsion {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error("alpha must be positive and finite");
}

void require_size(const TorsionBackend& backend, const BoundaryField& f) {
  if (static_cast<std::size_t>(f.size()) != backend.boundary_size()) {
    throw Error("boundary data has " + std::to_string(f.size()) + " values, expected " +
                std::to_string(backend.boundary_size()));
  }
}

}  // namespace

// ---- interval ----

Field IntervalTorsion::solve(double alpha, const BoundaryField& f) const {
  require_alpha(alpha);
  require_size(*this, f);
  const auto t = exact1d::torsion_1d(alpha, f[0], f[1]);
  return Eigen::Vector2d(t.U0(), t.U1());
}

Field IntervalTorsion::harmonic_extension(const BoundaryField& f) const {
  require_size(*this, f);
  return f;
}

std::optional<BoundaryField> IntervalTorsion::harmonic_flux(const Field& u) const {
  const double slope = u[1] - u[0];
  return BoundaryField(Eigen::Vector2d(-slope, slope));
}

double IntervalTorsion::boundary_dot(const BoundaryField& f, const BoundaryField& g) const { return f.dot(g); }

double IntervalTorsion::grad_dot(const Field& u, const Field& v) const { return (u[1] - u[0]) * (v[1] - v[0]); }

double IntervalTorsion::l2_dot(const Field& u, const Field& v) const {
  // int_0^1 of the product of two affine functions.
  return (2.0 * u[0] * v[0] + u[0] * v[1] + u[1] * v[0] + 2.0 * u[1] * v[1]) / 6.0;
}

// ---- FEM ----

struct FemTorsion::Factorizations {
  std::map<double, std::unique_ptr<Eigen::SimplicialLDLT<fem::SparseMatrix>>> robin;
  std::unique_ptr<Eigen::SimplicialLDLT<fem::SparseMatrix>> interior;
  fem::SparseMatrix interior_boundary;  // K restricted to interior rows, boundary columns
};

FemTorsion::FemTorsion(std::shared_ptr<const fem::FemSystem> sys)
    : sys_(std::move(sys)), cache_(std::make_unique<Factorizations>()) {
  if (!sys_) throw Error("null FEM system");
}

FemTorsion::~FemTorsion() = default;

Field FemTorsion::solve(double alpha, const BoundaryField& f) const {
  require_alpha(alpha);
  require_size(*this, f);
  const Eigen::SimplicialLDLT<fem::SparseMatrix>* solver = nullptr;
  {
    std::lock_guard lock(mutex_);
    auto& slot = cache_->robin[alpha];
    if (!slot) {
      fem::SparseMatrix A = sys_->K + alpha * sys_->B;
      slot = std::make_unique<Eigen::SimplicialLDLT<fem::SparseMatrix>>(A);
      if (slot->info() != Eigen::Success) {
        slot.reset();
        throw FemError("factorization of K + alpha B failed");
      }
    }
    solver = slot.get();
  }
  const Field load = sys_->B * sys_->extend_by_zero(f);
  return solver->solve(load);
}

Field FemTorsion::harmonic_extension(const BoundaryField& f) const {
  require_size(*this, f);
  const auto& inner = sys_->interior_nodes;
  Field u = sys_->extend_by_zero(f);
  if (inner.empty()) return u;
  {
    std::lock_guard lock(mutex_);
    if (!cache_->interior) {
      std::vector<long> position(sys_->node_count(), -1);
      for (std::size_t i = 0; i < inner.size(); ++i) position[inner[i]] = static_cast<long>(i);
      std::vector<Eigen::Triplet<double>> kii;
      std::vector<Eigen::Triplet<double>> kib;
      for (Eigen::Index c = 0; c < sys_->K.outerSize(); ++c) {
        for (fem::SparseMatrix::InnerIterator it(sys_->K, c); it; ++it) {
          const long r = position[static_cast<std::size_t>(it.row())];
          if (r < 0) continue;
          const long ci = position[static_cast<std::size_t>(it.col())];
          if (ci >= 0) {
            kii.emplace_back(r, ci, it.value());
          } else {
            kib.emplace_back(r, sys_->boundary_index[static_cast<std::size_t>(it.col())], it.value());
          }
        }
      }
      const auto ni = static_cast<Eigen::Index>(inner.size());
      fem::SparseMatrix A(ni, ni);
      A.setFromTriplets(kii.begin(), kii.end());
      cache_->interior_boundary.resize(ni, static_cast<Eigen::Index>(sys_->boundary_count()));
      cache_->interior_boundary.setFromTriplets(kib.begin(), kib.end());
      cache_->interior = std::make_unique<Eigen::SimplicialLDLT<fem::SparseMatrix>>(A);
      if (cache_->interior->info() != Eigen::Success) {
        cache_->interior.reset();
        throw FemError("factorization of the interior stiffness failed");
      }
    }
  }
  const Eigen::VectorXd interior = cache_->interior->solve(-(cache_->interior_boundary * f));
  for (std::size_t i = 0; i < inner.size(); ++i) u[static_cast<Eigen::Index>(inner[i])] = interior[static_cast<Eigen::Index>(i)];
  return u;
}

std::optional<BoundaryField> FemTorsion::harmonic_flux(const Field& u) const {
  return fem::variational_flux(*sys_, u, 0.0, fem::FluxMode::harmonic);
}

double FemTorsion::boundary_dot(const BoundaryField& f, const BoundaryField& g) const {
  return fem::boundary_dot(*sys_, f, g);
}

double FemTorsion::grad_dot(const Field& u, const Field& v) const { return fem::k_dot(*sys_, u, v); }

double FemTorsion::l2_dot(const Field& u, const Field& v) const { return fem::m_dot(*sys_, u, v); }

// ---- analysis ----

double TorsionResult::identity_defect() const {
  const double scale = std::max(std::abs(T), 1e-300);
  return std::abs(T - (grad_energy + boundary_energy)) / scale;
}

TorsionResult torsion_solve(const TorsionBackend& backend, double alpha, const BoundaryField& f) {
  TorsionResult r;
  r.alpha = alpha;
  r.U = backend.solve(alpha, f);
  const BoundaryField tr = backend.trace(r.U);
  r.T = backend.boundary_dot(f, tr);
  r.grad_energy = backend.grad_dot(r.U, r.U);
  r.boundary_energy = alpha * backend.boundary_dot(tr, tr);
  r.trace_alphaU = alpha * tr;
  return r;
}

double torsion_max_form(const TorsionBackend& backend, double alpha, const BoundaryField& f, const Field& trial) {
  require_alpha(alpha);
  require_size(backend, f);
  const BoundaryField tr = backend.trace(trial);
  const double denom = backend.grad_dot(trial, trial) + alpha * backend.boundary_dot(tr, tr);
  if (!(denom > 0.0)) throw Error("trial function must be nonzero");
  const double work = backend.boundary_dot(f, tr);
  return work * work / denom;
}

BoundReport check_bounds(const TorsionBackend& backend, double alpha, const BoundaryField& f) {
  const auto sol = torsion_solve(backend, alpha, f);
  const BoundaryField ones = BoundaryField::Ones(f.size());
  BoundReport rep;
  rep.alpha = alpha;
  rep.alphaT = alpha * sol.T;
  rep.f_norm2 = backend.boundary_dot(f, f);
  const double mean = backend.boundary_dot(f, ones);
  rep.mean_lower = mean * mean / backend.boundary_measure();

  const Field uf = backend.harmonic_extension(f);
  const double grad2 = backend.grad_dot(uf, uf);
  rep.grad_extension = std::sqrt(std::max(grad2, 0.0));
  rep.extension_lower = alpha * rep.f_norm2 * rep.f_norm2 / (grad2 + alpha * rep.f_norm2);

  const BoundaryField diff = sol.trace_alphaU - f;
  rep.trace_distance2 = backend.boundary_dot(diff, diff);
  rep.trace_bound = 2.0 * std::sqrt(rep.f_norm2) * rep.grad_extension / std::sqrt(alpha);

  if (auto flux = backend.harmonic_flux(uf)) {
    rep.flux_rate_bound = std::sqrt(std::max(backend.boundary_dot(*flux, *flux), 0.0)) / alpha;
  }
  const Field gap = alpha * sol.U - uf;
  rep.extension_energy_gap = std::sqrt(std::max(backend.grad_dot(gap, gap), 0.0));
  return rep;
}

MonotonicityResult monotonicity_check(const TorsionBackend& backend, double alpha, const BoundaryField& f,
                                      double dalpha) {
  if (!(dalpha > 0.0) || !(alpha - dalpha > 0.0)) throw Error("need 0 < dalpha < alpha");
  const double up = (alpha + dalpha) * torsion_solve(backend, alpha + dalpha, f).T;
  const double down = (alpha - dalpha) * torsion_solve(backend, alpha - dalpha, f).T;
  MonotonicityResult r;
  r.fd_derivative = (up - down) / (2.0 * dalpha);
  r.grad_energy = torsion_solve(backend, alpha, f).grad_energy;
  return r;
}

std::vector<BoundaryField> random_boundary_data(std::size_t size, std::uint32_t seed, std::size_t count) {
  std::minstd_rand gen(seed);
  const double lo = static_cast<double>(std::minstd_rand::min());
  const double span = static_cast<double>(std::minstd_rand::max()) - lo;
  std::vector<BoundaryField> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    BoundaryField f(static_cast<Eigen::Index>(size));
    for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = 2.0 * (static_cast<double>(gen()) - lo) / span - 1.0;
    out.push_back(std::move(f));
  }
  return out;
}

BoundaryField random_boundary_data(std::size_t size, std::uint32_t seed) {
  return random_boundary_data(size, seed, 1).front();
}

}  // namespace robin::torsion
