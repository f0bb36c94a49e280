#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "robin/error.hpp"
#include "robin/exact1d.hpp"
#include "robin/torsion.hpp"

using namespace robin;
using namespace robin::torsion;

namespace {

std::shared_ptr<const fem::FemSystem> square_system(double h) {
  static std::map<double, std::shared_ptr<const fem::FemSystem>> cache;
  auto& slot = cache[h];
  if (!slot) slot = std::make_shared<const fem::FemSystem>(fem::assemble(build_mesh(Rectangle{1, 1}, h)));
  return slot;
}

const FemTorsion& square_backend() {
  static const FemTorsion backend(square_system(0.05));
  return backend;
}

BoundaryField pair(double a, double b) {
  BoundaryField f(2);
  f << a, b;
  return f;
}

}  // namespace

TEST(Torsion, IntervalClosedForms) {
  const IntervalTorsion b;
  const auto r = torsion_solve(b, 2.0, pair(1, -1));
  EXPECT_NEAR(r.T, 0.5, 1e-15);
  EXPECT_NEAR(r.U[0], 0.25, 1e-15);
  EXPECT_NEAR(r.U[1], -0.25, 1e-15);
  EXPECT_NEAR(r.grad_energy, 0.25, 1e-15);

  const auto z = torsion_solve(b, 3.0, pair(0, 0));
  EXPECT_EQ(z.T, 0.0);
  EXPECT_EQ(z.U.norm(), 0.0);
}

TEST(Torsion, IntervalMatchesExact1d) {
  const IntervalTorsion b;
  for (double a : {0.3, 4.0, 250.0}) {
    const auto r = torsion_solve(b, a, pair(0.7, -0.2));
    const auto t = exact1d::torsion_1d(a, 0.7, -0.2);
    EXPECT_NEAR(r.T, t.T, 1e-15);
    EXPECT_NEAR(r.grad_energy, t.grad_energy(), 1e-15);
    EXPECT_NEAR(r.boundary_energy, t.boundary_energy(), 1e-15);
    EXPECT_NEAR(b.l2_dot(r.U, r.U), t.l2_mass(), 1e-15);
    EXPECT_LT(r.identity_defect(), 1e-13);
  }
}

TEST(Torsion, IntervalConstantDatumSaturatesBounds) {
  const IntervalTorsion b;
  for (double a : {0.5, 10.0, 1e3}) {
    const auto rep = check_bounds(b, a, pair(1.5, 1.5));
    EXPECT_NEAR(rep.alphaT, 4.5, 1e-13);
    EXPECT_NEAR(rep.slack_mean_lower(), 0.0, 1e-13);
    EXPECT_NEAR(rep.slack_upper(), 0.0, 1e-13);
    EXPECT_GE(rep.slack_extension_lower(), -1e-13);
    EXPECT_NEAR(rep.trace_distance2, 0.0, 1e-24);
    EXPECT_GE(rep.slack_trace(), 0.0);
  }
}

TEST(Torsion, IntervalBoundsHold) {
  const IntervalTorsion b;
  const auto data = random_boundary_data(2, 42, 20);
  for (const auto& f : data) {
    for (double a : {1.0, 10.0, 100.0}) {
      const auto rep = check_bounds(b, a, f);
      EXPECT_GE(rep.slack_mean_lower(), -1e-12);
      EXPECT_GE(rep.slack_upper(), -1e-12);
      EXPECT_GE(rep.slack_extension_lower(), -1e-12);
      EXPECT_GE(rep.slack_trace(), -1e-12);
      ASSERT_TRUE(rep.flux_rate_bound.has_value());
      EXPECT_LE(std::sqrt(rep.trace_distance2), *rep.flux_rate_bound + 1e-12);
    }
  }
}

TEST(Torsion, FemConstantDatumIsExact) {
  const auto& b = square_backend();
  const BoundaryField one = BoundaryField::Ones(static_cast<Eigen::Index>(b.boundary_size()));
  for (double a : {0.5, 3.0, 40.0}) {
    const auto r = torsion_solve(b, a, one);
    EXPECT_NEAR(a * r.T, 4.0, 1e-11);
    EXPECT_NEAR(r.U.maxCoeff(), 1.0 / a, 1e-12);
    EXPECT_NEAR(r.U.minCoeff(), 1.0 / a, 1e-12);
  }
}

TEST(Torsion, FemIdentityAndBounds) {
  const auto& b = square_backend();
  const double h = b.mesh_size();
  const auto data = random_boundary_data(b.boundary_size(), 42, 20);
  for (const auto& f : data) {
    for (double a : {1.0, 10.0, 100.0}) {
      const auto r = torsion_solve(b, a, f);
      EXPECT_LT(r.identity_defect(), 1e-9);
      EXPECT_GT(r.T, 0.0);
      const auto rep = check_bounds(b, a, f);
      const double scale = rep.f_norm2;
      EXPECT_GE(rep.slack_mean_lower(), -1e-8 * scale);
      EXPECT_GE(rep.slack_upper(), -1e-8 * scale);
      EXPECT_GE(rep.slack_extension_lower(), -1e-8 * scale);
      EXPECT_GE(rep.slack_trace(), -1e-8 * scale);
      ASSERT_TRUE(rep.flux_rate_bound.has_value());
      EXPECT_LE(std::sqrt(rep.trace_distance2), *rep.flux_rate_bound * (1.0 + h) + 1e-8);
    }
  }
}

TEST(Torsion, FemLinearity) {
  const auto& b = square_backend();
  const auto data = random_boundary_data(b.boundary_size(), 9, 2);
  const double a = 7.0;
  const auto u1 = b.solve(a, data[0]);
  const auto u2 = b.solve(a, data[1]);
  const auto sum = b.solve(a, data[0] + data[1]);
  const auto scaled = b.solve(a, -3.5 * data[0]);
  EXPECT_LT((sum - u1 - u2).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((scaled + 3.5 * u1).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Torsion, MaxForm) {
  const auto& b = square_backend();
  const auto f = random_boundary_data(b.boundary_size(), 5);
  const double a = 6.0;
  const auto r = torsion_solve(b, a, f);
  EXPECT_NEAR(torsion_max_form(b, a, f, r.U), r.T, 1e-9 * r.T);

  const Field c = Field::Constant(r.U.size(), 0.7);
  const double mean = f.dot(b.system().Bd * BoundaryField::Ones(f.size()));
  EXPECT_NEAR(torsion_max_form(b, a, f, c), mean * mean / (a * 4.0), 1e-12);

  const auto other = random_boundary_data(b.boundary_size(), 6);
  const BoundaryField orth = other - (b.boundary_dot(f, other) / b.boundary_dot(f, f)) * f;
  const auto trial = b.harmonic_extension(orth);
  EXPECT_LT(torsion_max_form(b, a, f, trial), 1e-20);

  const auto perturbed = b.harmonic_extension(f);
  EXPECT_LE(torsion_max_form(b, a, f, perturbed), r.T + 1e-12);
  EXPECT_THROW((void)torsion_max_form(b, a, f, Field::Zero(r.U.size())), Error);
}

TEST(Torsion, HarmonicExtensionHasTrace) {
  const auto& b = square_backend();
  const auto& sys = b.system();
  const auto f = random_boundary_data(b.boundary_size(), 11);
  const auto u = b.harmonic_extension(f);
  EXPECT_LT((b.trace(u) - f).cwiseAbs().maxCoeff(), 1e-14);
  const Eigen::VectorXd r = sys.K * u;
  for (auto i : sys.interior_nodes) EXPECT_NEAR(r[static_cast<Eigen::Index>(i)], 0.0, 1e-10);
}

TEST(Torsion, TraceDistanceDecays) {
  const auto& b = square_backend();
  const auto f = random_boundary_data(b.boundary_size(), 3);
  double prev = 1e9;
  for (double a : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    const auto rep = check_bounds(b, a, f);
    EXPECT_LT(rep.trace_distance2, prev);
    EXPECT_LE(rep.trace_distance2, rep.trace_bound);
    prev = rep.trace_distance2;
  }
}

TEST(Torsion, ExtensionEnergyGapShrinks) {
  // alpha U -> U_f in energy, checked at a fixed mesh inside alpha <= 0.1/h
  const FemTorsion b(square_system(0.025));
  const auto f = random_boundary_data(b.boundary_size(), 4);
  double prev = 1e9;
  for (double a : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const auto rep = check_bounds(b, a, f);
    EXPECT_LT(rep.extension_energy_gap, prev);
    prev = rep.extension_energy_gap;
  }
}

TEST(Torsion, AlphaTNondecreasing) {
  const auto& b = square_backend();
  const auto f = random_boundary_data(b.boundary_size(), 8);
  double prev = 0.0;
  for (double a = 0.1; a < 300; a *= 2) {
    const double at = a * torsion_solve(b, a, f).T;
    EXPECT_GT(at, prev);
    prev = at;
  }
}

TEST(Torsion, MonotonicityInterval) {
  const IntervalTorsion b;
  for (double a : {0.5, 3.0, 50.0}) {
    const auto m = monotonicity_check(b, a, pair(1, -1), a / 100);
    EXPECT_NEAR(m.grad_energy, 4.0 / ((2 + a) * (2 + a)), 1e-15);
    // central difference of 2a/(2+a) is exact up to O(da^2)
    EXPECT_NEAR(m.fd_derivative, m.grad_energy, 1e-3 * m.grad_energy);
    const auto c = monotonicity_check(b, a, pair(0.4, 0.4), a / 100);
    EXPECT_NEAR(c.fd_derivative, 0.0, 1e-13);
    EXPECT_EQ(c.grad_energy, 0.0);
  }
}

TEST(Torsion, MonotonicityFemSecondOrder) {
  const auto& b = square_backend();
  const auto f = b.system().trace(b.system().interpolate([](double x, double) { return x; }));
  const double a = 2.0;
  const auto coarse = monotonicity_check(b, a, f, a / 10);
  const auto fine = monotonicity_check(b, a, f, a / 20);
  const double e1 = std::abs(coarse.fd_derivative - coarse.grad_energy);
  const double e2 = std::abs(fine.fd_derivative - fine.grad_energy);
  EXPECT_GT(e1 / e2, 3.5);
  EXPECT_LT(e1 / e2, 4.5);
  const auto m = monotonicity_check(b, a, f, a / 100);
  EXPECT_NEAR(m.fd_derivative, m.grad_energy, 1e-2 * m.grad_energy);
  EXPECT_THROW((void)monotonicity_check(b, a, f, a), Error);
}

TEST(Torsion, RandomDataReproducible) {
  const auto a = random_boundary_data(50, 42);
  const auto b = random_boundary_data(50, 42);
  const auto c = random_boundary_data(50, 43);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_LE(a.maxCoeff(), 1.0);
  EXPECT_GE(a.minCoeff(), -1.0);
  const auto many = random_boundary_data(50, 42, 3);
  EXPECT_EQ(many[0], a);
  EXPECT_NE(many[1], many[0]);
}

TEST(Torsion, RejectsBadInput) {
  const IntervalTorsion b;
  EXPECT_THROW((void)torsion_solve(b, 0.0, pair(1, 1)), Error);
  EXPECT_THROW((void)torsion_solve(b, 1.0, BoundaryField::Ones(3)), Error);
}
