#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "robin/error.hpp"
#include "robin/exact1d.hpp"
#include "robin/separable.hpp"

using namespace robin::separable;
using oracle::pi;

namespace {

RectMode dir_mode(double l, double L, int n, int m) {
  RectMode r;
  r.n = n;
  r.m = m;
  r.l = l;
  r.L = L;
  r.lambda = rect_dirichlet_eigenvalue(l, L, n, m);
  return r;
}

}  // namespace

TEST(Separable, RectangleDegeneratePair) {
  EXPECT_NEAR(rect_dirichlet_eigenvalue(1, 2, 1, 4), 5 * pi * pi, 1e-12);
  EXPECT_NEAR(rect_dirichlet_eigenvalue(1, 2, 2, 2), 5 * pi * pi, 1e-12);
  EXPECT_NEAR(rect_dirichlet_eigenvalue(1, 2, 1, 1), pi * pi * 1.25, 1e-13);
  EXPECT_EQ(rect_dirichlet_eigenvalue(1, 1, 1, 2), rect_dirichlet_eigenvalue(1, 1, 2, 1));
}

TEST(Separable, DirichletSpectrumOrderAndTies) {
  const auto s = rect_dirichlet_spectrum(1, 2, 12);
  ASSERT_EQ(s.size(), 12u);
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_LE(s[i - 1].lambda, s[i].lambda);
  EXPECT_EQ(s[0].n, 1);
  EXPECT_EQ(s[0].m, 1);
  // 5 pi^2 appears as (1,4) then (2,2)
  int found = -1;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (std::abs(s[i].lambda - 5 * pi * pi) < 1e-9) {
      found = static_cast<int>(i);
      break;
    }
  }
  ASSERT_GE(found, 0);
  EXPECT_EQ(s[found].n, 1);
  EXPECT_EQ(s[found].m, 4);
  EXPECT_EQ(s[found + 1].n, 2);
  EXPECT_EQ(s[found + 1].m, 2);

  const auto sq = rect_dirichlet_spectrum(1, 1, 3);
  EXPECT_EQ(sq[1].n, 1);
  EXPECT_EQ(sq[1].m, 2);
  EXPECT_EQ(sq[2].n, 2);
  EXPECT_EQ(sq[2].m, 1);
}

TEST(Separable, SpectrumTruncationMissesNothing) {
  // brute force over a box far larger than needed
  for (auto [l, L] : {std::pair{1.0, 2.0}, std::pair{1.0, 7.3}, std::pair{0.4, 1.0}}) {
    std::vector<double> all;
    for (int n = 1; n <= 60; ++n) {
      for (int m = 1; m <= 60; ++m) all.push_back(rect_dirichlet_eigenvalue(l, L, n, m));
    }
    std::sort(all.begin(), all.end());
    const auto s = rect_dirichlet_spectrum(l, L, 40);
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(s[i].lambda, all[i], 1e-10 * all[i]);
  }
}

TEST(Separable, RobinRectangleIsTensorSum) {
  const double alpha = 7.0;
  for (int n = 1; n <= 3; ++n) {
    for (int m = 1; m <= 3; ++m) {
      const double ref = oracle::robin_1d(n, alpha * 1.0) / 1.0 + oracle::robin_1d(m, alpha * 2.0) / 4.0;
      EXPECT_NEAR(rect_robin_eigenvalue(1, 2, alpha, n, m), ref, 1e-11 * ref);
      EXPECT_LT(rect_robin_eigenvalue(1, 2, alpha, n, m), rect_dirichlet_eigenvalue(1, 2, n, m));
    }
  }
  for (double a : {0.3, 5.0, 1e3}) {
    EXPECT_EQ(rect_robin_eigenvalue(1, 1, a, 1, 2), rect_robin_eigenvalue(1, 1, a, 2, 1));
  }
}

TEST(Separable, RobinSpectrumIncreasesToDirichlet) {
  const auto dir = rect_dirichlet_spectrum(1, 2, 8);
  std::vector<double> prev(8, 0.0);
  for (double a : {1.0, 10.0, 1e2, 1e3, 1e4, 1e5}) {
    const auto rob = rect_robin_spectrum(1, 2, a, 8);
    for (std::size_t i = 0; i < 8; ++i) {
      EXPECT_GT(rob[i].lambda, prev[i]);
      EXPECT_LT(rob[i].lambda, dir[i].lambda);
      prev[i] = rob[i].lambda;
    }
  }
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(prev[i], dir[i].lambda, 1e-3 * dir[i].lambda);
}

TEST(Separable, RobinSplitsThePair) {
  const double a = 1e4;
  EXPECT_LT(rect_robin_eigenvalue(1, 2, a, 2, 2), rect_robin_eigenvalue(1, 2, a, 1, 4));
}

TEST(Separable, BoundaryGramClosedForms) {
  const auto a = dir_mode(1, 2, 1, 4);
  const auto b = dir_mode(1, 2, 2, 2);
  EXPECT_NEAR(rect_boundary_gram(a, a), 12 * pi * pi, 1e-11);
  EXPECT_NEAR(rect_boundary_gram(b, b), 18 * pi * pi, 1e-11);
  EXPECT_NEAR(rect_boundary_gram(a, b), 0.0, 1e-13);
  EXPECT_NEAR(rect_boundary_gram(b, a), 0.0, 1e-13);
}

TEST(Separable, BoundaryGramMatchesQuadrature) {
  // d_nu phi on each side integrated numerically
  boost::math::quadrature::tanh_sinh<double> ts;
  const double l = 1.3;
  const double L = 0.8;
  auto flux_product = [&](int n, int m, int i, int j) {
    const double c = 2.0 / std::sqrt(l * L);
    auto sx = [&](int k, double x) { return std::sin(k * pi * x / l); };
    auto sy = [&](int k, double y) { return std::sin(k * pi * y / L); };
    // x = 0 and x = l sides: |d_x phi| = c (k pi / l) cos(...) at the end times sy
    double total = 0.0;
    const double end_x = (n * i * pi * pi / (l * l)) * c * c * (1.0 + ((n + i) % 2 == 0 ? 1.0 : -1.0));
    total += end_x * ts.integrate([&](double y) { return sy(m, y) * sy(j, y); }, 0.0, L);
    const double end_y = (m * j * pi * pi / (L * L)) * c * c * (1.0 + ((m + j) % 2 == 0 ? 1.0 : -1.0));
    total += end_y * ts.integrate([&](double x) { return sx(n, x) * sx(i, x); }, 0.0, l);
    return total;
  };
  for (int n = 1; n <= 6; ++n) {
    for (int m = 1; m <= 6; ++m) {
      for (int i = 1; i <= 6; ++i) {
        for (int j = 1; j <= 6; ++j) {
          const double got = rect_boundary_gram(dir_mode(l, L, n, m), dir_mode(l, L, i, j));
          EXPECT_NEAR(got, flux_product(n, m, i, j), 1e-9 * (1 + std::abs(got)))
              << n << m << i << j;
          if (n != i && m != j) { EXPECT_EQ(got, 0.0); }
        }
      }
    }
  }
}

TEST(Separable, DegenerateEigenspacesHaveDiagonalGram) {
  const auto s = rect_dirichlet_spectrum(1, 2, 40);
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (std::size_t b = a + 1; b < s.size(); ++b) {
      if (std::abs(s[a].lambda - s[b].lambda) > 1e-9 * s[a].lambda) continue;
      EXPECT_NEAR(rect_boundary_gram(s[a], s[b]), 0.0, 1e-13);
    }
  }
}

TEST(Separable, GramRejectsMismatch) {
  EXPECT_THROW((void)rect_boundary_gram(dir_mode(1, 2, 1, 1), dir_mode(1, 1, 1, 1)), robin::Error);
  auto r = dir_mode(1, 2, 1, 1);
  r.alpha = 3.0;
  EXPECT_THROW((void)rect_boundary_gram(r, r), robin::Error);
}

TEST(Separable, BesselAgainstStd) {
  EXPECT_EQ(bessel_j(0, 0).value, 1.0);
  EXPECT_EQ(bessel_j(0, 0).derivative, 0.0);
  EXPECT_EQ(bessel_j(1, 0).value, 0.0);
  EXPECT_DOUBLE_EQ(bessel_j(1, 0).derivative, 0.5);
  const auto z = bessel_j(0, 2.404825557695773);
  EXPECT_NEAR(z.value, 0.0, 1e-10);
  EXPECT_LT(z.derivative, 0.0);
  for (int k = 0; k <= 20; ++k) {
    for (double x = 0.0; x <= 200.0; x += 0.37) {
      const auto b = bessel_j(k, x);
      const double ref = std::cyl_bessel_j(k, x);
      const double dref = k == 0 ? -std::cyl_bessel_j(1.0, x)
                                 : 0.5 * (std::cyl_bessel_j(k - 1.0, x) - std::cyl_bessel_j(k + 1.0, x));
      ASSERT_NEAR(b.value, ref, 1e-12) << "k=" << k << " x=" << x;
      ASSERT_NEAR(b.derivative, dref, 1e-12) << "k=" << k << " x=" << x;
    }
  }
}

TEST(Separable, BesselFrozenValues) {
  // mpmath, 40 digits
  EXPECT_NEAR(bessel_j(0, 0.5).value, 0.93846980724081290423, 1e-14);
  EXPECT_NEAR(bessel_j(3, 7.25).derivative, -0.18235562743167029926, 1e-13);
  EXPECT_NEAR(bessel_j(10, 12.5).value, 0.27887174659353570044, 1e-13);
  EXPECT_NEAR(bessel_j(20, 199.0).value, -0.01519582204515051307, 1e-13);
  EXPECT_NEAR(bessel_j(7, 150.3).derivative, -0.028555949930016161327, 1e-13);
}

TEST(Separable, BesselRange) {
  EXPECT_THROW((void)bessel_j(21, 1.0), robin::Error);
  EXPECT_THROW((void)bessel_j(-1, 1.0), robin::Error);
  EXPECT_THROW((void)bessel_j(0, 200.5), robin::Error);
  EXPECT_THROW((void)bessel_j(0, -0.1), robin::Error);
}

TEST(Separable, BesselZeros) {
  EXPECT_NEAR(bessel_zero(0, 1), 2.4048255576957727686, 1e-13);
  EXPECT_NEAR(bessel_zero(0, 2), 5.5200781102863106496, 1e-13);
  EXPECT_NEAR(bessel_zero(1, 1), 3.8317059702075123156, 1e-13);
  EXPECT_NEAR(bessel_zero(5, 3), 15.700174079711671038, 1e-12);
  EXPECT_NEAR(bessel_zero(20, 1), 25.41714081407252358, 1e-12);
  EXPECT_NEAR(bessel_zero(20, 5), 41.413065513892636447, 1e-12);
  EXPECT_NEAR(bessel_zero(0, 60), 187.71082696004935978, 1e-11);
  const auto zs = bessel_zeros(3, 10);
  for (std::size_t i = 0; i < zs.size(); ++i) {
    EXPECT_NEAR(std::cyl_bessel_j(3.0, zs[i]), 0.0, 1e-12);
    if (i > 0) { EXPECT_GT(zs[i], zs[i - 1] + 2.5); }
  }
}

TEST(Separable, DiskDirichletGround) {
  const auto s = disk_spectrum(1.0, std::nullopt, 1);
  EXPECT_NEAR(s[0].lambda, 5.7832, 1e-4);
  EXPECT_NEAR(s[0].lambda, 2.4048255576957727686 * 2.4048255576957727686, 1e-12);
  EXPECT_EQ(s[0].k, 0);
  EXPECT_EQ(s[0].multiplicity, 1);
}

TEST(Separable, DiskRobinFrozenValues) {
  EXPECT_NEAR(disk_eigenvalue(1, 10.0, 0, 1), 4.750205414871953248, 1e-12);
  EXPECT_NEAR(disk_eigenvalue(1, 10.0, 1, 1), 12.108724945063487139, 1e-11);
  EXPECT_NEAR(disk_eigenvalue(1, 1000.0, 0, 1), 5.7716311719046050439, 1e-12);
  EXPECT_NEAR(disk_eigenvalue(1, 5.0, 2, 1), 18.855293684228675481, 1e-11);
}

TEST(Separable, DiskRobinSolvesSecular) {
  for (double R : {0.5, 1.0, 2.0}) {
    for (double a : {0.2, 3.0, 80.0}) {
      for (int k = 0; k <= 4; ++k) {
        for (int s = 1; s <= 3; ++s) {
          const double lam = disk_eigenvalue(R, a, k, s);
          const double t = std::sqrt(lam);
          const double j = std::cyl_bessel_j(k, t * R);
          const double dj = k == 0 ? -std::cyl_bessel_j(1.0, t * R)
                                   : 0.5 * (std::cyl_bessel_j(k - 1.0, t * R) - std::cyl_bessel_j(k + 1.0, t * R));
          EXPECT_NEAR(t * dj + a * j, 0.0, 1e-10 * (t + a));
          const double dir = disk_eigenvalue(R, std::nullopt, k, s);
          EXPECT_LT(lam, dir);
          if (s > 1) { EXPECT_GT(lam, disk_eigenvalue(R, std::nullopt, k, s - 1)); }
        }
      }
    }
  }
}

TEST(Separable, DiskRobinIncreasingInAlpha) {
  for (int k = 0; k <= 3; ++k) {
    for (int s = 1; s <= 2; ++s) {
      double prev = 0.0;
      for (double a = 0.1; a < 1e5; a *= 4) {
        const double v = disk_eigenvalue(1.0, a, k, s);
        EXPECT_GT(v, prev);
        EXPECT_LT(v, disk_eigenvalue(1.0, std::nullopt, k, s));
        prev = v;
      }
    }
  }
}

TEST(Separable, DiskSpectrumMultiplicity) {
  for (std::optional<double> a : {std::optional<double>{}, std::optional<double>{0.5}, std::optional<double>{1e3}}) {
    const auto s = disk_spectrum(1.0, a, 12);
    ASSERT_EQ(s.size(), 12u);
    EXPECT_EQ(s[1].k, 1);
    EXPECT_EQ(s[2].k, 1);
    EXPECT_EQ(s[1].lambda, s[2].lambda);
    EXPECT_EQ(s[1].multiplicity, 2);
    for (std::size_t i = 1; i < s.size(); ++i) EXPECT_LE(s[i - 1].lambda, s[i].lambda);
  }
  // brute force over a box of (k, s)
  std::vector<double> all;
  for (int k = 0; k <= 12; ++k) {
    for (int s = 1; s <= 8; ++s) {
      const double v = disk_eigenvalue(1.0, 2.0, k, s);
      all.push_back(v);
      if (k > 0) all.push_back(v);
    }
  }
  std::sort(all.begin(), all.end());
  const auto s = disk_spectrum(1.0, 2.0, 30);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(s[i].lambda, all[i], 1e-12 * all[i]);
}

TEST(Separable, DiskRobinFirstOrderWindow) {
  const double j2 = 2.4048255576957727686 * 2.4048255576957727686;
  const double v = disk_eigenvalue(1.0, 1e3, 0, 1);
  EXPECT_GT(v, j2 - 2 * (2 * j2) / 1e3);
  EXPECT_LT(v, j2);
}

TEST(Separable, DiskFluxNormAgainstOracles) {
  for (double R : {1.0, 0.7, 2.5}) {
    for (int k = 0; k <= 6; ++k) {
      for (int s = 1; s <= 3; ++s) {
        DiskMode mode;
        mode.k = k;
        mode.s = s;
        mode.R = R;
        const double j = std::sqrt(disk_eigenvalue(R, std::nullopt, k, s)) * R;
        mode.lambda = (j / R) * (j / R);
        const double dj = k == 0 ? -std::cyl_bessel_j(1.0, j)
                                 : 0.5 * (std::cyl_bessel_j(k - 1.0, j) - std::cyl_bessel_j(k + 1.0, j));
        // one angular component normalized: R * ((j/R) J_k'(j))^2 / int J_k(jr/R)^2 r dr
        const double ref = R * std::pow(j / R * dj, 2) / oracle::disk_radial_norm2(k, j, R);
        EXPECT_NEAR(disk_boundary_flux_norm(mode), ref, 1e-10 * ref);
        // Rellich: R int (d_nu phi)^2 = 2 lambda
        EXPECT_NEAR(disk_boundary_flux_norm(mode), 2 * mode.lambda / R, 1e-10 * mode.lambda);
      }
    }
  }
}
