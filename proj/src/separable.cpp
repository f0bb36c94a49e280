#include "robin/separable.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "robin/error.hpp"
#include "robin/exact1d.hpp"
#include "robin/roots.hpp"

namespace robin::separable {

namespace {

constexpr double kPi = std::numbers::pi;

void require_sides(double l, double L) {
  if (!(l > 0.0) || !(L > 0.0)) throw Error("rectangle sides must be positive");
}

// Sort ascending; runs of values equal to 1e-12 relative are reordered by
// the integer labels so the output does not depend on rounding.
template <class Mode, class Key>
void sort_with_ties(std::vector<Mode>& modes, Key label) {
  std::sort(modes.begin(), modes.end(), [&](const Mode& a, const Mode& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    return label(a) < label(b);
  });
  std::size_t start = 0;
  while (start < modes.size()) {
    std::size_t end = start + 1;
    while (end < modes.size() &&
           modes[end].lambda - modes[start].lambda <= 1e-12 * std::abs(modes[start].lambda)) {
      ++end;
    }
    std::sort(modes.begin() + static_cast<std::ptrdiff_t>(start), modes.begin() + static_cast<std::ptrdiff_t>(end),
              [&](const Mode& a, const Mode& b) { return label(a) < label(b); });
    start = end;
  }
}

// Enumerates the index box [1, nx] x [1, ny] of a doubly increasing
// eigenvalue family, growing it until the smallest value outside the box
// exceeds the count-th value inside.
std::vector<RectMode> rect_spectrum(double l, double L, int count, std::optional<double> alpha,
                                    const std::function<double(int)>& ex, const std::function<double(int)>& ey) {
  require_sides(l, L);
  if (count < 1) throw Error("count must be >= 1");
  std::vector<double> x_values;
  std::vector<double> y_values;
  auto vx = [&](int n) {
    while (static_cast<int>(x_values.size()) < n) x_values.push_back(ex(static_cast<int>(x_values.size()) + 1));
    return x_values[static_cast<std::size_t>(n) - 1];
  };
  auto vy = [&](int m) {
    while (static_cast<int>(y_values.size()) < m) y_values.push_back(ey(static_cast<int>(y_values.size()) + 1));
    return y_values[static_cast<std::size_t>(m) - 1];
  };
  int nx = 1;
  int ny = 1;
  for (;;) {
    if (nx * ny >= count) {
      std::vector<RectMode> modes;
      modes.reserve(static_cast<std::size_t>(nx * ny));
      for (int n = 1; n <= nx; ++n) {
        for (int m = 1; m <= ny; ++m) modes.push_back({n, m, vx(n) + vy(m), alpha, l, L});
      }
      sort_with_ties(modes, [](const RectMode& r) { return std::pair{r.n, r.m}; });
      const double largest = modes[static_cast<std::size_t>(count) - 1].lambda;
      const double frontier = std::min(vx(nx + 1) + vy(1), vx(1) + vy(ny + 1));
      if (frontier > largest * (1.0 + 1e-12)) {
        modes.resize(static_cast<std::size_t>(count));
        return modes;
      }
    }
    if (vx(nx + 1) + vy(1) <= vx(1) + vy(ny + 1)) {
      ++nx;
    } else {
      ++ny;
    }
  }
}

double sin_overlap(int a, int b, double length) { return a == b ? 0.5 * length : 0.0; }

double disk_secular(double t, double R, double alpha, int k) {
  const auto v = bessel_j(k, t);
  return (t / R) * v.derivative + alpha * v.value;
}

double disk_secular_derivative(double t, double R, double alpha, int k) {
  const auto v = bessel_j(k, t);
  // Bessel equation: J'' = -J'/t - (1 - k^2/t^2) J
  const double second = -v.derivative / t - (1.0 - (k * k) / (t * t)) * v.value;
  return v.derivative / R + (t / R) * second + alpha * v.derivative;
}

double disk_robin_root(double R, double alpha, int k, double lo, double hi) {
  RootOptions opt;
  opt.tol = 1e-15;
  opt.bisection_width = 1e-8;
  return bracketed_root(
      [&](double t) { return std::pair{disk_secular(t, R, alpha, k), disk_secular_derivative(t, R, alpha, k)}; }, lo,
      hi, opt);
}

}  // namespace

double rect_dirichlet_eigenvalue(double l, double L, int n, int m) {
  require_sides(l, L);
  return exact1d::dirichlet_eigenvalue_on(l, n) + exact1d::dirichlet_eigenvalue_on(L, m);
}

double rect_robin_eigenvalue(double l, double L, double alpha, int n, int m) {
  require_sides(l, L);
  return exact1d::robin_eigenvalue_on(l, n, alpha) + exact1d::robin_eigenvalue_on(L, m, alpha);
}

std::vector<RectMode> rect_dirichlet_spectrum(double l, double L, int count) {
  return rect_spectrum(
      l, L, count, std::nullopt, [l](int n) { return exact1d::dirichlet_eigenvalue_on(l, n); },
      [L](int m) { return exact1d::dirichlet_eigenvalue_on(L, m); });
}

std::vector<RectMode> rect_robin_spectrum(double l, double L, double alpha, int count) {
  if (!(alpha > 0.0)) throw Error("alpha must be positive");
  return rect_spectrum(
      l, L, count, alpha, [l, alpha](int n) { return exact1d::robin_eigenvalue_on(l, n, alpha); },
      [L, alpha](int m) { return exact1d::robin_eigenvalue_on(L, m, alpha); });
}

double rect_boundary_gram(const RectMode& a, const RectMode& b) {
  if (a.alpha || b.alpha) throw Error("boundary Gram is defined for Dirichlet modes only");
  if (a.l != b.l || a.L != b.L) throw Error("modes belong to different rectangles");
  const double l = a.l;
  const double L = a.L;
  const double c2 = 4.0 / (l * L);
  // Sides x = 0 and x = l: d_nu phi = -/+ (n pi / l) c sin(m pi y / L) (times (-1)^n at x = l).
  const double parity_x = ((a.n + b.n) % 2 == 0) ? 2.0 : 0.0;
  const double parity_y = ((a.m + b.m) % 2 == 0) ? 2.0 : 0.0;
  const double x_sides = c2 * (a.n * kPi / l) * (b.n * kPi / l) * parity_x * sin_overlap(a.m, b.m, L);
  const double y_sides = c2 * (a.m * kPi / L) * (b.m * kPi / L) * parity_y * sin_overlap(a.n, b.n, l);
  return x_sides + y_sides;
}

double disk_eigenvalue(double R, std::optional<double> alpha, int k, int s) {
  if (!(R > 0.0)) throw Error("disk radius must be positive");
  if (k < 0 || s < 1) throw Error("disk mode indices must satisfy k >= 0, s >= 1");
  const auto zeros = bessel_zeros(k, s);
  const double upper = zeros.back();
  if (!alpha) return (upper / R) * (upper / R);
  if (!(*alpha > 0.0)) throw Error("alpha must be positive");
  // Robin root lies between the Neumann zero j'_{k,s} > j_{k,s-1} and j_{k,s};
  // for s = 1 and k >= 1, j'_{k,1} > k.
  double lower = 0.0;
  if (s > 1) {
    lower = zeros[static_cast<std::size_t>(s) - 2];
  } else if (k >= 1) {
    lower = 0.5 * k;
  }
  const double t = disk_robin_root(R, *alpha, k, lower, upper);
  return (t / R) * (t / R);
}

std::vector<DiskMode> disk_spectrum(double R, std::optional<double> alpha, int count) {
  if (!(R > 0.0)) throw Error("disk radius must be positive");
  if (count < 1) throw Error("count must be >= 1");
  if (alpha && !(*alpha > 0.0)) throw Error("alpha must be positive");
  // value(k, s), memoized per order.
  std::vector<std::vector<double>> dirichlet_zeros;
  std::vector<std::vector<double>> cache;
  auto value = [&](int k, int s) {
    if (k > kMaxBesselOrder) throw Error("disk spectrum needs Bessel order above " + std::to_string(kMaxBesselOrder));
    while (static_cast<int>(cache.size()) <= k) {
      cache.emplace_back();
      dirichlet_zeros.emplace_back();
    }
    auto& row = cache[static_cast<std::size_t>(k)];
    auto& zrow = dirichlet_zeros[static_cast<std::size_t>(k)];
    if (static_cast<int>(zrow.size()) < s) zrow = bessel_zeros(k, std::max(s, 2 * static_cast<int>(zrow.size())));
    while (static_cast<int>(row.size()) < s) {
      const int si = static_cast<int>(row.size()) + 1;
      const double upper = zrow[static_cast<std::size_t>(si) - 1];
      if (!alpha) {
        row.push_back((upper / R) * (upper / R));
        continue;
      }
      double lower = si > 1 ? zrow[static_cast<std::size_t>(si) - 2] : (k >= 1 ? 0.5 * k : 0.0);
      const double t = disk_robin_root(R, *alpha, k, lower, upper);
      row.push_back((t / R) * (t / R));
    }
    return row[static_cast<std::size_t>(s) - 1];
  };
  auto multiplicity = [](int k) { return k == 0 ? 1 : 2; };

  int kmax = 0;
  int smax = 1;
  for (;;) {
    int available = 0;
    for (int k = 0; k <= kmax; ++k) available += multiplicity(k) * smax;
    if (available >= count) {
      std::vector<DiskMode> modes;
      for (int k = 0; k <= kmax; ++k) {
        for (int s = 1; s <= smax; ++s) {
          for (int copy = 0; copy < multiplicity(k); ++copy) modes.push_back({k, s, value(k, s), alpha, R, multiplicity(k)});
        }
      }
      std::stable_sort(modes.begin(), modes.end(), [](const DiskMode& a, const DiskMode& b) {
        if (a.lambda != b.lambda) return a.lambda < b.lambda;
        return std::pair{a.k, a.s} < std::pair{b.k, b.s};
      });
      const double largest = modes[static_cast<std::size_t>(count) - 1].lambda;
      const double frontier = std::min(kmax < kMaxBesselOrder ? value(kmax + 1, 1) : INFINITY, value(0, smax + 1));
      if (frontier > largest) {
        modes.resize(static_cast<std::size_t>(count));
        return modes;
      }
      if (kmax == kMaxBesselOrder && value(0, smax + 1) <= largest) {
        ++smax;
        continue;
      }
    }
    if (kmax < kMaxBesselOrder && value(kmax + 1, 1) <= value(0, smax + 1)) {
      ++kmax;
    } else {
      ++smax;
    }
  }
}

double disk_boundary_flux_norm(const DiskMode& mode) {
  if (mode.alpha) throw Error("boundary flux norm is defined for Dirichlet modes only");
  const double R = mode.R;
  const double j = std::sqrt(mode.lambda) * R;
  const int k = mode.k;
  // The angular factor cancels between numerator and normalization.
  const int panels = 1 + static_cast<int>(j / 2.0);
  double norm = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = R * p / panels;
    const double b = R * (p + 1) / panels;
    norm += boost::math::quadrature::gauss<double, 30>::integrate(
        [&](double r) {
          const double v = bessel_j(k, j * r / R).value;
          return v * v * r;
        },
        a, b);
  }
  const double slope = (j / R) * bessel_j(k, j).derivative;
  return R * slope * slope / norm;
}

}  // namespace robin::separable
