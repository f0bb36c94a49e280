#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "robin/error.hpp"
#include "robin/roots.hpp"
#include "robin/separable.hpp"

namespace robin::separable {

namespace {

constexpr double kSeriesLimit = 12.0;

double series(int k, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int i = 1; i <= k; ++i) term *= half / i;
  double sum = term;
  const double q = half * half;
  for (int m = 1; m < 200; ++m) {
    term *= -q / (static_cast<double>(m) * static_cast<double>(m + k));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum) && m > half) break;
  }
  return sum;
}

// Miller backward recurrence normalized with J_0 + 2 sum_{m>=1} J_{2m} = 1.
// Fills out[0..kmax].
void miller(int kmax, double x, std::vector<double>& out) {
  const double start = x + 20.0 + 12.0 * std::cbrt(x) + kmax;
  int n = 2 * static_cast<int>(std::ceil(0.5 * start));
  out.assign(static_cast<std::size_t>(kmax) + 1, 0.0);
  double next = 0.0;  // J_{m+1}
  double cur = 1e-30; // J_m
  double norm = 0.0;
  for (int m = n; m >= 1; --m) {
    if (m <= kmax) out[static_cast<std::size_t>(m)] = cur;
    if (m % 2 == 0) norm += 2.0 * cur;
    const double prev = (2.0 * m / x) * cur - next;  // J_{m-1}
    next = cur;
    cur = prev;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
      for (auto& v : out) v *= 1e-250;
    }
  }
  out[0] = cur;
  norm += cur;
  for (auto& v : out) v /= norm;
}

void check_range(int k, double x) {
  if (k < 0 || k > kMaxBesselOrder) {
    throw Error("Bessel order " + std::to_string(k) + " outside [0, " + std::to_string(kMaxBesselOrder) + "]");
  }
  if (!(x >= 0.0) || x > kMaxBesselArgument) {
    throw Error("Bessel argument " + std::to_string(x) + " outside [0, 200]");
  }
}

// Zeros j_{k,s} for s = 1..count. Order 0 is bracketed in ((s - 1/2) pi, s pi);
// order k >= 1 by interlacing j_{k-1,s} < j_{k,s} < j_{k-1,s+1}.
std::vector<double> zeros_table(int k, int count) {
  std::vector<double> row;
  const int width = count + k;
  row.reserve(static_cast<std::size_t>(width));
  auto solve = [](int order, int s, double lo, double hi) {
    // McMahon: beta - (mu - 1) / (8 beta) - 4 (mu - 1)(7 mu - 31) / (3 (8 beta)^3)
    const double mu = 4.0 * order * order;
    const double beta = (s + 0.5 * order - 0.25) * std::numbers::pi;
    const double b8 = 8.0 * beta;
    double guess = beta - (mu - 1.0) / b8 - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8 * b8 * b8);
    if (!(guess > lo && guess < hi)) guess = 0.5 * (lo + hi);
    RootOptions opt;
    opt.tol = 1e-15;
    opt.initial_guess = guess;
    return bracketed_root(
        [order](double x) {
          const auto v = bessel_j(order, x);
          return std::pair{v.value, v.derivative};
        },
        lo, hi, opt);
  };
  for (int s = 1; s <= width; ++s) {
    row.push_back(solve(0, s, (s - 0.5) * std::numbers::pi, s * std::numbers::pi));
  }
  for (int order = 1; order <= k; ++order) {
    std::vector<double> next;
    next.reserve(row.size() - 1);
    for (std::size_t s = 0; s + 1 < row.size(); ++s) {
      next.push_back(solve(order, static_cast<int>(s) + 1, row[s], row[s + 1]));
    }
    row = std::move(next);
  }
  row.resize(static_cast<std::size_t>(count));
  return row;
}

}  // namespace

BesselValue bessel_j(int k, double x) {
  check_range(k, x);
  std::vector<double> scratch;
  if (x == 0.0) {
    return {k == 0 ? 1.0 : 0.0, k == 1 ? 0.5 : 0.0};
  }
  if (x > kSeriesLimit) {
    miller(k + 1, x, scratch);
    const double jk = scratch[static_cast<std::size_t>(k)];
    const double dj = k == 0 ? -scratch[1] : 0.5 * (scratch[static_cast<std::size_t>(k) - 1] - scratch[static_cast<std::size_t>(k) + 1]);
    return {jk, dj};
  }
  const double jk = series(k, x);
  const double dj = k == 0 ? -series(1, x) : 0.5 * (series(k - 1, x) - series(k + 1, x));
  return {jk, dj};
}

double bessel_zero(int k, int s) {
  if (k < 0 || k > kMaxBesselOrder) throw Error("Bessel order out of range");
  if (s < 1) throw Error("zero index must be >= 1");
  return zeros_table(k, s).back();
}

std::vector<double> bessel_zeros(int k, int count) {
  if (k < 0 || k > kMaxBesselOrder) throw Error("Bessel order out of range");
  if (count < 1) return {};
  return zeros_table(k, count);
}

}  // namespace robin::separable
