#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"

namespace panelfx {

namespace detail {

constexpr int kGammaMaxIter = 10000;
constexpr double kGammaEps = 1e-15;

// Regularized lower incomplete gamma P(a, x) by series expansion. Valid for
// x < a + 1 where the series converges quickly.
inline double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double term = sum;
  for (int i = 0; i < kGammaMaxIter; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kGammaEps)
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  raise(errc::invalid_df, "incomplete gamma series failed to converge");
}

// Regularized upper incomplete gamma Q(a, x) by Lentz continued fraction.
// Valid for x >= a + 1.
inline double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kGammaMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kGammaEps)
      return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  raise(errc::invalid_df, "incomplete gamma continued fraction failed to converge");
}

inline double gamma_q(double a, double x) {
  if (x <= 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

// Incomplete beta continued fraction (Lentz).
inline double beta_cf(double a, double b, double x) {
  const double tiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kGammaMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kGammaEps) return h;
  }
  raise(errc::invalid_df, "incomplete beta continued fraction failed to converge");
}

// Regularized incomplete beta I_x(a, b).
inline double beta_i(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  // Use the continued fraction on whichever side converges fast.
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

}  // namespace detail

// Upper tail of the chi-square distribution with df degrees of freedom.
inline double chi_square_sf(double x, std::size_t df) {
  if (df < 1) raise(errc::invalid_df, "chi-square needs df >= 1");
  if (!(x > 0.0)) return 1.0;
  if (std::isinf(x)) return 0.0;
  return detail::gamma_q(0.5 * static_cast<double>(df), 0.5 * x);
}

// Upper tail of Student's t with df degrees of freedom. Exact 0.5 at x = 0;
// negative arguments use the symmetry sf(-x) = 1 - sf(x).
inline double student_t_sf(double x, std::size_t df) {
  if (df < 1) raise(errc::invalid_df, "Student t needs df >= 1");
  if (x == 0.0) return 0.5;
  if (x < 0.0) return 1.0 - student_t_sf(-x, df);
  if (std::isinf(x)) return 0.0;
  const double v = static_cast<double>(df);
  return 0.5 * detail::beta_i(0.5 * v, 0.5, v / (v + x * x));
}

// Two-sided critical value: the c with P(|T| > c) = 1 - level. Solved by
// bisection on the monotone tail function; the bracket is doubled until it
// contains the root.
inline double t_critical(double level, std::size_t df) {
  if (df < 1) raise(errc::invalid_df, "Student t needs df >= 1");
  if (!(level > 0.0 && level < 1.0))
    raise(errc::invalid_level, "confidence level must lie in (0, 1)");
  const double target = 0.5 * (1.0 - level);
  double lo = 0.0;
  double hi = 1.0;
  while (student_t_sf(hi, df) > target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) break;
  }
  while (hi - lo > 1e-12 * std::max(1.0, lo)) {
    const double mid = 0.5 * (lo + hi);
    if (student_t_sf(mid, df) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

struct RegressionFit {
  std::vector<double> coefficients;
  std::vector<double> standard_errors;
  std::vector<double> t_stats;
  std::vector<double> p_values;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  std::vector<double> residuals;
  std::size_t n_obs = 0;
  std::size_t dof = 0;
  double sigma2 = 0.0;
  double r_squared = 0.0;
  double adj_r_squared = 0.0;
};

namespace detail {

// Dense column-major matrix, sized for small regression problems.
struct Matrix {
  std::size_t nr = 0, nc = 0;
  std::vector<double> a;

  Matrix(std::size_t r, std::size_t c) : nr(r), nc(c), a(r * c, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return a[j * nr + i]; }
  double operator()(std::size_t i, std::size_t j) const { return a[j * nr + i]; }
};

inline double column_norm_from(const Matrix& m, std::size_t col, std::size_t first_row) {
  double s = 0.0;
  for (std::size_t i = first_row; i < m.nr; ++i) s += m(i, col) * m(i, col);
  return std::sqrt(s);
}

// Householder QR with column pivoting, applied in place to X and y. Fills
// perm with the original index of each pivoted column. Throws RankDeficient
// when the largest remaining column norm falls at or below
// n * epsilon * (largest initial column norm).
inline void qr_decompose(Matrix& x, std::vector<double>& y, std::vector<std::size_t>& perm) {
  const std::size_t n = x.nr;
  const std::size_t k = x.nc;
  perm.resize(k);
  for (std::size_t j = 0; j < k; ++j) perm[j] = j;

  double max_norm = 0.0;
  for (std::size_t j = 0; j < k; ++j) max_norm = std::max(max_norm, column_norm_from(x, j, 0));
  const double tol =
      static_cast<double>(n) * std::numeric_limits<double>::epsilon() * max_norm;

  std::vector<double> v(n);
  for (std::size_t step = 0; step < k; ++step) {
    std::size_t pivot = step;
    double best = column_norm_from(x, step, step);
    for (std::size_t j = step + 1; j < k; ++j) {
      const double norm = column_norm_from(x, j, step);
      if (norm > best) {
        best = norm;
        pivot = j;
      }
    }
    if (best <= tol)
      raise(errc::rank_deficient, "design matrix column " + std::to_string(perm[pivot]) +
                                      " is linearly dependent");
    if (pivot != step) {
      for (std::size_t i = 0; i < n; ++i) std::swap(x(i, step), x(i, pivot));
      std::swap(perm[step], perm[pivot]);
    }

    const double alpha = x(step, step) >= 0.0 ? -best : best;
    double vnorm2 = 0.0;
    for (std::size_t i = step; i < n; ++i) {
      v[i] = x(i, step);
      if (i == step) v[i] -= alpha;
      vnorm2 += v[i] * v[i];
    }
    x(step, step) = alpha;
    for (std::size_t i = step + 1; i < n; ++i) x(i, step) = 0.0;
    if (vnorm2 == 0.0) continue;

    for (std::size_t j = step + 1; j < k; ++j) {
      double dot = 0.0;
      for (std::size_t i = step; i < n; ++i) dot += v[i] * x(i, j);
      const double scale = 2.0 * dot / vnorm2;
      for (std::size_t i = step; i < n; ++i) x(i, j) -= scale * v[i];
    }
    double doty = 0.0;
    for (std::size_t i = step; i < n; ++i) doty += v[i] * y[i];
    const double scale_y = 2.0 * doty / vnorm2;
    for (std::size_t i = step; i < n; ++i) y[i] -= scale_y * v[i];
  }
}

}  // namespace detail

// Least squares of y on the given design columns via Householder QR with
// column pivoting. When with_intercept is set, a column of ones is prepended
// and coefficient 0 is the intercept. p-values, confidence bounds (95%), and
// R-squared come from the classical homoskedastic formulas.
inline RegressionFit ols(const std::vector<std::vector<double>>& columns,
                         const std::vector<double>& y, bool with_intercept) {
  const std::size_t n = y.size();
  const std::size_t k = columns.size() + (with_intercept ? 1 : 0);
  if (k == 0) raise(errc::too_few_observations, "no design columns");
  for (const auto& col : columns)
    if (col.size() != n)
      raise(errc::too_few_observations, "design column length does not match response");
  if (n <= k)
    raise(errc::too_few_observations, "need more observations (" + std::to_string(n) +
                                          ") than coefficients (" + std::to_string(k) + ")");

  detail::Matrix x(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = 0;
    if (with_intercept) x(i, j++) = 1.0;
    for (const auto& col : columns) x(i, j++) = col[i];
  }
  const detail::Matrix x_orig = x;

  std::vector<double> qty = y;
  std::vector<std::size_t> perm;
  detail::qr_decompose(x, qty, perm);

  // Back substitution on R b = Q'y, then undo the column permutation.
  std::vector<double> b_perm(k);
  for (std::size_t step = k; step-- > 0;) {
    double s = qty[step];
    for (std::size_t j = step + 1; j < k; ++j) s -= x(step, j) * b_perm[j];
    b_perm[step] = s / x(step, step);
  }
  std::vector<double> beta(k);
  for (std::size_t j = 0; j < k; ++j) beta[perm[j]] = b_perm[j];

  RegressionFit fit;
  fit.coefficients = beta;
  fit.n_obs = n;
  fit.dof = n - k;
  fit.residuals.resize(n);
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double pred = 0.0;
    for (std::size_t j = 0; j < k; ++j) pred += x_orig(i, j) * beta[j];
    fit.residuals[i] = y[i] - pred;
    rss += fit.residuals[i] * fit.residuals[i];
  }
  fit.sigma2 = rss / static_cast<double>(fit.dof);

  // Inverse of R, row by row from the bottom; the squared row norms give the
  // diagonal of (X'X)^-1 up to the permutation.
  detail::Matrix rinv(k, k);
  for (std::size_t j = k; j-- > 0;) {
    rinv(j, j) = 1.0 / x(j, j);
    for (std::size_t i = j; i-- > 0;) {
      double s = 0.0;
      for (std::size_t m = i + 1; m <= j; ++m) s += x(i, m) * rinv(m, j);
      rinv(i, j) = -s / x(i, i);
    }
  }

  fit.standard_errors.resize(k);
  fit.t_stats.resize(k);
  fit.p_values.resize(k);
  fit.ci_low.resize(k);
  fit.ci_high.resize(k);
  const double tcrit = t_critical(0.95, fit.dof);
  for (std::size_t j = 0; j < k; ++j) {
    std::size_t pos = 0;
    while (perm[pos] != j) ++pos;
    double row_norm2 = 0.0;
    for (std::size_t m = pos; m < k; ++m) row_norm2 += rinv(pos, m) * rinv(pos, m);
    const double se = std::sqrt(fit.sigma2 * row_norm2);
    fit.standard_errors[j] = se;
    if (se > 0.0)
      fit.t_stats[j] = beta[j] / se;
    else
      fit.t_stats[j] = beta[j] == 0.0 ? 0.0
                                      : std::copysign(std::numeric_limits<double>::infinity(),
                                                      beta[j]);
    fit.p_values[j] = 2.0 * student_t_sf(std::fabs(fit.t_stats[j]), fit.dof);
    fit.ci_low[j] = beta[j] - tcrit * se;
    fit.ci_high[j] = beta[j] + tcrit * se;
  }

  double tss = 0.0;
  if (with_intercept) {
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    for (double v : y) tss += (v - mean) * (v - mean);
  } else {
    for (double v : y) tss += v * v;
  }
  fit.r_squared = tss > 0.0 ? 1.0 - rss / tss : (rss == 0.0 ? 1.0 : 0.0);
  fit.adj_r_squared = 1.0 - (1.0 - fit.r_squared) * static_cast<double>(n - 1) /
                                static_cast<double>(fit.dof);
  return fit;
}

}  // namespace panelfx
