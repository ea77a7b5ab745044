#include "rsa/analytic.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rsa::analytic {
namespace {

constexpr int kMaxTableFactorial = 170;

const std::array<double, kMaxTableFactorial + 1>& factorial_table() {
  static const auto table = [] {
    std::array<double, kMaxTableFactorial + 1> f{};
    f[0] = 1.0;
    for (int i = 1; i <= kMaxTableFactorial; ++i) f[i] = f[i - 1] * i;
    return f;
  }();
  return table;
}

void check_nonnegative(int v, const char* name) {
  if (v < 0) throw std::domain_error(std::string(name) + " must be nonnegative");
}

void check_even_s(int s) {
  if (s < 2 || s % 2 != 0)
    throw std::domain_error("s must be an even integer >= 2, got " + std::to_string(s));
}

// sum_{i=lo}^{hi} x^{2i+offset} / (2i+offset)!; empty when hi < lo.
double odd_even_sum(double x, int lo, int hi, int offset) {
  double acc = 0.0;
  for (int i = lo; i <= hi; ++i) acc += power_over_factorial(x, 2 * i + offset);
  return acc;
}

// sum_{i=lo}^{hi} (-2t)^i / i!
double neg_exp_partial(double t, int lo, int hi) {
  double acc = 0.0;
  for (int i = lo; i <= hi; ++i) acc += power_over_factorial(-2.0 * t, i);
  return acc;
}

}  // namespace

void check_time(double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::domain_error("time must lie in [0, 1], got " + std::to_string(t));
}

double power_over_factorial(double x, int n) {
  check_nonnegative(n, "n");
  if (n == 0) return 1.0;
  if (x == 0.0) return 0.0;
  if (n <= kMaxTableFactorial) return std::pow(x, n) / factorial_table()[n];
  const double magnitude = std::exp(n * std::log(std::fabs(x)) - std::lgamma(n + 1.0));
  return (x < 0.0 && n % 2 == 1) ? -magnitude : magnitude;
}

double density_exact(double t) {
  check_time(t);
  return -0.5 * std::expm1(-2.0 * t);
}

SeriesValue correlation_exact(int s, double t, double tol) {
  check_nonnegative(s, "s");
  check_time(t);
  if (!(tol > 0.0)) throw std::domain_error("tol must be positive");

  SeriesValue out;
  if (t == 0.0) return out;

  const double prefactor = -0.5 * std::exp(-2.0 * t);
  const double x = -2.0 * t;
  const double x2 = x * x;
  for (int n = 0;; ++n) {
    const int power = 2 * n + s + 1;
    const double term = prefactor * power_over_factorial(x, power);
    // Ratio of |term_{n+1}| to |term_n|; decreasing in n.
    const double ratio = x2 / ((power + 1.0) * (power + 2.0));
    const double remainder = std::fabs(term) / (1.0 - ratio);
    if (remainder <= tol) {
      out.truncation_bound = remainder;
      break;
    }
    out.value += term;
    ++out.terms_used;
  }
  return out;
}

double gamma_even_exact(int s, double t) {
  check_even_s(s);
  check_time(t);
  return -0.5 * std::exp(-2.0 * t) * neg_exp_partial(t, 1, s);
}

double h_pair_prob(int m, int n, double t) {
  check_nonnegative(m, "m");
  check_nonnegative(n, "n");
  check_time(t);
  if (t == 0.0) return 0.0;
  const int total = m + n + 1;
  if (m <= kMaxTableFactorial && n <= kMaxTableFactorial && total <= kMaxTableFactorial) {
    const auto& f = factorial_table();
    return std::pow(t, total) / (f[m] * f[n] * total);
  }
  return std::exp(total * std::log(t) - std::lgamma(m + 1.0) - std::lgamma(n + 1.0) -
                  std::log(static_cast<double>(total)));
}

double g_event_prob(int j, int k, double t) {
  check_nonnegative(j, "j");
  check_nonnegative(k, "k");
  const double a = h_pair_prob(2 * j, 2 * k, t);
  const double b = h_pair_prob(2 * j, 2 * k + 1, t);
  const double c = h_pair_prob(2 * j + 1, 2 * k, t);
  const double d = h_pair_prob(2 * j + 1, 2 * k + 1, t);
  return a - b - c + d;
}

double i_k(int k, double t) {
  check_nonnegative(k, "k");
  check_time(t);
  return power_over_factorial(t, 2 * k + 1) * std::exp(-t);
}

double b_run_prob(int k, double t) {
  check_nonnegative(k, "k");
  check_time(t);
  return power_over_factorial(t, 2 * k + 2) - power_over_factorial(t, 2 * k + 3);
}

double gamma_component(int i, int s, double t, Gamma4Limit limit) {
  if (i < 1 || i > 4)
    throw std::domain_error("gamma component index must be 1..4, got " + std::to_string(i));
  check_even_s(s);
  check_time(t);

  const double e = std::exp(-t);
  const double one_minus_t = 1.0 - t;
  const double b_sum = std::expm1(-t) + t;  // e^{-t} - 1 + t, sum of P(B_k)
  const double odd_to_s = odd_even_sum(t, 0, (s - 2) / 2, 1);
  const double alt_3_to_s = 0.5 * neg_exp_partial(t, 3, s);

  switch (i) {
    case 1:
      return one_minus_t * one_minus_t * e * odd_to_s;
    case 2:
      return -b_sum * e * (alt_3_to_s + one_minus_t * odd_even_sum(t, 0, (s - 4) / 2, 3));
    case 3:
      return one_minus_t * b_sum * e * odd_to_s;
    default: {
      // s - 4 may be negative; the sum is then empty, not truncated toward zero.
      const int hi = limit == Gamma4Limit::printed ? (s - 2) / 4
                                                   : (s >= 4 ? (s - 4) / 2 : -1);
      return -one_minus_t * e * (alt_3_to_s + one_minus_t * odd_even_sum(t, 0, hi, 3));
    }
  }
}

S1S2 s1_s2_identity(int r, double t) {
  if (r < 2) throw std::domain_error("r must be >= 2");
  check_time(t);

  S1S2 out;
  double s1 = 0.0;
  double s2 = 0.0;
  for (int k = 0; k <= r - 2; ++k) {
    for (int l = 0; l <= r - k - 2; ++l) {
      const double inv_l = power_over_factorial(1.0, 2 * l + 1);
      s1 += std::pow(t, 2 * l + 2 * k + 3) * inv_l * power_over_factorial(1.0, 2 * k + 2);
      s2 += std::pow(t, 2 * l + 2 * k + 4) * inv_l * power_over_factorial(1.0, 2 * k + 3);
    }
  }
  out.direct = s1 - s2;
  out.simplified = -0.5 * neg_exp_partial(t, 3, 2 * r) - (1.0 - t) * odd_even_sum(t, 0, r - 2, 3);
  return out;
}

double tail_sum(int r, double t) {
  check_nonnegative(r, "r");
  check_time(t);
  const double e2 = std::exp(-2.0 * t);
  return -0.5 * e2 * (e2 - neg_exp_partial(t, 0, r));
}

double telescope_partial(int s, double t, int n_terms) {
  check_nonnegative(s, "s");
  if (n_terms < 1) throw std::domain_error("N must be >= 1");
  double acc = 0.0;
  for (int n = 0; n <= n_terms; ++n) acc += tail_sum(s + 2 * n, t) - tail_sum(s + 2 * n + 1, t);
  return acc;
}

}  // namespace rsa::analytic
