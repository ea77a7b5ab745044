#pragma once

// Closed forms and series for 1-D random sequential adsorption with
// nearest-neighbor exclusion and uniform [0,1] attempt times.

namespace rsa::analytic {

/// A finite partial sum of a series together with a bound on what was cut off.
/// The exact value lies in [value - truncation_bound, value + truncation_bound].
struct SeriesValue {
  double value = 0.0;
  double truncation_bound = 0.0;
  int terms_used = 0;
};

/// Which upper limit to use for the second finite sum of gamma_{s,4}.
///
/// `printed` sums i = 0 .. floor((s-2)/4); `corrected` sums i = 0 .. (s-4)/2,
/// matching the analogous sum in gamma_{s,2}. Only `corrected` makes the four
/// components add up to gamma_s for every even s (s = 2 and s = 8 are the first
/// counterexamples for `printed`).
enum class Gamma4Limit { printed, corrected };

// Throws std::domain_error unless 0 <= t <= 1.
void check_time(double t);

/// x^n / n!, switching to log space past n = 170.
double power_over_factorial(double x, int n);

/// Occupied-site density at time t: (1 - e^{-2t}) / 2.
double density_exact(double t);

/// Pair correlation C_s(t) = -1/2 e^{-2t} sum_{n>=0} (-2t)^{2n+s+1} / (2n+s+1)!.
///
/// All terms share one sign and their magnitudes shrink geometrically, so the
/// remainder after n terms is at most a_n / (1 - q_n) with q_n the ratio of
/// consecutive magnitudes at n. Summation stops once that bound is <= tol.
SeriesValue correlation_exact(int s, double t, double tol = 1e-13);

/// P(omega_{-1} = omega_0 = 0, omega_s = 1) for even s >= 2.
double gamma_even_exact(int s, double t);

/// P(H_{-m}, H_n) = t^{m+n+1} / (m! n! (m+n+1)).
double h_pair_prob(int m, int n, double t);

/// P_jk(t): probability of the favorable event with a left descent of exactly
/// 2j and a right descent of exactly 2k from an occupied origin.
double g_event_prob(int j, int k, double t);

/// I_k(t) = sum_j P_jk(t) = t^{2k+1} / (2k+1)! e^{-t}.
double i_k(int k, double t);

/// P(t > t_0 > t_1 > ... > t_{2k+1}, t_{2k+2} > t_{2k+1}).
double b_run_prob(int k, double t);

/// gamma_{s,i}(t) for i in 1..4: gamma_s restricted to the i-th cell of the
/// partition by whether t_{-1}, t_0 fall above or below t.
double gamma_component(int i, int s, double t,
                       Gamma4Limit limit = Gamma4Limit::corrected);

struct S1S2 {
  double direct = 0.0;
  double simplified = 0.0;
};

/// S_1(t) - S_2(t) for s = 2r, once by the raw double sums and once by the
/// single-sum simplification.
S1S2 s1_s2_identity(int r, double t);

/// C_{r+1}(t) + C_r(t) in closed form:
/// -1/2 e^{-2t} (e^{-2t} - sum_{i=0}^{r} (-2t)^i / i!).
double tail_sum(int r, double t);

/// sum_{n=0}^{N} [tail_sum(s+2n) - tail_sum(s+2n+1)] = C_s - C_{s+2N+2}.
double telescope_partial(int s, double t, int n_terms);

}  // namespace rsa::analytic
