#pragma once

// Test-only oracles. These deliberately re-derive expected values through
// routes independent of the library implementation they check.

#include <cmath>
#include <functional>
#include <vector>

#include "ostra/market.hpp"

namespace oracle {

// Hand recursion fixtures, worked from the backward system by hand.
// B=2, S=1, all rates 1, r=1:
//   V(2,1) = 0 (boundary)
//   V(1,1): outflow = 1*1*1 + 0 + 0 + 1*1*1 = 2, numerator = 1  -> 1/3
//   V(0,1) = 2*(1/3 + 1)/(1 + 2)                                -> 8/9
// B=2, S=2, all rates 1, r=1:
//   V(1,2): outflow = 1 + 0 + 0 + 2 = 3, numerator = 1          -> 1/4
//   V(1,1): outflow = 1 + 0 + 1 + 1 = 3, numerator = 1/4 + 1    -> 5/16
//   V(0,1) = 2*(5/16 + 1)/3                                     -> 7/8
inline constexpr double kV11_B2S1 = 1.0 / 3.0;      // 0.333333333333333...
inline constexpr double kV01_B2S1 = 8.0 / 9.0;      // 0.888888888888888...
inline constexpr double kV12_B2S2 = 1.0 / 4.0;      // 0.25
inline constexpr double kV11_B2S2 = 5.0 / 16.0;     // 0.3125
inline constexpr double kV01_B2S2 = 7.0 / 8.0;      // 0.875

// Benchmark fixtures for cost q^2/2, lambda_bs = 1, r = 1.
inline constexpr double kQBilateralSim = 0.5;       // inverse of (1/2)^2
inline constexpr double kPBilateralSim = 0.25;      // 0.5 * 1/(1+1)
inline constexpr double kQBilateralOneSided = 1.0;  // inverse of 1/2
inline constexpr double kTargetBF_B2S1 = 5.0 / 9.0;
inline constexpr double kQStarBF_B2S1 = 10.0 / 9.0;  // 1.111111111111111...
inline constexpr double kTargetBF_B2S2 = 9.0 / 16.0;
inline constexpr double kQStarBF_B2S2 = 9.0 / 8.0;   // 1.125

inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double fa, double fm, double fb, double whole,
                               double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

// The value system solved with each entry's integral evaluated by quadrature
// instead of the closed-form division: an independent route to V(k_b, k_s).
// Index [k_b][k_s].
inline std::vector<std::vector<double>> value_table_by_quadrature(
    const ostra::MarketParams& p) {
  const int B = p.buyer_count;
  const int S = p.seller_count;
  std::vector<std::vector<double>> v(B + 1, std::vector<double>(S + 2, 0.0));
  for (int k_b = B - 1; k_b >= 0; --k_b) {
    for (int k_s = S; k_s >= 1; --k_s) {
      const double bb = p.lambda_bb * k_b * (B - k_b);
      const double ss = p.lambda_ss * (k_s - 1) * (S - k_s);
      const double bs_s = p.lambda_bs * k_b * (S - k_s);
      const double bs_b = p.lambda_bs * k_s * (B - k_b);
      const double outflow = bb + ss + bs_s + bs_b;
      const double numerator = bb * v[k_b + 1][k_s] + ss * v[k_b][k_s + 1] +
                               bs_s * v[k_b][k_s + 1] + bs_b * v[k_b + 1][k_s] +
                               p.lambda_bs * (B - k_b);
      const double decay = p.discount_rate + outflow;
      const double cutoff = 60.0 / decay;  // truncated tail < e^-60
      v[k_b][k_s] = integrate(
          [numerator, decay](double t) { return std::exp(-decay * t) * numerator; },
          0.0, cutoff);
    }
  }
  return v;
}

}  // namespace oracle
