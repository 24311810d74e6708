#include "tcstop/closed_forms.hpp"

namespace tcstop::closed_form {

std::array<double, 4> cycle_0_1_3_6_10(double a, double b) {
  const double t = (1 - a) * (1 - b);
  const double c = (a + 6 * b - a * b) / (1 - t);
  const double d = (a + 6 * b - 6 * a * b) / (1 - t);
  const double q1 = 1 - 0.04 * t, q2 = 1 - 0.04 * t * t;
  const double e1 = c + (4.8 - 0.96 * c - 0.64 * b) / q1;
  const double s1 = c * c + (-1.92 * c * c + 9.6 * c - 1.28 * c * b) / q1 +
                    (0.96 * c * c - 9.6 * c + 39.6 - 12.8 * b + 1.28 * b * c + 2.56 * b * b) / q2;
  const double e6 = d + (8.64 - 0.96 * d - 0.48 * a) / q1;
  const double s6 = d * d + (-1.92 * d * d + 17.28 * d - 0.96 * a * d) / q1 +
                    (0.96 * d * d - 17.28 * d + 84.72 + 3.6 * a * a + 0.96 * a * d - 8.16 * a) / q2;
  return {e1, s1, e6, s6};
}

std::array<double, 4> cycle_0_1_2_7_9(double a, double b) {
  const double t = (1 - a) * (1 - b);
  const double c = (a + 7 * b - a * b) / (1 - t);
  const double d = (a + 7 * b - 7 * a * b) / (1 - t);
  const double q1 = 1 - 0.04 * t, q2 = 1 - 0.04 * t * t;
  const double e1 = c + 0.2 * (20.2 - 4.8 * c - 1.6 * b) / q1;
  const double s1 =
      c * c + 0.4 * (-4.8 * c * c + 20.2 * c - 1.6 * c * b) / q1 +
      0.2 * (c * c + 2 * (2 - c) * (2 - c) + (9 - c) * (9 - c) + 0.8 * (9 - 2 * b - c) * (9 - 2 * b - c)) / q2;
  const double e7 = d + 0.04 * (193 - 24 * d - 9 * a) / q1;
  const double s7 = d * d + 0.08 * (-24 * d * d + 193 * d - 9 * a * d) / q1 +
                    0.04 *
                        ((a - d) * (a - d) + 2 * (2 - a - d) * (2 - a - d) +
                         (9 - 8 * a - d) * (9 - 8 * a - d) + 20 * (9 - d) * (9 - d)) /
                        q2;
  return {e1, s1, e7, s7};
}

std::array<double, 4> chain_0_11_17_18(double a, double b) {
  const double r = 0.3 + 0.7 * a;
  const double u = 1 - 0.7 * (1 - a) * (1 - a);
  const double e11 = 11 + 0.3 / r;
  const double s11 = 121 + 6.6 / r + 21.9 / u;
  const double k = 0.2 + 0.03 * (1 - a) / r;
  const double e17 = 17 + k / (0.9 + 0.1 * b);
  const double s17 = 289 + k * 34 / (0.9 + 0.1 * b) +
                     (4.4 - 0.36 * (1 - a) / r + 2.19 * (1 - a) * (1 - a) / u) /
                         (1 - 0.1 * (1 - b) * (1 - b));
  return {e11, s11, e17, s17};
}

std::array<double, 2> chain_0_1_4(double a) {
  const double r = 0.2 + 0.8 * a;
  return {1 + 0.2 / r, 1 + 0.4 / r + 1 / (1 - 0.8 * (1 - a) * (1 - a))};
}

}  // namespace tcstop::closed_form
