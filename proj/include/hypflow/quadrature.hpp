#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "hypflow/constants.hpp"
#include "hypflow/errors.hpp"

namespace hypflow {

namespace detail {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
inline constexpr double kGK15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr double kGK15WeightsK[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kGK15WeightsG[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <class F>
void gk15(const F& f, double a, double b, double* value, double* error) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(mid);
  double k = kGK15WeightsK[7] * fc;
  double g = kGK15WeightsG[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kGK15Nodes[i];
    const double fs = f(mid + dx) + f(mid - dx);
    k += kGK15WeightsK[i] * fs;
    if (i % 2 == 1) g += kGK15WeightsG[i / 2] * fs;
  }
  *value = k * half;
  *error = std::abs((k - g) * half);
}

}  // namespace detail

// Adaptive bisection on [a, b] until every interval satisfies
// err <= max(abs_tol, rel_tol * |total|) scaled by its share of the domain.
// Throws QuadratureFailure when the evaluation budget runs out.
template <class F>
double integrate_adaptive(const F& f, double a, double b,
                          double abs_tol = tol::kQuadAbs,
                          double rel_tol = tol::kQuadRel,
                          std::size_t budget = tol::kQuadBudget) {
  struct Interval {
    double a, b, value, error;
  };
  std::size_t evals = 0;
  auto eval = [&](double lo, double hi) {
    evals += 15;
    Interval iv{lo, hi, 0.0, 0.0};
    detail::gk15(f, lo, hi, &iv.value, &iv.error);
    return iv;
  };

  std::vector<Interval> stack{eval(a, b)};
  double sum = 0.0;
  const double span = std::abs(b - a);
  while (!stack.empty()) {
    Interval iv = stack.back();
    stack.pop_back();
    const double rough = sum + iv.value;
    const double target = std::max(abs_tol, rel_tol * std::abs(rough));
    const double share = target * std::max(std::abs(iv.b - iv.a) / span, 1e-3);
    if (iv.error <= share || std::abs(iv.b - iv.a) < 1e-15 * span) {
      sum += iv.value;
      continue;
    }
    if (evals + 30 > budget)
      throw QuadratureFailure("integrate_adaptive: evaluation budget exhausted");
    const double mid = 0.5 * (iv.a + iv.b);
    stack.push_back(eval(iv.a, mid));
    stack.push_back(eval(mid, iv.b));
  }
  return sum;
}

}  // namespace hypflow
