#pragma once

// Central finite-difference stencils used by the residual verifiers and the
// epsilon-coefficient extractor. Weights are the exact rational values for
// symmetric stencils on unit-spaced nodes, divided by h^order at use time.

#include <array>
#include <cmath>
#include <concepts>
#include <span>

namespace cfkdv::fd {

// 9-point stencils, nodes -4..4.
inline constexpr std::array<double, 9> kD1Order8 = {
    1.0 / 280, -4.0 / 105, 1.0 / 5, -4.0 / 5, 0.0, 4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280};
inline constexpr std::array<double, 9> kD2Order8 = {
    -1.0 / 560, 8.0 / 315, -1.0 / 5, 8.0 / 5, -205.0 / 72, 8.0 / 5, -1.0 / 5, 8.0 / 315, -1.0 / 560};
inline constexpr std::array<double, 9> kD3Order6 = {
    -7.0 / 240, 3.0 / 10, -169.0 / 120, 61.0 / 30, 0.0, -61.0 / 30, 169.0 / 120, -3.0 / 10, 7.0 / 240};

// 11-point third derivative, nodes -5..5, order 8.
inline constexpr std::array<double, 11> kD3Order8 = {
    41.0 / 6048,   -1261.0 / 15120, 541.0 / 1120, -4369.0 / 2520, 1669.0 / 720, 0.0,
    -1669.0 / 720, 4369.0 / 2520,   -541.0 / 1120, 1261.0 / 15120, -41.0 / 6048};

template <typename F>
  requires std::invocable<F, double>
double apply(F&& f, double x, std::span<const double> weights, int order, double h) {
  const int m = static_cast<int>(weights.size()) / 2;
  double acc = 0.0;
  for (int i = 0; i < static_cast<int>(weights.size()); ++i)
    if (weights[i] != 0.0) acc += weights[i] * f(x + (i - m) * h);
  return acc / std::pow(h, order);
}

/// One Richardson halving for a stencil whose leading error term is h^p.
template <typename F>
  requires std::invocable<F, double>
double richardson(F&& f, double x, std::span<const double> weights, int order, double h, int p) {
  const double coarse = apply(f, x, weights, order, h);
  const double fine = apply(f, x, weights, order, h / 2.0);
  const double w = std::pow(2.0, p);
  return (w * fine - coarse) / (w - 1.0);
}

/// First derivative, order 8 plus one Richardson halving.
template <typename F>
  requires std::invocable<F, double>
double d1(F&& f, double x, double h) {
  return richardson(f, x, kD1Order8, 1, h, 8);
}

/// Third derivative, order 8 plus one Richardson halving.
template <typename F>
  requires std::invocable<F, double>
double d3(F&& f, double x, double h) {
  return richardson(f, x, kD3Order8, 3, h, 8);
}

}  // namespace cfkdv::fd
