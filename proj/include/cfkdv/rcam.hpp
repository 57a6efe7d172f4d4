#pragma once

// Series iteration for the reduced coupled KdV ODE system: leading term,
// Adomian polynomials of the bilinear nonlinearities (Cauchy convolutions),
// inverse-operator updates and partial sums.

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cfkdv/error.hpp"
#include "cfkdv/expsum.hpp"
#include "cfkdv/params.hpp"

namespace cfkdv {

/// Sign pattern of the linear-operator roots. Only AllPositive is realized
/// by this system (both lambdas are positive by construction).
enum class BoundaryCase { MixedSigns, AllPositive, AllNegative };

struct SeriesState {
  Params params;
  // corrections[n] = (U_n, V_n)
  std::vector<std::pair<ExpSum, ExpSum>> corrections;

  std::size_t order() const { return corrections.empty() ? 0 : corrections.size() - 1; }

  nlohmann::json to_json() const {
    nlohmann::json orders = nlohmann::json::array();
    for (const auto& [u, v] : corrections)
      orders.push_back({{"U", u.to_json()["terms"]}, {"V", v.to_json()["terms"]}});
    return {{"params", params.to_json()}, {"corrections", orders}};
  }
};

/// Leading term for vanishing left boundary values with both lambdas
/// positive: U0 = c1 e^{lambda1 xi}, V0 = c2 e^{lambda2 xi}.
inline std::pair<ExpSum, ExpSum> leading_term(const Params& params,
                                              BoundaryCase bc = BoundaryCase::AllPositive) {
  if (bc != BoundaryCase::AllPositive)
    throw Error(ErrorKind::NotImplemented,
                "only the all-positive-lambda leading term arises for this system");
  params.validate();
  ExpSum::TermMap u, v;
  if (params.c1 != 0.0) u[LatticeKey{1, 0}] = params.c1;
  if (params.c2 != 0.0) v[LatticeKey{0, 1}] = params.c2;
  return {params.make_sum(std::move(u)), params.make_sum(std::move(v))};
}

/// Adomian polynomials of order m for the right-hand side
///   Delta1 = -(6/k^2) (U U')_m + (2b/(a k^2)) (V V')_m
///   Delta2 = -(3/k^2) (U V')_m
/// where (X Y')_m is the order-m Cauchy convolution of the series.
inline std::pair<ExpSum, ExpSum> adomian_delta(const SeriesState& state, std::size_t m) {
  if (m >= state.corrections.size())
    throw Error(ErrorKind::Index, "adomian_delta requires corrections 0.." + std::to_string(m));
  const Params& p = state.params;
  const double k2 = p.k * p.k;
  ExpSum d1 = p.zero_sum(), d2 = p.zero_sum();
  for (std::size_t j = 0; j <= m; ++j) {
    const auto& [uj, vj] = state.corrections[j];
    const auto& [um, vm] = state.corrections[m - j];
    d1 = d1.add(uj.mul(um.diff()).scale(-6.0 / k2));
    d1 = d1.add(vj.mul(vm.diff()).scale(2.0 * p.b / (p.a * k2)));
    d2 = d2.add(uj.mul(vm.diff()).scale(-3.0 / k2));
  }
  return {std::move(d1), std::move(d2)};
}

/// Runs the iteration up to order N (inclusive): corrections[n+1] is the
/// inverse operator applied to the order-n Adomian polynomials.
inline SeriesState iterate(const Params& params, std::size_t N) {
  params.validate();
  SeriesState state{params, {}};
  state.corrections.push_back(leading_term(params));
  const double l1 = params.lambda1(), l2 = params.lambda2();
  for (std::size_t n = 0; n < N; ++n) {
    auto [d1, d2] = adomian_delta(state, n);
    try {
      state.corrections.emplace_back(d1.apply_inverse_op(l1), d2.apply_inverse_op(l2));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Resonance)
        throw Error(ErrorKind::Resonance,
                    "at iteration " + std::to_string(n + 1) + ": " + e.what());
      throw;
    }
  }
  return state;
}

/// (sum_{n<=upto} U_n(xi), sum_{n<=upto} V_n(xi)).
inline std::pair<double, double> partial_sum(const SeriesState& state, std::size_t upto,
                                             double xi) {
  if (upto >= state.corrections.size())
    throw Error(ErrorKind::Index, "partial_sum order exceeds iterated depth");
  double su = 0.0, sv = 0.0;
  for (std::size_t n = 0; n <= upto; ++n) {
    su += state.corrections[n].first.eval(xi);
    sv += state.corrections[n].second.eval(xi);
  }
  return {su, sv};
}

/// Operational convergence-region indicator: both seed amplitudes, measured
/// against the scales set by the denominator structure of the closed form,
/// must be below 1/2. Reported, never asserted as a claim of the method.
inline double convergence_rho(const Params& p, double xi) {
  const double l1 = p.lambda1(), l2 = p.lambda2();
  const double k2 = p.k * p.k;
  const double t1 = std::abs(p.c1) * std::exp(l1 * xi) / (2.0 * k2 * l1 * l1);
  const double denom = 8.0 * p.a * k2 * k2 * l2 * l2 * (l1 - 2.0 * l2) * (l1 + l2) *
                       (l1 + l2) * std::pow(l1 + 2.0 * l2, 3);
  const double t2 = std::abs(p.b) * p.c2 * p.c2 * std::exp(2.0 * l2 * xi) / std::abs(denom);
  return std::max(t1, t2);
}

inline bool in_convergence_region(const Params& p, double xi) {
  return convergence_rho(p, xi) < 0.5;
}

/// Largest xi at which convergence_rho equals `target` (rho is a max of two
/// increasing exponentials, so this is exact, no root finding needed).
inline double xi_at_rho(const Params& p, double target) {
  const double l1 = p.lambda1(), l2 = p.lambda2();
  const double k2 = p.k * p.k;
  double xi = std::numeric_limits<double>::infinity();
  if (p.c1 != 0.0) {
    const double amp = std::abs(p.c1) / (2.0 * k2 * l1 * l1);
    xi = std::min(xi, (std::log(target) - std::log(amp)) / l1);
  }
  if (p.b != 0.0 && p.c2 != 0.0) {
    const double denom = 8.0 * p.a * k2 * k2 * l2 * l2 * (l1 - 2.0 * l2) * (l1 + l2) *
                         (l1 + l2) * std::pow(l1 + 2.0 * l2, 3);
    const double amp = std::abs(p.b) * p.c2 * p.c2 / std::abs(denom);
    xi = std::min(xi, (std::log(target) - std::log(amp)) / (2.0 * l2));
  }
  if (!std::isfinite(xi))
    throw Error(ErrorKind::InvalidParam, "zero seed has no finite rho level set");
  return xi;
}

}  // namespace cfkdv
