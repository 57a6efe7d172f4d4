#pragma once

// Parameter set of the coupled KdV system and its traveling-wave reduction.
//
// The reduced ODE system is
//
//   U''' - lambda1^2 U' + (6/k^2) U U' - (2b/(a k^2)) V V' = 0
//   V''' - lambda2^2 V' + (3/k^2) U V'                     = 0
//
// with lambda1 = sqrt(-c/(a k^3)), lambda2 = sqrt(-c/k^3), so that
// lambda2 = sqrt(a) * lambda1 exactly.

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "cfkdv/error.hpp"
#include "cfkdv/expsum.hpp"

namespace cfkdv {

struct Params {
  double a = 1.0;      // dispersion coefficient of the first equation
  double b = 0.0;      // coupling coefficient
  double c = 0.0;      // wave speed
  double k = 1.0;      // wave number
  double alpha = 1.0;  // conformable order in x, (0, 1]
  double beta = 1.0;   // conformable order in t, (0, 1]
  double xi0 = 0.0;    // phase shift
  double c1 = 0.0;     // integration constant (U seed)
  double c2 = 0.0;     // integration constant (V seed)

  double lambda1() const { return std::sqrt(-c / (a * k * k * k)); }
  double lambda2() const { return std::sqrt(-c / (k * k * k)); }

  /// Throws on any invariant violation; returns *this for chaining.
  const Params& validate() const {
    if (k == 0.0) throw Error(ErrorKind::InvalidParam, "k must be nonzero");
    if (a <= 0.0) throw Error(ErrorKind::InvalidParam, "a must be positive");
    if (!(c * k * k * k < 0.0))
      throw Error(ErrorKind::InvalidParam, "c*k^3 must be negative so the lambdas are real");
    if (!(alpha > 0.0 && alpha <= 1.0))
      throw Error(ErrorKind::InvalidParam, "alpha must lie in (0, 1]");
    if (!(beta > 0.0 && beta <= 1.0))
      throw Error(ErrorKind::InvalidParam, "beta must lie in (0, 1]");
    const double l1 = lambda1(), l2 = lambda2();
    const double tau = resonance_threshold(l1);
    if (a == 1.0 || std::abs(l1 - l2) < tau)
      throw Error(ErrorKind::DistinctRootsViolation,
                  "a == 1 makes lambda1 == lambda2; the scheme requires distinct roots");
    if (std::abs(l1 - 2.0 * l2) < tau / (l1 * l1))
      throw Error(ErrorKind::Resonance, "lambda1 == 2*lambda2 makes the inverse operator singular");
    return *this;
  }

  /// Build from the ODE-side quantities (lambda1, lambda2, b, k, c1, c2),
  /// back-computing c = -lambda2^2 k^3 and a = (lambda2/lambda1)^2.
  static Params from_lambdas(double lambda1, double lambda2, double b, double k,
                             double c1, double c2, double alpha = 1.0,
                             double beta = 1.0, double xi0 = 0.0) {
    Params p;
    p.a = (lambda2 / lambda1) * (lambda2 / lambda1);
    p.b = b;
    p.c = -lambda2 * lambda2 * k * k * k;
    p.k = k;
    p.alpha = alpha;
    p.beta = beta;
    p.xi0 = xi0;
    p.c1 = c1;
    p.c2 = c2;
    p.validate();
    return p;
  }

  ExpSum zero_sum() const { return ExpSum(lambda1(), lambda2()); }

  ExpSum make_sum(ExpSum::TermMap terms) const {
    return ExpSum(lambda1(), lambda2(), std::move(terms));
  }

  nlohmann::json to_json() const {
    return {{"a", a},         {"b", b},   {"c", c},   {"k", k},
            {"alpha", alpha}, {"beta", beta}, {"xi0", xi0}, {"c1", c1},
            {"c2", c2},       {"lambda1", lambda1()}, {"lambda2", lambda2()}};
  }

  static Params from_json(const nlohmann::json& j) {
    Params p;
    p.a = j.at("a").get<double>();
    p.b = j.at("b").get<double>();
    p.c = j.at("c").get<double>();
    p.k = j.at("k").get<double>();
    p.alpha = j.value("alpha", 1.0);
    p.beta = j.value("beta", 1.0);
    p.xi0 = j.value("xi0", 0.0);
    p.c1 = j.value("c1", 0.0);
    p.c2 = j.value("c2", 0.0);
    p.validate();
    return p;
  }
};

}  // namespace cfkdv
