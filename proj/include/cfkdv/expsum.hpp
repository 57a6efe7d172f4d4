#pragma once

// Exact arithmetic on finite sums of exponentials
//
//     s(xi) = sum_{(m,n)} c_{m,n} * exp((m*lambda1 + n*lambda2) * xi)
//
// with integer (m, n) on the exponent lattice and real coefficients.
// This ring is closed under addition, multiplication, differentiation and
// the inverse of the operator O[f] = f''' - lambda^2 f', which is all the
// series iteration ever needs.

#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "cfkdv/error.hpp"

namespace cfkdv {

/// Integer multipliers (m, n) of (lambda1, lambda2); identifies the
/// exponent mu = m*lambda1 + n*lambda2. Ordered lexicographically so all
/// iteration over a sum is deterministic.
struct LatticeKey {
  int m = 0;
  int n = 0;
  friend auto operator<=>(const LatticeKey&, const LatticeKey&) = default;
};

/// Relative coefficient drop tolerance: terms below tau_drop * max|c| are
/// removed after every operation.
inline constexpr double kDropTolerance = 1e-14;

/// Resonance threshold scale for the inverse operator.
inline double resonance_threshold(double lambda1) {
  return 1e-9 * std::max(1.0, lambda1 * lambda1 * lambda1);
}

class ExpSum {
 public:
  using TermMap = std::map<LatticeKey, double>;

  ExpSum(double lambda1, double lambda2) : lambda1_(lambda1), lambda2_(lambda2) {}

  ExpSum(double lambda1, double lambda2, TermMap terms)
      : lambda1_(lambda1), lambda2_(lambda2), terms_(std::move(terms)) {
    normalize();
  }

  double lambda1() const { return lambda1_; }
  double lambda2() const { return lambda2_; }
  const TermMap& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Coefficient at (m, n); zero when the key is absent.
  double coeff(int m, int n) const {
    auto it = terms_.find(LatticeKey{m, n});
    return it == terms_.end() ? 0.0 : it->second;
  }

  double exponent_of(const LatticeKey& key) const {
    return key.m * lambda1_ + key.n * lambda2_;
  }

  ExpSum add(const ExpSum& other) const {
    require_same_context(other);
    TermMap out = terms_;
    for (const auto& [key, c] : other.terms_) out[key] += c;
    return ExpSum(lambda1_, lambda2_, std::move(out));
  }

  ExpSum mul(const ExpSum& other) const {
    require_same_context(other);
    TermMap out;
    for (const auto& [k1, c1] : terms_)
      for (const auto& [k2, c2] : other.terms_)
        out[LatticeKey{k1.m + k2.m, k1.n + k2.n}] += c1 * c2;
    return ExpSum(lambda1_, lambda2_, std::move(out));
  }

  ExpSum scale(double r) const {
    TermMap out;
    if (r != 0.0)
      for (const auto& [key, c] : terms_) out[key] = c * r;
    return ExpSum(lambda1_, lambda2_, std::move(out));
  }

  /// d/dxi: each coefficient is multiplied by its exponent mu.
  ExpSum diff() const {
    TermMap out;
    for (const auto& [key, c] : terms_) {
      double mu = exponent_of(key);
      if (mu != 0.0) out[key] = c * mu;
    }
    return ExpSum(lambda1_, lambda2_, std::move(out));
  }

  /// Particular solution of f''' - lambda^2 f' = this, homogeneous constants
  /// dropped: each coefficient is divided by mu * (mu^2 - lambda^2).
  /// Throws a resonance error when any denominator falls below the threshold.
  ExpSum apply_inverse_op(double lambda) const {
    const double tau = resonance_threshold(lambda1_);
    TermMap out;
    for (const auto& [key, c] : terms_) {
      double mu = exponent_of(key);
      double denom = mu * (mu * mu - lambda * lambda);
      if (std::abs(denom) < tau) {
        std::ostringstream msg;
        msg << "inverse operator resonance at key (" << key.m << ", " << key.n
            << "): mu = " << mu << ", |mu*(mu^2 - lambda^2)| = " << std::abs(denom)
            << " < " << tau;
        throw Error(ErrorKind::Resonance, msg.str());
      }
      out[key] = c / denom;
    }
    return ExpSum(lambda1_, lambda2_, std::move(out));
  }

  /// Sum of c * exp(mu * xi) in lexicographic key order.
  double eval(double xi) const {
    double acc = 0.0;
    for (const auto& [key, c] : terms_) acc += c * std::exp(exponent_of(key) * xi);
    if (!std::isfinite(acc))
      throw Error(ErrorKind::Range, "ExpSum evaluation overflowed at xi = " + std::to_string(xi));
    return acc;
  }

  bool same_keys(const ExpSum& other) const {
    if (terms_.size() != other.terms_.size()) return false;
    auto it = other.terms_.begin();
    for (const auto& [key, c] : terms_) {
      if (key != it->first) return false;
      ++it;
    }
    return true;
  }

  /// Max over keys of |c_this - c_other| / max|c|; infinity on key mismatch.
  double max_relative_coeff_diff(const ExpSum& other) const {
    if (!same_keys(other)) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const auto& [key, c] : terms_) {
      double oc = other.terms_.at(key);
      double scale = std::max(std::abs(c), std::abs(oc));
      if (scale > 0.0) worst = std::max(worst, std::abs(c - oc) / scale);
    }
    return worst;
  }

  nlohmann::json to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [key, c] : terms_)
      terms.push_back({{"m", key.m}, {"n", key.n}, {"c", c}});
    return {{"lambda1", lambda1_}, {"lambda2", lambda2_}, {"terms", terms}};
  }

 private:
  void require_same_context(const ExpSum& other) const {
    if (lambda1_ != other.lambda1_ || lambda2_ != other.lambda2_)
      throw Error(ErrorKind::ContextMismatch,
                  "ExpSum operands have different (lambda1, lambda2) contexts");
  }

  void normalize() {
    double max_abs = 0.0;
    for (const auto& [key, c] : terms_) max_abs = std::max(max_abs, std::abs(c));
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (it->second == 0.0 || std::abs(it->second) < kDropTolerance * max_abs)
        it = terms_.erase(it);
      else
        ++it;
    }
  }

  double lambda1_;
  double lambda2_;
  TermMap terms_;
};

}  // namespace cfkdv
