#pragma once

// Mechanized boundedness checks: lambda-ordering case classification, the
// theorem sign conditions, sign-constancy scan of the common denominator Q,
// hump counting, and exponential tail-decay verification.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfkdv/closed_form.hpp"
#include "cfkdv/error.hpp"
#include "cfkdv/params.hpp"
#include "cfkdv/rcam.hpp"
#include "cfkdv/wave.hpp"

namespace cfkdv {

enum class CaseLabel { I, II, III, None };
enum class Subcase { A, B, C, D, None };
enum class QSign { Positive, Negative, Mixed };

inline const char* to_string(CaseLabel c) {
  switch (c) {
    case CaseLabel::I: return "I";
    case CaseLabel::II: return "II";
    case CaseLabel::III: return "III";
    default: return "none";
  }
}
inline const char* to_string(Subcase s) {
  switch (s) {
    case Subcase::A: return "a";
    case Subcase::B: return "b";
    case Subcase::C: return "c";
    case Subcase::D: return "d";
    default: return "none";
  }
}
inline const char* to_string(QSign s) {
  switch (s) {
    case QSign::Positive: return "positive";
    case QSign::Negative: return "negative";
    default: return "mixed";
  }
}

/// Case I: lambda1/2 < lambda2 < lambda1; II: lambda1 < lambda2;
/// III: lambda2 < lambda1/2. Cross-checked against the equivalent
/// thresholds on a (lambda2 = sqrt(a) lambda1).
inline CaseLabel classify_case(const Params& p) {
  p.validate();
  const double l1 = p.lambda1(), l2 = p.lambda2();
  const double tau = resonance_threshold(l1);
  if (std::abs(l2 - l1) < tau || std::abs(l2 - 0.5 * l1) < tau)
    throw Error(ErrorKind::InvalidParam, "lambda ordering sits on a case boundary");
  CaseLabel by_lambda;
  if (l2 > l1)
    by_lambda = CaseLabel::II;
  else if (l2 > 0.5 * l1)
    by_lambda = CaseLabel::I;
  else
    by_lambda = CaseLabel::III;
  CaseLabel by_a;
  if (p.a > 1.0)
    by_a = CaseLabel::II;
  else if (p.a > 0.25)
    by_a = CaseLabel::I;
  else
    by_a = CaseLabel::III;
  if (by_lambda != by_a)
    throw Error(ErrorKind::InvalidParam, "lambda-ordering and a-threshold classifications disagree");
  return by_lambda;
}

/// Matches the parameter signs against the sub-case tables. All sub-cases
/// require c1 > 0 and a > 0; the case determines the sign of b; the
/// sub-case letter encodes signs of (c2, k). Theorem-2 mode additionally
/// requires the sign of c opposite to k.
inline Subcase check_conditions(const Params& p, bool theorem2 = false) {
  const CaseLabel label = classify_case(p);
  if (!(p.c1 > 0.0 && p.a > 0.0)) return Subcase::None;
  const bool b_ok = (label == CaseLabel::III) ? p.b < 0.0 : p.b > 0.0;
  if (!b_ok) return Subcase::None;
  if (p.c2 == 0.0 || p.k == 0.0) return Subcase::None;
  if (theorem2 && !((p.k < 0.0 && p.c > 0.0) || (p.k > 0.0 && p.c < 0.0))) return Subcase::None;
  if (p.c2 > 0.0) return p.k < 0.0 ? Subcase::A : Subcase::B;
  return p.k < 0.0 ? Subcase::C : Subcase::D;
}

struct QScanResult {
  QSign sign = QSign::Mixed;
  double min_abs = 0.0;  // min |Q| normalized by max |Q| over the scan
  double xi_lo = 0.0, xi_hi = 0.0;
  bool shrunk = false;  // range was reduced to dodge overflow
};

/// Evaluates Q at n uniform points plus 3x refinement around near-zeros.
inline QScanResult scan_Q(const Params& p, double xi_lo, double xi_hi, std::size_t n) {
  if (n < 100) throw Error(ErrorKind::InvalidParam, "scan_Q needs at least 100 samples");
  QScanResult res;
  // shrink the window until the endpoints evaluate
  bool shrunk = false;
  for (int tries = 0; tries < 200; ++tries) {
    try {
      eval_Q(p, xi_hi);
      break;
    } catch (const Error&) {
      xi_hi = xi_lo + 0.9 * (xi_hi - xi_lo);
      shrunk = true;
    }
  }
  res.xi_lo = xi_lo;
  res.xi_hi = xi_hi;
  res.shrunk = shrunk;

  std::vector<double> xs, qs;
  xs.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    xs.push_back(xi_lo + (xi_hi - xi_lo) * double(i) / double(n - 1));
  for (double x : xs) qs.push_back(eval_Q(p, x));

  double max_abs = 0.0;
  for (double q : qs) max_abs = std::max(max_abs, std::abs(q));
  // refine around near-zeros and sign changes
  const double near = 0.01 * max_abs;
  std::vector<double> extra;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (std::abs(qs[i]) < near || qs[i] * qs[i + 1] <= 0.0) {
      const double w = xs[i + 1] - xs[i];
      for (int j = 1; j <= 3; ++j) extra.push_back(xs[i] + w * j / 4.0);
    }
  }
  for (double x : extra) {
    xs.push_back(x);
    qs.push_back(eval_Q(p, x));
  }

  bool any_pos = false, any_neg = false;
  double min_abs = std::numeric_limits<double>::infinity();
  for (double q : qs) {
    if (q > 0.0) any_pos = true;
    if (q < 0.0) any_neg = true;
    min_abs = std::min(min_abs, std::abs(q));
    max_abs = std::max(max_abs, std::abs(q));
  }
  res.sign = (any_pos && any_neg) ? QSign::Mixed : (any_pos ? QSign::Positive : QSign::Negative);
  res.min_abs = max_abs > 0.0 ? min_abs / max_abs : 0.0;
  return res;
}

/// Number of strict local maxima of |value| whose prominence (height above
/// the higher flanking minimum) exceeds prominence * global max.
inline std::size_t count_humps(const std::vector<double>& values, double prominence) {
  if (values.size() < 3) throw Error(ErrorKind::InvalidParam, "count_humps needs >= 3 samples");
  if (!(prominence > 0.0)) throw Error(ErrorKind::InvalidParam, "prominence must be positive");
  std::vector<double> av(values.size());
  double global = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    av[i] = std::abs(values[i]);
    global = std::max(global, av[i]);
  }
  if (global == 0.0) return 0;
  std::size_t count = 0;
  for (std::size_t i = 1; i + 1 < av.size(); ++i) {
    if (!(av[i] > av[i - 1] && av[i] > av[i + 1])) continue;
    double left_min = av[i];
    for (std::size_t j = i; j-- > 0;) {
      if (av[j] > av[i]) break;
      left_min = std::min(left_min, av[j]);
    }
    double right_min = av[i];
    for (std::size_t j = i + 1; j < av.size(); ++j) {
      if (av[j] > av[i]) break;
      right_min = std::min(right_min, av[j]);
    }
    if (av[i] - std::max(left_min, right_min) > prominence * global) ++count;
  }
  return count;
}

struct TailDecay {
  bool left_ok = false, right_ok = false;
  double sigma_left = 0.0, sigma_right = 0.0;
  bool left_saturated = false, right_saturated = false;
};

/// Checks exponential decay on each tail |xi| >= L of the curve. Both the
/// monotonicity of |value| and the least-squares fit of log|value| are
/// taken over the far half of the tail, past any low-amplitude secondary
/// structure or slow pre-asymptotic regime; the fit must have the decaying
/// slope sign and an RMS residual below 0.1.
inline TailDecay tail_decay(const std::vector<double>& xi, const std::vector<double>& values,
                            double L) {
  if (xi.size() != values.size() || xi.empty())
    throw Error(ErrorKind::InvalidParam, "tail_decay needs matching nonempty samples");
  if (xi.front() > -L || xi.back() < L)
    throw Error(ErrorKind::InvalidParam, "curve does not extend beyond +/-L");

  TailDecay out;
  auto fit_tail = [&](bool left) {
    std::vector<double> tx, ty;
    std::size_t zeros = 0, total = 0;
    double extent = L;
    for (std::size_t i = 0; i < xi.size(); ++i) {
      if (left ? xi[i] > -L : xi[i] < L) continue;
      ++total;
      extent = std::max(extent, std::abs(xi[i]));
      if (values[i] == 0.0) {
        ++zeros;
        continue;
      }
      tx.push_back(xi[i]);
      ty.push_back(std::log(std::abs(values[i])));
    }
    bool ok = false, saturated = false;
    double sigma = 0.0;
    if (tx.size() < 3) {
      // tail underflowed to exact zero: decay is as fast as representable
      ok = zeros > 0 && zeros == total - tx.size() ? true : false;
      saturated = ok;
      sigma = std::numeric_limits<double>::infinity();
      return std::tuple{ok, sigma, saturated};
    }
    // monotonicity and rate fit on the far half only
    const double far = 0.5 * (L + extent);
    bool monotone = true;
    for (std::size_t i = 1; i < tx.size(); ++i) {
      if (std::abs(tx[i]) < far || std::abs(tx[i - 1]) < far) continue;
      const double d = ty[i] - ty[i - 1];
      if (left ? d < 0.0 : d > 0.0) monotone = false;
    }
    double nn = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < tx.size(); ++i) {
      if (std::abs(tx[i]) < far) continue;
      nn += 1.0;
      sx += tx[i];
      sy += ty[i];
      sxx += tx[i] * tx[i];
      sxy += tx[i] * ty[i];
    }
    if (nn < 3.0) return std::tuple{false, 0.0, false};
    const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / nn;
    double rss = 0;
    for (std::size_t i = 0; i < tx.size(); ++i) {
      if (std::abs(tx[i]) < far) continue;
      const double r = ty[i] - (slope * tx[i] + intercept);
      rss += r * r;
    }
    const double rms = std::sqrt(rss / nn);
    sigma = left ? slope : -slope;
    ok = sigma > 0.0 && monotone && rms < 0.1;
    return std::tuple{ok, sigma, saturated};
  };
  std::tie(out.left_ok, out.sigma_left, out.left_saturated) = fit_tail(true);
  std::tie(out.right_ok, out.sigma_right, out.right_saturated) = fit_tail(false);
  return out;
}

/// Location of the largest |U| over a broad window around the amplitude
/// transition of the seed term.
inline double locate_peak(const Params& p) {
  const double l2 = p.lambda2();
  const double lmin = std::min(p.lambda1(), l2);
  double center;
  try {
    center = xi_at_rho(p, 0.5);
  } catch (const Error&) {
    return 0.0;  // zero seed: flat solution
  }
  double best_xi = center, best = -1.0;
  const std::size_t n = 6001;
  const double lo = center - 60.0 / lmin, hi = center + 60.0 / lmin;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * double(i) / double(n - 1);
    double u;
    try {
      u = std::abs(eval_U(p, x));
    } catch (const Error&) {
      continue;
    }
    if (u > best) {
      best = u;
      best_xi = x;
    }
  }
  return best_xi;
}

/// Profile of U, V over [xi_lo, xi_hi].
inline ProfileSample sample_profile(const Params& p, double xi_lo, double xi_hi, std::size_t n) {
  ProfileSample s;
  s.xi.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = xi_lo + (xi_hi - xi_lo) * double(i) / double(n - 1);
    auto [u, v] = eval_generating(p, x, 1.0);
    s.xi.push_back(x);
    s.U.push_back(u);
    s.V.push_back(v);
  }
  return s;
}

struct BoundsOptions {
  double prominence = 0.05;    // hump prominence relative to the global max
  double tail_L = 30.0;        // tail fit starts at |xi - xi_peak| >= L
  double scan_halfwidth = 80;  // Q scan half width in units of 1/lambda2
  std::size_t scan_samples = 2001;
  std::size_t profile_samples = 8001;
  bool theorem2 = false;
};

struct BoundsReport {
  CaseLabel case_label = CaseLabel::None;
  Subcase subcase = Subcase::None;
  QSign q_sign = QSign::Mixed;
  double q_min_abs = 0.0;
  std::size_t humps_U = 0, humps_V = 0;
  TailDecay tails_U, tails_V;
  double xi_peak = 0.0;
  double scan_lo = 0.0, scan_hi = 0.0;
  std::string notes;

  nlohmann::json to_json() const {
    auto rate = [](double s, bool saturated) -> nlohmann::json {
      if (saturated || !std::isfinite(s)) return "saturated";
      return s;
    };
    return {{"case", to_string(case_label)},
            {"subcase", to_string(subcase)},
            {"q_sign", to_string(q_sign)},
            {"q_min_abs", q_min_abs},
            {"humps_U", humps_U},
            {"humps_V", humps_V},
            {"tail_U", {{"left_ok", tails_U.left_ok},
                        {"right_ok", tails_U.right_ok},
                        {"sigma_left", rate(tails_U.sigma_left, tails_U.left_saturated)},
                        {"sigma_right", rate(tails_U.sigma_right, tails_U.right_saturated)}}},
            {"tail_V", {{"left_ok", tails_V.left_ok},
                        {"right_ok", tails_V.right_ok},
                        {"sigma_left", rate(tails_V.sigma_left, tails_V.left_saturated)},
                        {"sigma_right", rate(tails_V.sigma_right, tails_V.right_saturated)}}},
            {"xi_peak", xi_peak},
            {"scan_range", {scan_lo, scan_hi}},
            {"notes", notes}};
  }
};

/// Full report for one parameter set: classification, conditions, Q scan
/// over the default window, hump counts and tail fits on a centered profile.
inline BoundsReport bounds_report(const Params& p, const BoundsOptions& opts = {}) {
  BoundsReport rep;
  rep.case_label = classify_case(p);
  rep.subcase = check_conditions(p, opts.theorem2);
  rep.xi_peak = locate_peak(p);
  const double w = opts.scan_halfwidth / p.lambda2();
  rep.scan_lo = rep.xi_peak - w;
  rep.scan_hi = rep.xi_peak + w;
  const QScanResult qs = scan_Q(p, rep.scan_lo, rep.scan_hi, opts.scan_samples);
  rep.q_sign = qs.sign;
  rep.q_min_abs = qs.min_abs;
  if (qs.shrunk) rep.notes += "Q scan range shrunk to avoid overflow; ";
  ProfileSample prof = sample_profile(p, rep.xi_peak - w, std::min(rep.xi_peak + w, qs.xi_hi),
                                      opts.profile_samples);
  rep.humps_U = count_humps(prof.U, opts.prominence);
  rep.humps_V = count_humps(prof.V, opts.prominence);
  std::vector<double> centered(prof.xi.size());
  for (std::size_t i = 0; i < prof.xi.size(); ++i) centered[i] = prof.xi[i] - rep.xi_peak;
  rep.tails_U = tail_decay(centered, prof.U, opts.tail_L);
  rep.tails_V = tail_decay(centered, prof.V, opts.tail_L);
  return rep;
}

}  // namespace cfkdv
