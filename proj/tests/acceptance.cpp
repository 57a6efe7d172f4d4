// Acceptance gate: one line per criterion, nonzero exit on any failure.
// Every expected value is computed by an independent code path (hand-coded
// correction formulas, scalar convolutions, finite differences) rather than
// by the library function under test.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cfkdv/bounds.hpp"
#include "cfkdv/closed_form.hpp"
#include "cfkdv/expsum.hpp"
#include "cfkdv/fd.hpp"
#include "cfkdv/params.hpp"
#include "cfkdv/rcam.hpp"
#include "cfkdv/tables.hpp"
#include "cfkdv/wave.hpp"

using cfkdv::ExpSum;
using cfkdv::LatticeKey;
using cfkdv::Params;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << criterion << ": " << what << '\n';
  if (!pass) ++g_failures;
}

std::vector<cfkdv::TableRow> load_or_bundled(const char* name,
                                             const std::vector<cfkdv::TableRow>& bundled) {
  if (const char* dir = std::getenv("CFKDV_DATA")) {
    std::ifstream is(std::string(dir) + "/" + name, std::ios::binary);
    if (is) return cfkdv::read_table_csv(is);
  }
  return bundled;
}

// ---------------------------------------------------------------------------
// Criterion 1: corrections 1..3 against hand-coded printed formulas.

struct PrintedCorrections {
  ExpSum::TermMap u1, v1, u2, v2, u3, v3;
};

PrintedCorrections printed_formulas(const Params& p) {
  const double l1 = p.lambda1(), l2 = p.lambda2();
  const double a = p.a, b = p.b, c1 = p.c1, c2 = p.c2;
  const double k2 = p.k * p.k, k4 = k2 * k2, k6 = k4 * k2;
  const double l1p2 = l1 * l1, l2p2 = l2 * l2;
  const double l1p3 = l1p2 * l1, l1p4 = l1p2 * l1p2;
  const double lm4 = l1p2 - 4.0 * l2p2;  // (l1 - 2 l2)(l1 + 2 l2)
  const double lp = l1 + l2, lm2 = l1 - 2.0 * l2, lp2c = l1 + 2.0 * l2;

  PrintedCorrections out;
  const double d1 = a * k2 * (l1p4 - 4.0 * l1p2 * l2p2);
  out.u1[LatticeKey{2, 0}] = -a * c1 * c1 * lm4 / d1;
  out.u1[LatticeKey{0, 2}] = -b * c2 * c2 * l1p2 / d1;
  out.v1[LatticeKey{1, 1}] = -3.0 * c1 * c2 * l2 / (k2 * l1 * lp * lp2c);

  const double dU2 = 4.0 * a * k4 * l1p4 * l2 * lp * lp * lm4;
  out.u2[LatticeKey{3, 0}] = 3.0 * c1 * a * c1 * c1 * l2 * lp * lp * lm4 / dU2;
  out.u2[LatticeKey{1, 2}] =
      3.0 * c1 * 2.0 * b * c2 * c2 * (l1p2 + 2.0 * l2p2) * l1p3 / dU2;

  const double dV2 = 8.0 * a * k4 * l1p3 * l2p2 * lp * lm4;
  out.v2[LatticeKey{2, 1}] = c2 * 12.0 * a * c1 * c1 * lm2 * l2p2 * l2 / dV2;
  out.v2[LatticeKey{0, 3}] = c2 * b * c2 * c2 * lp * l1p3 / dV2;

  const double dU3 = 4.0 * a * a * k6 * l1p4 * l1p2 * lm2 * lm2 * l2p2 * lp2c * lp2c * lp2c;
  out.u3[LatticeKey{4, 0}] =
      -2.0 * a * a * c1 * c1 * c1 * c1 * lm2 * lm2 * l2p2 * lp2c * lp2c * lp2c / dU3;
  out.u3[LatticeKey{2, 2}] =
      -12.0 * a * b * c1 * c1 * c2 * c2 * l2 *
      (l1p3 - 2.0 * l2 * l1p2 + 2.0 * l2p2 * l1 - 4.0 * l2p2 * l2) * l1p3 / dU3;
  out.u3[LatticeKey{0, 4}] =
      -b * b * c2 * c2 * c2 * c2 * lp2c * l1p4 * l1p2 / dU3;

  const double dV3 = 8.0 * a * k6 * l1p4 * l1 * lm2 * l2 * lp * lp * lp2c * lp2c * lp2c;
  out.v3[LatticeKey{3, 1}] = -3.0 * c1 * c2 * 2.0 * a * c1 * c1 * l2p2 * lp2c * lp2c *
                             (l1p2 - l1 * l2 - 2.0 * l2p2) / dV3;
  out.v3[LatticeKey{1, 3}] = -3.0 * c1 * c2 * 3.0 * b * c2 * c2 *
                             (l1p2 + l2 * l1 + 2.0 * l2p2) * l1p4 / dV3;
  return out;
}

void criterion1(const std::vector<cfkdv::TableRow>& table1) {
  bool pass = true;
  std::ostringstream detail;
  for (const auto& row : table1) {
    const cfkdv::SeriesState state = cfkdv::iterate(row.params, 3);
    const PrintedCorrections ref = printed_formulas(row.params);
    const ExpSum::TermMap* refs[] = {&ref.u1, &ref.v1, &ref.u2, &ref.v2, &ref.u3, &ref.v3};
    const ExpSum* got[] = {&state.corrections[1].first,  &state.corrections[1].second,
                           &state.corrections[2].first,  &state.corrections[2].second,
                           &state.corrections[3].first,  &state.corrections[3].second};
    const char* names[] = {"U1", "V1", "U2", "V2", "U3", "V3"};
    for (int i = 0; i < 6; ++i) {
      const ExpSum expect = row.params.make_sum(*refs[i]);
      if (!got[i]->same_keys(expect)) {
        pass = false;
        detail << " [" << row.id << " " << names[i] << ": key mismatch]";
        continue;
      }
      const double d = got[i]->max_relative_coeff_diff(expect);
      if (!(d < 1e-10)) {
        pass = false;
        detail << " [" << row.id << " " << names[i] << ": rel diff " << d << "]";
      }
    }
  }
  report(1, pass, "iterate(N=3) reproduces the six printed correction terms at all 12 rows" +
                      detail.str());
}

// ---------------------------------------------------------------------------
// Criterion 2: eps-Taylor coefficients of the generating functions.

void criterion2(const std::vector<cfkdv::TableRow>& table1) {
  bool pass = true;
  double worst = 0.0, worst_exact = 0.0;
  for (const auto& row : table1) {
    const Params& p = row.params;
    const cfkdv::SeriesState state = cfkdv::iterate(p, 3);
    const double base = cfkdv::xi_at_rho(p, 0.1);
    for (double off : {0.0, -0.5, -1.0}) {
      const double xi = base + off;
      auto fu = [&](double e) { return cfkdv::eval_generating(p, xi, e).first; };
      auto fv = [&](double e) { return cfkdv::eval_generating(p, xi, e).second; };
      const double h = 0.05;
      double fact = 1.0;
      for (int n = 0; n <= 3; ++n) {
        if (n > 0) fact *= n;
        double du, dv;
        if (n == 0) {
          du = fu(0.0);
          dv = fv(0.0);
        } else if (n == 1) {
          du = cfkdv::fd::richardson(fu, 0.0, cfkdv::fd::kD1Order8, 1, h, 8);
          dv = cfkdv::fd::richardson(fv, 0.0, cfkdv::fd::kD1Order8, 1, h, 8);
        } else if (n == 2) {
          du = cfkdv::fd::richardson(fu, 0.0, cfkdv::fd::kD2Order8, 2, h, 8);
          dv = cfkdv::fd::richardson(fv, 0.0, cfkdv::fd::kD2Order8, 2, h, 8);
        } else {
          du = cfkdv::fd::richardson(fu, 0.0, cfkdv::fd::kD3Order6, 3, h, 6);
          dv = cfkdv::fd::richardson(fv, 0.0, cfkdv::fd::kD3Order6, 3, h, 6);
        }
        const double eu = state.corrections[std::size_t(n)].first.eval(xi);
        const double ev = state.corrections[std::size_t(n)].second.eval(xi);
        const double su = std::abs(eu), sv = std::abs(ev);
        if (su > 0.0) worst = std::max(worst, std::abs(du / fact - eu) / su);
        if (sv > 0.0) worst = std::max(worst, std::abs(dv / fact - ev) / sv);
      }
      // eps = 1 must agree with the exact evaluators
      const double u1 = cfkdv::eval_generating(p, xi, 1.0).first;
      const double v1 = cfkdv::eval_generating(p, xi, 1.0).second;
      const double ru = std::abs(u1 - cfkdv::eval_U(p, xi)) / std::max(1.0, std::abs(u1));
      const double rv = std::abs(v1 - cfkdv::eval_V(p, xi)) / std::max(1.0, std::abs(v1));
      worst_exact = std::max({worst_exact, ru, rv});
    }
  }
  pass = worst < 1e-6 && worst_exact < 1e-13;
  std::ostringstream detail;
  detail << "eps-Taylor orders 0-3 match corrections (worst " << worst
         << "), eps=1 matches exact evaluators (worst " << worst_exact << ")";
  report(2, pass, detail.str());
}

// ---------------------------------------------------------------------------
// Criterion 3: partial sums converge to the closed form.

void criterion3(const std::vector<cfkdv::TableRow>& table1) {
  bool pass = true;
  double worst = 0.0;
  std::ostringstream detail;
  for (const auto& row : table1) {
    const Params& p = row.params;
    const cfkdv::SeriesState state = cfkdv::iterate(p, 8);
    const double lmin = std::min(p.lambda1(), p.lambda2());
    const double top = cfkdv::xi_at_rho(p, 1e-4);
    for (int i = 0; i < 5; ++i) {
      const double xi = top - 2.0 * i / lmin;
      const double u = cfkdv::eval_U(p, xi), v = cfkdv::eval_V(p, xi);
      double prev = 1e300;
      for (std::size_t n = 2; n <= 8; ++n) {
        auto [su, sv] = cfkdv::partial_sum(state, n, xi);
        const double err =
            std::max(std::abs(su - u) / std::abs(u), std::abs(sv - v) / std::abs(v));
        // below ~1e-11 the error sits on the roundoff floor and may jitter
        if (err > 1e-11 && !(err < 2.0 * prev)) {
          pass = false;
          detail << " [" << row.id << " non-monotone at order " << n << "]";
        }
        prev = err;
      }
      worst = std::max(worst, prev);
    }
  }
  if (!(worst < 1e-8)) pass = false;
  std::ostringstream line;
  line << "|S_8 - closed form| relative error < 1e-8 at 5 probes per row (worst " << worst
       << ")" << detail.str();
  report(3, pass, line.str());
}

// ---------------------------------------------------------------------------
// Criteria 4 and 5: residual suites.

void criterion4(const std::vector<cfkdv::TableRow>& table1) {
  double worst = 0.0;
  for (const auto& row : table1) {
    for (int i = 0; i < 100; ++i) {
      const double xi = -40.0 + 80.0 * i / 99.0;
      auto [r1, r2] = cfkdv::ode_residual(row.params, xi);
      worst = std::max({worst, r1, r2});
    }
  }
  std::ostringstream line;
  line << "ODE residuals < 1e-6 at 100 points per row (worst " << worst << ")";
  report(4, worst < 1e-6, line.str());
}

void criterion5(const std::vector<cfkdv::TableRow>& table1,
                const std::vector<cfkdv::TableRow>& table2) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> coord(0.5, 5.0);
  double worst = 0.0;
  for (const auto& row : table2) {
    for (int i = 0; i < 50; ++i) {
      const double x = coord(rng), t = coord(rng);
      auto [r1, r2] = cfkdv::pde_residual(row.params, x, t);
      worst = std::max({worst, r1, r2});
    }
  }
  // integer-order limit: Table 1 row I.(b) has alpha = beta = 1
  double worst_hs = 0.0;
  const Params& hs = table1[1].params;
  for (int i = 0; i < 50; ++i) {
    const double x = coord(rng), t = coord(rng);
    auto [r1, r2] = cfkdv::pde_residual(hs, x, t);
    worst_hs = std::max({worst_hs, r1, r2});
  }
  std::ostringstream line;
  line << "PDE residuals < 1e-4 at 50 random points per row (worst " << worst
       << "); integer-order limit < 1e-5 (worst " << worst_hs << ")";
  report(5, worst < 1e-4 && worst_hs < 1e-5, line.str());
}

// ---------------------------------------------------------------------------
// Criteria 6 and 7: boundedness tables and morphology.

void criterion67(const std::vector<cfkdv::TableRow>& table1,
                 const std::vector<cfkdv::TableRow>& table2) {
  bool pass6 = true, pass7 = true;
  bool any_three = false;
  std::ostringstream d6, d7;
  std::vector<cfkdv::BoundsReport> reports1;
  for (const auto& row : table1) reports1.push_back(cfkdv::bounds_report(row.params));
  std::vector<cfkdv::BoundsReport> reports2;
  for (const auto& row : table2) reports2.push_back(cfkdv::bounds_report(row.params));

  auto check6 = [&](const cfkdv::TableRow& row, const cfkdv::BoundsReport& rep) {
    if (rep.case_label != row.expected_case || rep.subcase != row.expected_subcase) {
      pass6 = false;
      d6 << " [" << row.id << ": got " << cfkdv::to_string(rep.case_label) << "."
         << cfkdv::to_string(rep.subcase) << "]";
    }
    const bool want_pos = row.expected_case == cfkdv::CaseLabel::III;
    if ((rep.q_sign == cfkdv::QSign::Positive) != want_pos ||
        rep.q_sign == cfkdv::QSign::Mixed) {
      pass6 = false;
      d6 << " [" << row.id << ": Q " << cfkdv::to_string(rep.q_sign) << "]";
    }
    if (!(rep.q_min_abs > 0.0)) {
      pass6 = false;
      d6 << " [" << row.id << ": q_min_abs = 0]";
    }
  };
  for (std::size_t i = 0; i < table1.size(); ++i) check6(table1[i], reports1[i]);
  for (std::size_t i = 0; i < table2.size(); ++i) check6(table2[i], reports2[i]);

  for (std::size_t i = 0; i < table1.size(); ++i) {
    const auto& row = table1[i];
    const auto& rep = reports1[i];
    if (!(rep.humps_U >= 1 && rep.humps_U <= 3)) {
      pass7 = false;
      d7 << " [" << row.id << ": humps_U " << rep.humps_U << "]";
    }
    if (rep.humps_U == 3 && row.expected_case != cfkdv::CaseLabel::III) any_three = true;
    if (!(rep.humps_V >= 1 && rep.humps_V <= 2)) {
      pass7 = false;
      d7 << " [" << row.id << ": humps_V " << rep.humps_V << "]";
    }
    if (!(rep.tails_U.left_ok && rep.tails_U.right_ok && rep.tails_V.left_ok &&
          rep.tails_V.right_ok)) {
      pass7 = false;
      d7 << " [" << row.id << ": tail decay]";
    }
    const double l1 = row.params.lambda1(), l2 = row.params.lambda2();
    const double ru = rep.tails_U.sigma_left / l1, rv = rep.tails_V.sigma_left / l2;
    if (!rep.tails_U.left_saturated && !(ru > 1.0 / 3.0 && ru < 3.0)) {
      pass7 = false;
      d7 << " [" << row.id << ": U left rate ratio " << ru << "]";
    }
    if (!rep.tails_V.left_saturated && !(rv > 1.0 / 3.0 && rv < 3.0)) {
      pass7 = false;
      d7 << " [" << row.id << ": V left rate ratio " << rv << "]";
    }
  }
  if (!any_three) {
    pass7 = false;
    d7 << " [no case-I/II row with humps_U == 3]";
  }
  report(6, pass6, "all 24 rows match their declared sub-case with single-signed Q" + d6.str());
  report(7, pass7,
         "hump counts within ranges and exponential tails at the expected rates" + d7.str());
}

// ---------------------------------------------------------------------------
// Criterion 8: conformable-calculus properties on randomized probes.

void criterion8() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> td(0.5, 4.0);
  std::uniform_real_distribution<double> ad(0.3, 1.0);
  std::uniform_real_distribution<double> pd(-2.0, 2.5);
  std::uniform_real_distribution<double> sd(-1.0, 1.0);
  double worst = 0.0;
  auto update = [&](double got, double expect) {
    worst = std::max(worst, std::abs(got - expect) / std::max(1.0, std::abs(expect)));
  };
  for (int trial = 0; trial < 200; ++trial) {
    const double t = td(rng), alpha = ad(rng);
    const double pw = pd(rng), s = sd(rng), s2 = sd(rng);
    auto f = [&](double x) { return std::pow(x, pw); };
    auto g = [&](double x) { return std::exp(s * x) + 0.5; };
    auto T = [&](auto&& fn) { return cfkdv::conformable_derivative(fn, t, alpha); };
    const double Tf = pw * std::pow(t, pw - alpha);               // power rule
    const double Tg = std::pow(t, 1.0 - alpha) * s * std::exp(s * t);
    update(T(f), Tf);
    update(T(g), Tg);
    // linearity
    auto lin = [&](double x) { return 2.0 * f(x) + s2 * g(x); };
    update(T(lin), 2.0 * Tf + s2 * Tg);
    // product and quotient rules
    auto prod = [&](double x) { return f(x) * g(x); };
    update(T(prod), f(t) * Tg + g(t) * Tf);
    auto quot = [&](double x) { return f(x) / g(x); };
    update(T(quot), (g(t) * Tf - f(t) * Tg) / (g(t) * g(t)));
    // constants vanish
    auto constant = [](double) { return 3.7; };
    update(T(constant), 0.0);
    // agreement with t^{1-alpha} f' for differentiable f
    update(T(f), std::pow(t, 1.0 - alpha) * pw * std::pow(t, pw - 1.0));
    // chain rule: T_alpha(f . g)(t) = f'(g(t)) * T_alpha g(t)
    auto comp = [&](double x) { return std::pow(g(x), pw); };
    update(T(comp), pw * std::pow(g(t), pw - 1.0) * Tg);
  }
  std::ostringstream line;
  line << "conformable properties and chain rule hold to 1e-8 (worst " << worst << ")";
  report(8, worst < 1e-8, line.str());
}

// ---------------------------------------------------------------------------
// Criterion 9: randomized algebra property suite.

void criterion9() {
  std::mt19937_64 rng(31);
  const double l1 = 0.83, l2 = 0.41;
  std::uniform_int_distribution<int> lattice(-3, 3);
  std::uniform_int_distribution<int> count(1, 5);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  auto random_sum = [&]() {
    ExpSum::TermMap terms;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) terms[LatticeKey{lattice(rng), lattice(rng)}] += coeff(rng);
    return ExpSum(l1, l2, std::move(terms));
  };
  auto forward = [&](const ExpSum& f, double lambda) {
    const ExpSum d = f.diff();
    return d.diff().diff().add(d.scale(-lambda * lambda));
  };
  int checks = 0, failures = 0;
  while (checks < 1000) {
    const ExpSum x = random_sum(), y = random_sum(), z = random_sum();
    bool ok = true;
    // ring laws
    ok = ok && x.add(y).max_relative_coeff_diff(y.add(x)) < 1e-13;
    ok = ok && x.mul(y).max_relative_coeff_diff(y.mul(x)) < 1e-13;
    ok = ok && x.mul(y.mul(z)).max_relative_coeff_diff(x.mul(y).mul(z)) < 1e-11;
    ok = ok && x.mul(y.add(z)).max_relative_coeff_diff(x.mul(y).add(x.mul(z))) < 1e-11;
    // derivation law
    ok = ok && x.mul(y).diff().max_relative_coeff_diff(
                   x.diff().mul(y).add(x.mul(y.diff()))) < 1e-11;
    // inverse-operator round trip
    try {
      const ExpSum g = x.apply_inverse_op(l1);
      ok = ok && forward(g, l1).max_relative_coeff_diff(x) < 1e-10;
    } catch (const cfkdv::Error&) {
      // resonant draw: the throw is the correct behavior, counts as a pass
    }
    if (!ok) ++failures;
    ++checks;
  }
  std::ostringstream line;
  line << "1000 randomized ring/derivation/round-trip checks (" << failures << " failures)";
  report(9, failures == 0, line.str());
}

}  // namespace

int main() {
  const auto table1 = load_or_bundled("table1.csv", cfkdv::table1());
  const auto table2 = load_or_bundled("table2.csv", cfkdv::table2());
  criterion1(table1);
  criterion2(table1);
  criterion3(table1);
  criterion4(table1);
  criterion5(table1, table2);
  criterion67(table1, table2);
  criterion8();
  criterion9();
  if (g_failures > 0) {
    std::cout << g_failures << " criteria failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
