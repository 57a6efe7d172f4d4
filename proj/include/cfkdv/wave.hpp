#pragma once

// Conformable derivative, the traveling-wave map xi(x, t), sampled solution
// surfaces u(x, t), v(x, t), and residuals of the original PDE system.

#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

#include "cfkdv/closed_form.hpp"
#include "cfkdv/error.hpp"
#include "cfkdv/fd.hpp"
#include "cfkdv/params.hpp"

namespace cfkdv {

struct WaveGridSpec {
  double x_min = 0.0, x_max = 0.0;
  double t_min = 0.0, t_max = 0.0;
  std::size_t nx = 0, nt = 0;

  const WaveGridSpec& validate() const {
    if (!(x_min > 0.0 && t_min > 0.0))
      throw Error(ErrorKind::InvalidParam, "grid must stay in x > 0, t > 0");
    if (!(x_max > x_min && t_max > t_min))
      throw Error(ErrorKind::InvalidParam, "grid extents must be increasing");
    if (nx < 2 || nt < 2)
      throw Error(ErrorKind::InvalidParam, "grid needs at least 2 points per axis");
    return *this;
  }
};

/// 1D profile sample: (xi, U(xi), V(xi)) triples.
struct ProfileSample {
  std::vector<double> xi, U, V;

  void write_csv(std::ostream& os) const {
    os.precision(17);
    os << "xi,U,V\n";
    for (std::size_t i = 0; i < xi.size(); ++i)
      os << xi[i] << ',' << U[i] << ',' << V[i] << '\n';
  }
};

/// Row-major surface sample over a (x, t) grid.
struct SurfaceSample {
  std::vector<double> x, t;  // axis coordinates, sizes nx and nt
  std::vector<double> u, v;  // nt rows by nx columns

  void write_csv(std::ostream& os) const {
    os.precision(17);
    os << "x,t,u,v\n";
    for (std::size_t j = 0; j < t.size(); ++j)
      for (std::size_t i = 0; i < x.size(); ++i)
        os << x[i] << ',' << t[j] << ',' << u[j * x.size() + i] << ',' << v[j * x.size() + i]
           << '\n';
  }
};

/// xi = (k/alpha) x^alpha + (c/beta) t^beta + xi0.
inline double xi_of(const Params& p, double x, double t) {
  if (!(x > 0.0 && t > 0.0))
    throw Error(ErrorKind::InvalidParam, "traveling-wave map requires x > 0 and t > 0");
  return p.k / p.alpha * std::pow(x, p.alpha) + p.c / p.beta * std::pow(t, p.beta) + p.xi0;
}

/// Conformable derivative of order alpha at t > 0: t^(1-alpha) f'(t), the
/// derivative by the standard central stencil. The step shrinks near the
/// domain boundary so the stencil stays in t > 0.
inline double conformable_derivative(const std::function<double(double)>& f, double t,
                                     double alpha, double h = 0.0) {
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidParam, "conformable derivative requires t > 0");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw Error(ErrorKind::InvalidParam, "alpha must lie in (0, 1]");
  if (h <= 0.0) h = 1e-3 * std::max(1.0, std::abs(t));
  // 9-point stencil with halving reaches 8h/2... keep 8h inside (0, inf).
  h = std::min(h, t / 16.0);
  return std::pow(t, 1.0 - alpha) * fd::d1(f, t, h);
}

/// Samples u(x,t) = U(xi(x,t)), v(x,t) = V(xi(x,t)) over the grid.
inline SurfaceSample surface(const Params& p, const WaveGridSpec& grid) {
  grid.validate();
  SurfaceSample s;
  s.x.resize(grid.nx);
  s.t.resize(grid.nt);
  for (std::size_t i = 0; i < grid.nx; ++i)
    s.x[i] = grid.x_min + (grid.x_max - grid.x_min) * double(i) / double(grid.nx - 1);
  for (std::size_t j = 0; j < grid.nt; ++j)
    s.t[j] = grid.t_min + (grid.t_max - grid.t_min) * double(j) / double(grid.nt - 1);
  s.u.resize(grid.nx * grid.nt);
  s.v.resize(grid.nx * grid.nt);
  for (std::size_t j = 0; j < grid.nt; ++j)
    for (std::size_t i = 0; i < grid.nx; ++i) {
      try {
        auto [u, v] = eval_generating(p, xi_of(p, s.x[i], s.t[j]), 1.0);
        s.u[j * grid.nx + i] = u;
        s.v[j * grid.nx + i] = v;
      } catch (const Error& e) {
        std::ostringstream msg;
        msg << "at grid point (x = " << s.x[i] << ", t = " << s.t[j] << "): " << e.what();
        throw Error(e.kind(), msg.str());
      }
    }
  return s;
}

namespace detail {

/// Nested conformable x-derivatives: the third conformable derivative is
/// T_alpha applied three times, which collapses to k^3 U''' under the
/// traveling-wave map.
template <typename F>
double conformable_d1_x(F&& f, double x, double alpha, double h) {
  return std::pow(x, 1.0 - alpha) * fd::apply(f, x, fd::kD1Order8, 1, h);
}

}  // namespace detail

/// Left-hand sides of both conformable PDEs at (x, t), normalized by the
/// largest absolute term of each equation.
inline std::pair<double, double> pde_residual(const Params& p, double x, double t) {
  if (!(x > 0.0 && t > 0.0))
    throw Error(ErrorKind::InvalidParam, "pde_residual requires x > 0 and t > 0");
  const double l1 = p.lambda1(), l2 = p.lambda2();
  const double rate = l1 + 4.0 * l2;

  // Steps follow the local exponential rate of xi along each axis; the x
  // step also keeps the triply nested 9-point stencil inside x > 0.
  const double hx = std::min(0.5 / (3.0 * rate * std::abs(p.k) * std::pow(x, p.alpha - 1.0)),
                             x / 30.0);
  const double ht = std::min(0.5 / (rate * std::abs(p.c) * std::pow(t, p.beta - 1.0)),
                             t / 20.0);

  auto u_at = [&](double xx, double tt) { return eval_U(p, xi_of(p, xx, tt)); };
  auto v_at = [&](double xx, double tt) { return eval_V(p, xi_of(p, xx, tt)); };

  auto ux = [&](double xx) { return u_at(xx, t); };
  auto vx = [&](double xx) { return v_at(xx, t); };
  auto ut = [&](double tt) { return u_at(x, tt); };
  auto vt = [&](double tt) { return v_at(x, tt); };

  auto Tu1 = [&](double xx) { return detail::conformable_d1_x(ux, xx, p.alpha, hx); };
  auto Tu2 = [&](double xx) { return detail::conformable_d1_x(Tu1, xx, p.alpha, hx); };
  auto Tv1 = [&](double xx) { return detail::conformable_d1_x(vx, xx, p.alpha, hx); };
  auto Tv2 = [&](double xx) { return detail::conformable_d1_x(Tv1, xx, p.alpha, hx); };

  const double u = u_at(x, t), v = v_at(x, t);
  const double u_a = Tu1(x);
  const double u_a3 = detail::conformable_d1_x(Tu2, x, p.alpha, hx);
  const double v_a = Tv1(x);
  const double v_a3 = detail::conformable_d1_x(Tv2, x, p.alpha, hx);
  const double u_b = std::pow(t, 1.0 - p.beta) * fd::apply(ut, t, fd::kD1Order8, 1, ht);
  const double v_b = std::pow(t, 1.0 - p.beta) * fd::apply(vt, t, fd::kD1Order8, 1, ht);

  const double t1[] = {u_b, 6.0 * p.a * u * u_a, -2.0 * p.b * v * v_a, p.a * u_a3};
  const double t2[] = {v_b, 3.0 * u * v_a, v_a3};
  auto normalized = [](const double* terms, int n) {
    double sum = 0.0, mx = 0.0;
    for (int i = 0; i < n; ++i) {
      sum += terms[i];
      mx = std::max(mx, std::abs(terms[i]));
    }
    return mx > 0.0 ? std::abs(sum) / mx : 0.0;
  };
  return {normalized(t1, 4), normalized(t2, 3)};
}

}  // namespace cfkdv
