// Command-line harness: series iteration with convergence tables, residual
// verification suites, boundedness-table checks, and figure-data emission.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfkdv/bounds.hpp"
#include "cfkdv/closed_form.hpp"
#include "cfkdv/error.hpp"
#include "cfkdv/params.hpp"
#include "cfkdv/rcam.hpp"
#include "cfkdv/tables.hpp"
#include "cfkdv/wave.hpp"

namespace {

using nlohmann::json;

int exit_code_for(cfkdv::ErrorKind kind) {
  switch (kind) {
    case cfkdv::ErrorKind::Input:
    case cfkdv::ErrorKind::InvalidParam:
    case cfkdv::ErrorKind::DistinctRootsViolation:
      return 3;
    case cfkdv::ErrorKind::Range:
    case cfkdv::ErrorKind::VanishingQ:
    case cfkdv::ErrorKind::Resonance:
      return 4;
    default:
      return 3;
  }
}

[[noreturn]] void fail(const cfkdv::Error& e) {
  json err = {{"error", {{"kind", e.kind_name()}, {"message", e.what()}}}};
  std::cerr << err.dump() << '\n';
  std::exit(exit_code_for(e.kind()));
}

/// Write text to path atomically (temp file + rename).
void write_file(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw cfkdv::Error(cfkdv::ErrorKind::Input, "cannot open output file " + path);
    os << text;
  }
  fs::rename(tmp, target);
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-")
    std::cout << text;
  else
    write_file(out_path, text);
}

std::vector<cfkdv::TableRow> load_table(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw cfkdv::Error(cfkdv::ErrorKind::Input, "cannot open table file " + path);
  return cfkdv::read_table_csv(is);
}

cfkdv::Params load_params(const std::string& params_file, const std::string& table_file,
                          int row) {
  if (!params_file.empty()) {
    std::ifstream is(params_file, std::ios::binary);
    if (!is)
      throw cfkdv::Error(cfkdv::ErrorKind::Input, "cannot open params file " + params_file);
    json j;
    try {
      is >> j;
    } catch (const json::exception& e) {
      throw cfkdv::Error(cfkdv::ErrorKind::Input,
                         "params file " + params_file + ": " + e.what());
    }
    return cfkdv::Params::from_json(j);
  }
  if (!table_file.empty()) {
    auto rows = load_table(table_file);
    if (row < 1 || std::size_t(row) > rows.size())
      throw cfkdv::Error(cfkdv::ErrorKind::Input,
                         "row " + std::to_string(row) + " out of range for " + table_file);
    return rows[std::size_t(row) - 1].params;
  }
  throw cfkdv::Error(cfkdv::ErrorKind::Input, "need --params-file or --table with --row");
}

int cmd_iterate(const std::string& params_file, const std::string& table_file, int row,
                unsigned N, const std::string& out_path) {
  const cfkdv::Params p = load_params(params_file, table_file, row);
  const cfkdv::SeriesState state = cfkdv::iterate(p, N);

  // Convergence table: per order, worst relative deviation from the closed
  // form over 5 probe points inside the convergence region.
  const double lmin = std::min(p.lambda1(), p.lambda2());
  const double xi_top = cfkdv::xi_at_rho(p, 1e-4);
  std::vector<double> probes;
  for (int i = 0; i < 5; ++i) probes.push_back(xi_top - 2.0 * i / lmin);
  json table = json::array();
  for (std::size_t n = 0; n < state.corrections.size(); ++n) {
    double worst = 0.0;
    for (double xi : probes) {
      auto [su, sv] = cfkdv::partial_sum(state, n, xi);
      const double u = cfkdv::eval_U(p, xi), v = cfkdv::eval_V(p, xi);
      if (u != 0.0) worst = std::max(worst, std::abs(su - u) / std::abs(u));
      if (v != 0.0) worst = std::max(worst, std::abs(sv - v) / std::abs(v));
    }
    table.push_back({{"order", n}, {"error", worst}});
  }
  json out = {{"series", state.to_json()},
              {"probes", probes},
              {"convergence", table},
              {"defaults", {{"probe_rho", 1e-4}, {"probe_spacing", 2.0 / lmin}}}};
  emit(out_path, out.dump(2) + "\n");
  return 0;
}

int cmd_verify(const std::string& mode, const std::string& table_file, unsigned samples,
               double tol, std::uint64_t seed, double lambda2_scale,
               const std::string& out_path) {
  if (mode != "ode" && mode != "pde")
    throw cfkdv::Error(cfkdv::ErrorKind::Input, "--mode must be ode or pde");
  if (tol <= 0.0) tol = mode == "ode" ? 1e-6 : 1e-4;
  const auto rows = load_table(table_file);
  json report = json::array();
  bool all_pass = true;
  for (const cfkdv::TableRow& r : rows) {
    double worst = 0.0, worst_at[2] = {0.0, 0.0};
    if (mode == "ode") {
      for (unsigned i = 0; i < samples; ++i) {
        const double xi = -40.0 + 80.0 * double(i) / double(samples - 1);
        auto [r1, r2] = cfkdv::ode_residual(r.params, xi, lambda2_scale);
        if (std::max(r1, r2) > worst) {
          worst = std::max(r1, r2);
          worst_at[0] = xi;
        }
      }
    } else {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> coord(0.5, 5.0);
      for (unsigned i = 0; i < samples; ++i) {
        const double x = coord(rng), t = coord(rng);
        auto [r1, r2] = cfkdv::pde_residual(r.params, x, t);
        if (std::max(r1, r2) > worst) {
          worst = std::max(r1, r2);
          worst_at[0] = x;
          worst_at[1] = t;
        }
      }
    }
    const bool pass = worst < tol;
    all_pass = all_pass && pass;
    json entry = {{"row", r.id}, {"worst_residual", worst}, {"pass", pass}};
    if (mode == "ode")
      entry["worst_at"] = {{"xi", worst_at[0]}};
    else
      entry["worst_at"] = {{"x", worst_at[0]}, {"t", worst_at[1]}};
    report.push_back(entry);
  }
  json out = {{"mode", mode},
              {"tolerance", tol},
              {"samples", samples},
              {"seed", seed},
              {"lambda2_scale", lambda2_scale},
              {"rows", report},
              {"pass", all_pass}};
  emit(out_path, out.dump(2) + "\n");
  return all_pass ? 0 : 2;
}

int cmd_bounds(const std::string& table_file, bool theorem2, const std::string& out_path) {
  const auto rows = load_table(table_file);
  json report = json::array();
  bool all_match = true;
  cfkdv::BoundsOptions opts;
  opts.theorem2 = theorem2;
  for (const cfkdv::TableRow& r : rows) {
    const cfkdv::BoundsReport rep = cfkdv::bounds_report(r.params, opts);
    const bool match =
        rep.case_label == r.expected_case && rep.subcase == r.expected_subcase;
    all_match = all_match && match;
    json entry = rep.to_json();
    entry["row"] = r.id;
    entry["expected_subcase"] = cfkdv::to_string(r.expected_subcase);
    entry["match"] = match;
    report.push_back(entry);
  }
  json out = {{"rows", report},
              {"pass", all_match},
              {"defaults",
               {{"prominence", opts.prominence},
                {"tail_L", opts.tail_L},
                {"scan_halfwidth", opts.scan_halfwidth},
                {"scan_samples", opts.scan_samples}}}};
  if (rows.empty()) out["warning"] = "empty table: nothing checked";
  emit(out_path, out.dump(2) + "\n");
  return all_match ? 0 : 2;
}

int cmd_figures(const std::string& table_file, const std::string& mode,
                const std::string& out_dir) {
  if (mode != "profile" && mode != "surface")
    throw cfkdv::Error(cfkdv::ErrorKind::Input, "--mode must be profile or surface");
  const auto rows = load_table(table_file);
  json summary = json::array();
  bool any_fail = false;
  for (const cfkdv::TableRow& r : rows) {
    const std::string name =
        (mode == "profile" ? "profile_" : "surface_") + r.id + ".csv";
    const std::string path = out_dir.empty() ? name : out_dir + "/" + name;
    try {
      std::ostringstream os;
      if (mode == "profile") {
        const double peak = cfkdv::locate_peak(r.params);
        const double w = 80.0 / r.params.lambda2();
        cfkdv::sample_profile(r.params, peak - w, peak + w, 2001).write_csv(os);
      } else {
        cfkdv::WaveGridSpec grid{0.5, 5.0, 0.5, 5.0, 61, 61};
        cfkdv::surface(r.params, grid).write_csv(os);
      }
      write_file(path, os.str());
      summary.push_back({{"row", r.id}, {"file", path}, {"ok", true}});
    } catch (const cfkdv::Error& e) {
      any_fail = true;
      summary.push_back({{"row", r.id},
                         {"ok", false},
                         {"error", {{"kind", e.kind_name()}, {"message", e.what()}}}});
    }
  }
  std::cout << json{{"mode", mode}, {"rows", summary}, {"pass", !any_fail}}.dump(2) << '\n';
  return any_fail ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled conformable KdV traveling-wave toolkit"};
  app.require_subcommand(1);

  std::string params_file, table_file, out_path, out_dir, mode;
  int row = 1;
  unsigned N = 3, samples = 50;
  double tol = 0.0, lambda2_scale = 1.0;
  std::uint64_t seed = 12345;
  bool theorem2 = false;

  auto* it = app.add_subcommand("iterate", "run the series iteration");
  it->add_option("--params-file", params_file, "Params JSON file");
  it->add_option("--table", table_file, "parameter table CSV");
  it->add_option("--row", row, "1-based row in --table");
  it->add_option("-N,--orders", N, "number of correction orders");
  it->add_option("--out", out_path, "output path (default stdout)");

  auto* vf = app.add_subcommand("verify", "run residual verification suites");
  vf->add_option("--mode", mode, "ode or pde")->required();
  vf->add_option("--table", table_file, "parameter table CSV")->required();
  vf->add_option("--samples", samples, "samples per row");
  vf->add_option("--tolerance", tol, "override residual tolerance");
  vf->add_option("--seed", seed, "RNG seed for pde sample points");
  vf->add_option("--lambda2-scale", lambda2_scale,
                 "fault injection: detune lambda2 in the ode residual operator");
  vf->add_option("--out", out_path, "output path (default stdout)");

  auto* bd = app.add_subcommand("bounds", "check boundedness tables");
  bd->add_option("--table", table_file, "parameter table CSV")->required();
  bd->add_flag("--theorem2", theorem2, "also require the sign of c opposite to k");
  bd->add_option("--out", out_path, "output path (default stdout)");

  auto* fg = app.add_subcommand("figures", "emit figure-reproduction data");
  fg->add_option("--mode", mode, "profile or surface")->required();
  fg->add_option("--table", table_file, "parameter table CSV")->required();
  fg->add_option("--out-dir", out_dir, "directory for per-row CSV files");

  CLI11_PARSE(app, argc, argv);

  try {
    if (it->parsed()) return cmd_iterate(params_file, table_file, row, N, out_path);
    if (vf->parsed())
      return cmd_verify(mode, table_file, samples, tol, seed, lambda2_scale, out_path);
    if (bd->parsed()) return cmd_bounds(table_file, theorem2, out_path);
    if (fg->parsed()) return cmd_figures(table_file, mode, out_dir);
  } catch (const cfkdv::Error& e) {
    fail(e);
  } catch (const std::exception& e) {
    json err = {{"error", {{"kind", "internal"}, {"message", e.what()}}}};
    std::cerr << err.dump() << '\n';
    return 3;
  }
  return 0;
}
