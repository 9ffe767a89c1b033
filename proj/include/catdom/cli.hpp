#pragma once

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "catdom/cone.hpp"
#include "catdom/dominance.hpp"
#include "catdom/io.hpp"
#include "catdom/ldp.hpp"
#include "catdom/measure.hpp"
#include "catdom/spectrum.hpp"
#include "catdom/stochorder.hpp"

namespace catdom::cli {

using catdom::to_string;

inline constexpr const char* kToolVersion = "0.1.0";

enum class Command { OrderCheck, Spectrum, Dominate, MinN, Catalyst, RateFn, RelRate, Cramer };

inline const char* to_string(Command c) {
  switch (c) {
    case Command::OrderCheck: return "order-check";
    case Command::Spectrum: return "spectrum";
    case Command::Dominate: return "dominate";
    case Command::MinN: return "min-n";
    case Command::Catalyst: return "catalyst";
    case Command::RateFn: return "rate-fn";
    case Command::RelRate: return "rel-rate";
    case Command::Cramer: return "cramer";
  }
  return "?";
}

/// Exit codes: definitive answer, input or budget error, epistemic outcome.
enum ExitCode : int { kDefinitive = 0, kError = 1, kUnknown = 2 };

struct RunConfig {
  Command command = Command::Dominate;
  std::vector<std::string> inputs;
  std::string cone;  // "halfline", "orthant", path, or empty for the default
  bool normalize = false;

  unsigned long n_max = 64;
  unsigned long n = 1024;
  std::vector<unsigned long> n_list{8, 16, 32, 64};
  std::string eps = "1/64";
  std::string c;
  std::string grid_step;  // empty: coarsest lattice step of the joint support
  std::size_t grid_points = 32;
  std::size_t cap = kDefaultAtomCap;

  std::uint64_t seed = 0;
  std::size_t samples = 32;
  std::size_t theta_points = 257;
  double margin_tol = 1e-9;
  double refine_tol = 1e-12;
  std::size_t workers = 1;

  std::string json_out;  // "-" for stdout
  std::string csv_out;
  std::string plot_out;
};

namespace detail {

using nlohmann::json;

inline json ext_real(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline json rational_json(const Rational& q) { return to_string(q); }

inline json point_json(const Point& p) {
  json a = json::array();
  for (const auto& c : p.coords()) a.push_back(to_string(c));
  return a;
}

inline json spectrum_point_json(const SpectrumPoint& sp) {
  return {{"direction", point_json(sp.direction.t)}, {"radial", ext_real(sp.radial)}};
}

inline std::string fmt(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

struct Inputs {
  std::vector<Measure> measures;
  Cone cone;
};

inline Inputs load(const RunConfig& cfg, std::size_t count) {
  if (cfg.inputs.size() != count)
    throw InvalidArgument(std::string(to_string(cfg.command)) + " expects " + std::to_string(count) +
                          " measure file(s)");
  std::vector<Measure> ms;
  for (const auto& path : cfg.inputs) {
    try {
      ms.push_back(io::parse_measure(io::read_file(path), cfg.normalize));
    } catch (const ParseError& e) {
      throw ParseError(path + ": " + e.what());
    }
  }
  for (const auto& m : ms) m.require_dim(ms.front().dim());
  Cone cone = io::resolve_cone(cfg.cone, ms.front().dim());
  return {std::move(ms), std::move(cone)};
}

inline SpectrumOptions spectrum_options(const RunConfig& cfg) {
  SpectrumOptions o;
  o.grid_points = cfg.theta_points;
  o.margin_tol = cfg.margin_tol;
  o.refine_tol = cfg.refine_tol;
  o.n_samples = cfg.samples;
  o.seed = cfg.seed;
  o.workers = cfg.workers;
  return o;
}

inline RateOptions rate_options(const RunConfig& cfg) {
  RateOptions o;
  o.grid_points = cfg.theta_points;
  o.refine_tol = cfg.refine_tol;
  o.n_samples = cfg.samples;
  o.seed = cfg.seed;
  o.workers = cfg.workers;
  return o;
}

inline json verdict_json(const OrderVerdict& v) {
  json out{{"dominated", v.dominated}};
  if (v.coupling) {
    json plan = json::array();
    for (const auto& [xy, w] : v.coupling->entries)
      plan.push_back({{"x", point_json(xy.first)}, {"y", point_json(xy.second)}, {"w", to_string(w)}});
    out["coupling"] = plan;
  }
  if (v.upset) {
    json gens = json::array();
    for (const auto& g : *v.upset) gens.push_back(point_json(g));
    out["violating_upset"] = gens;
  }
  return out;
}

inline json report_json(const SpectralReport& rep) {
  json rays = json::array();
  for (const auto& r : rep.rays)
    rays.push_back({{"direction", point_json(r.direction.t)},
                    {"verdict", to_string(r.verdict)},
                    {"min_margin", ext_real(r.min_margin)},
                    {"argmin_radial", ext_real(r.argmin_radial)},
                    {"margin_min_tropical", to_string(r.margin_min_tropical)},
                    {"margin_arctic", to_string(r.margin_arctic)},
                    {"margin_max_tropical", to_string(r.margin_max_tropical)}});
  json wit = json::array();
  for (const auto& w : rep.witnesses) wit.push_back(spectrum_point_json(w));
  return {{"verdict", to_string(rep.verdict)},
          {"sampled_only", rep.sampled_only},
          {"rays", rays},
          {"witnesses", wit}};
}

inline json rate_json(const RateResult& r) {
  json out{{"value", ext_real(r.value)}, {"certified", to_string(r.certified)}};
  if (r.maximizer) out["maximizer"] = spectrum_point_json(*r.maximizer);
  return out;
}

inline std::string spectrum_csv(const SpectralReport& rep) {
  std::string s = "ray,theta,radial,lev_x,lev_y,margin\n";
  for (std::size_t i = 0; i < rep.rays.size(); ++i)
    for (const auto& smp : rep.rays[i].samples)
      s += std::to_string(i) + "," + fmt(smp.theta) + "," + fmt(smp.radial) + "," + fmt(smp.lev_x) +
           "," + fmt(smp.lev_y) + "," + fmt(smp.margin()) + "\n";
  return s;
}

inline std::string gnuplot_script(const std::string& csv, const std::string& title,
                                  const std::string& using_cols, const std::string& xlabel,
                                  const std::string& ylabel) {
  return "# gnuplot script; run: gnuplot -p <this file>\n"
         "set datafile separator ','\n"
         "set key autotitle columnhead\n"
         "set title '" + title + "'\n"
         "set xlabel '" + xlabel + "'\nset ylabel '" + ylabel + "'\n"
         "plot '" + csv + "' using " + using_cols + " with lines\n";
}

}  // namespace detail

/// Executes one command. The machine-readable report goes to --json (or to
/// `out` when it is "-"); otherwise a short human summary is written to `out`.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  using detail::json;
  json report{{"tool", "catdom"},
              {"version", kToolVersion},
              {"command", to_string(cfg.command)},
              {"seed", cfg.seed}};
  std::string summary;
  std::string csv;
  std::string plot;
  int status = kDefinitive;

  try {
    switch (cfg.command) {
      case Command::OrderCheck: {
        auto in = detail::load(cfg, 2);
        auto v = order_check(in.measures[0], in.measures[1], in.cone);
        report["result"] = detail::verdict_json(v);
        summary = v.dominated ? "X <= Y: dominated (coupling found)\n"
                              : "X <= Y: not dominated (violating upset found)\n";
        break;
      }
      case Command::Spectrum:
      case Command::Dominate: {
        auto in = detail::load(cfg, 2);
        const Measure& x = in.measures[0];
        const Measure& y = in.measures[1];
        auto rep = spectral_verdict(x, y, in.cone, detail::spectrum_options(cfg));
        report["result"] = detail::report_json(rep);
        report["samples"] = cfg.samples;
        if (cfg.command == Command::Dominate) {
          auto direct = order_check(x, y, in.cone);
          report["result"]["direct_order"] = direct.dominated;
          std::string conclusion;
          switch (rep.verdict) {
            case SpectralVerdict::Strict:
              conclusion = rep.sampled_only
                               ? "strict on all sampled directions: catalytic and asymptotic dominance expected"
                               : "strict: catalytic and asymptotic dominance hold for all large n";
              break;
            case SpectralVerdict::Violated:
              conclusion = "violated: no catalyst and no n with X^n <= Y^n";
              break;
            case SpectralVerdict::NonStrictOnly:
              conclusion = "non-strict only: undecided by the spectral test";
              break;
            case SpectralVerdict::Inconclusive:
              conclusion = "inconclusive within tolerance";
              break;
          }
          report["result"]["conclusion"] = conclusion;
        }
        summary = std::string("spectral verdict: ") + to_string(rep.verdict) + "\n";
        for (std::size_t i = 0; i < rep.rays.size(); ++i)
          summary += "  ray " + std::to_string(i) + " " + to_string(rep.rays[i].direction.t) + ": " +
                     to_string(rep.rays[i].verdict) + ", min margin " +
                     detail::fmt(rep.rays[i].min_margin) + "\n";
        if (!cfg.csv_out.empty()) csv = detail::spectrum_csv(rep);
        if (!cfg.plot_out.empty())
          plot = detail::gnuplot_script(cfg.csv_out, "lev margin", "2:6", "theta", "lev_y - lev_x");
        if (rep.verdict == SpectralVerdict::Inconclusive) status = kUnknown;
        break;
      }
      case Command::MinN: {
        auto in = detail::load(cfg, 2);
        auto res = min_n(in.measures[0], in.measures[1], in.cone, cfg.n_max, cfg.cap, cfg.workers);
        json failures = json::array();
        for (const auto& f : res.failures) {
          json gens = json::array();
          for (const auto& g : f.upset) gens.push_back(detail::point_json(g));
          failures.push_back({{"n", f.n}, {"violating_upset", gens}});
        }
        report["result"] = {{"found", res.found},
                            {"n0", res.n0 ? json(*res.n0) : json(nullptr)},
                            {"stable_through", res.stable_through},
                            {"failures", failures}};
        summary = res.found ? "X^n <= Y^n for all n in [" + std::to_string(*res.n0) + ", " +
                                  std::to_string(res.stable_through) + "]\n"
                            : "no stable n0 up to " + std::to_string(cfg.n_max) + "\n";
        if (!cfg.csv_out.empty()) {
          csv = "n,dominated\n";
          std::size_t fi = 0;
          for (unsigned long n = 1; n <= cfg.n_max; ++n) {
            bool failed = fi < res.failures.size() && res.failures[fi].n == n;
            if (failed) ++fi;
            csv += std::to_string(n) + "," + (failed ? "0" : "1") + "\n";
          }
        }
        if (!res.found) status = kUnknown;
        break;
      }
      case Command::Catalyst: {
        auto in = detail::load(cfg, 2);
        const Measure& x = in.measures[0];
        const Measure& y = in.measures[1];
        Rational step;
        if (cfg.grid_step.empty()) {
          std::vector<Rational> coords;
          for (const auto& p : x.support()) coords.push_back(p[0]);
          for (const auto& p : y.support()) coords.push_back(p[0]);
          step = coarsest_lattice_step(coords);
        } else {
          step = parse_rational(cfg.grid_step);
          if (sgn(step) <= 0) throw InvalidArgument("--grid-step must be positive");
        }
        auto grid = lattice_grid(step, cfg.grid_points);
        auto cat = catalyst_1d(x, y, grid);
        report["grid"] = {{"step", to_string(step)}, {"points", cfg.grid_points}};
        if (cat) {
          json atoms = json::array();
          for (const auto& [p, w] : cat->z.atoms())
            atoms.push_back({{"x", detail::point_json(p)}, {"w", to_string(w)}});
          report["result"] = {{"found", true}, {"verified", cat->verified}, {"catalyst", atoms}};
          summary = std::string("catalyst found on grid, exact re-check: ") +
                    (cat->verified ? "verified" : "FAILED") + "\n";
          if (!cfg.csv_out.empty()) {
            csv = "x,w\n";
            for (const auto& [p, w] : cat->z.atoms()) csv += to_string(p[0]) + "," + to_string(w) + "\n";
          }
        } else {
          report["result"] = {{"found", false}};
          summary = "no catalyst on this grid\n";
          status = kUnknown;
        }
        break;
      }
      case Command::RateFn: {
        auto in = detail::load(cfg, 1);
        if (cfg.c.empty()) throw InvalidArgument("rate-fn needs --c");
        Point c = io::parse_point_arg(cfg.c, in.measures[0].dim());
        auto r = rate_function(in.measures[0], c, in.cone, detail::rate_options(cfg));
        report["c"] = detail::point_json(c);
        report["result"] = detail::rate_json(r);
        summary = "rate function at " + to_string(c) + ": " + detail::fmt(r.value) + " (" +
                  to_string(r.certified) + ")\n";
        break;
      }
      case Command::RelRate: {
        auto in = detail::load(cfg, 2);
        const Measure& x = in.measures[0];
        const Measure& y = in.measures[1];
        Rational eps = parse_rational(cfg.eps);
        auto rhs = relative_rate_rhs(x, y, in.cone, detail::rate_options(cfg));
        auto rows = parallel_map(cfg.n_list.size(), cfg.workers, [&](std::size_t i) {
          return relative_rate_lhs(x, y, in.cone, cfg.n_list[i], eps, cfg.cap);
        });
        json table = json::array();
        csv = "n,eps,lhs,rhs,exact\n";
        summary = "rhs (sup over dual cone): " + detail::fmt(rhs.value) + "\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
          table.push_back({{"n", cfg.n_list[i]},
                           {"eps", to_string(eps)},
                           {"lhs", detail::ext_real(rows[i].value)},
                           {"exact", rows[i].exact}});
          csv += std::to_string(cfg.n_list[i]) + "," + to_string(eps) + "," +
                 detail::fmt(rows[i].value) + "," + detail::fmt(rhs.value) + "," +
                 (rows[i].exact ? "1" : "0") + "\n";
          summary += "  n = " + std::to_string(cfg.n_list[i]) + ": lhs " + detail::fmt(rows[i].value) +
                     (rows[i].exact ? "" : " (lower bound)") + "\n";
        }
        report["result"] = {{"rhs", detail::rate_json(rhs)}, {"lhs_table", table}};
        if (cfg.csv_out.empty()) csv.clear();
        if (!cfg.plot_out.empty())
          plot = detail::gnuplot_script(cfg.csv_out, "relative decay rate", "1:3", "n", "lhs");
        break;
      }
      case Command::Cramer: {
        auto in = detail::load(cfg, 1);
        if (cfg.c.empty()) throw InvalidArgument("cramer needs --c");
        Point c = io::parse_point_arg(cfg.c, in.measures[0].dim());
        double emp = cramer_empirical(in.measures[0], c, in.cone, cfg.n, cfg.cap);
        auto rate = rate_function(in.measures[0], c, in.cone, detail::rate_options(cfg));
        report["c"] = detail::point_json(c);
        report["result"] = {{"n", cfg.n},
                            {"empirical", detail::ext_real(emp)},
                            {"rate_function", detail::rate_json(rate)}};
        summary = "(1/n) log P(sum >= n c) = " + detail::fmt(emp) + ", -rate = " +
                  detail::fmt(-rate.value) + "\n";
        break;
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }

  report["exit_status"] = status;
  std::string text = report.dump(2) + "\n";
  try {
    if (cfg.json_out == "-")
      out << text;
    else {
      if (!cfg.json_out.empty()) io::write_file(cfg.json_out, text);
      out << summary;
    }
    if (!cfg.csv_out.empty() && !csv.empty()) io::write_file(cfg.csv_out, csv);
    if (!cfg.plot_out.empty() && !plot.empty()) io::write_file(cfg.plot_out, plot);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  return status;
}

}  // namespace catdom::cli
