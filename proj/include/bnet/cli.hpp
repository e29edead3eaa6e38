#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bnet/classify.hpp"
#include "bnet/excursion.hpp"
#include "bnet/invariants.hpp"
#include "bnet/lattice.hpp"
#include "bnet/parallel.hpp"
#include "bnet/paths.hpp"
#include "bnet/report.hpp"
#include "bnet/sde.hpp"
#include "bnet/stats.hpp"

// Experiment harness. Every run is a pure function of its flags: fixed
// seeds, per-replicate streams split by hashing, slot-ordered reduction.
// Exit codes: 0 ok, 1 failed --check threshold, 2 usage error,
// 3 capacity error.

namespace bnet::cli {

using nlohmann::json;

namespace detail {

inline std::ostream& out_stream(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  return file;
}

inline json report_json(const json& config_echo, const stats::EstimateReport& r,
                        std::uint64_t seed) {
  json j;
  j["config_echo"] = config_echo;
  j["estimate"] = r.estimate;
  j["stderr"] = r.stderr_;
  j["n"] = r.n;
  j["seed"] = seed;
  if (r.reference) j["reference"] = *r.reference;
  else j["reference"] = nullptr;
  if (r.ratio) j["ratio"] = *r.ratio;
  if (r.tainted) j["tainted"] = true;
  return j;
}

// epsilon = 0 runs the pure-coalescence limit; masks never branch
inline double effective_epsilon(double eps) {
  return eps == 0.0 ? 1e-300 : eps;
}

// JSON config file whose keys mirror long flag names; command-line
// flags override file values.
inline std::vector<std::string> splice_config(std::vector<std::string> args) {
  std::string config_path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config") {
      config_path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
  }
  if (config_path.empty()) return args;
  std::ifstream f(config_path);
  if (!f) throw CLI::ValidationError("--config", "cannot open " + config_path);
  json j;
  f >> j;
  if (args.empty()) return args;
  std::vector<std::string> merged;
  merged.push_back(args[0]);  // subcommand
  for (const auto& [key, value] : j.items()) {
    merged.push_back("--" + key);
    if (value.is_string()) merged.push_back(value.get<std::string>());
    else merged.push_back(value.dump());
  }
  merged.insert(merged.end(), args.begin() + 1, args.end());
  return merged;
}

}  // namespace detail

struct RunConfig {
  double epsilon = 0.05;
  long long x_lo = -20, x_hi = 20, t_lo = 0, t_hi = 20;
  std::uint64_t seed = 1;
  std::size_t reps = 100;
  double dt = 1e-4;
  double horizon = 1.0;
  std::string out;
  std::string format = "json";
  bool check = false;
};

namespace cmd {

inline int sample(const RunConfig& rc) {
  lattice::LatticeConfig lc{detail::effective_epsilon(rc.epsilon),
                            rc.x_lo, rc.x_hi, rc.t_lo, rc.t_hi, rc.seed};
  const auto field = lattice::ArrowField::sample(lc);
  std::ofstream file;
  field.dump(detail::out_stream(rc.out, file));
  return 0;
}

inline int census(const RunConfig& rc) {
  lattice::LatticeConfig lc{detail::effective_epsilon(rc.epsilon),
                            rc.x_lo, rc.x_hi, rc.t_lo, rc.t_hi, rc.seed};
  const auto field = lattice::ArrowField::sample(lc);
  classify::Box window{rc.x_lo, rc.x_hi, rc.t_lo, rc.t_hi};
  std::ofstream file;
  auto& os = detail::out_stream(rc.out, file);
  os << "x,t,kind,m_in,m_out,dual_m_in,dual_m_out\n";
  for (const auto& sc : classify::census(field, window)) {
    const char* kind = "plain";
    switch (sc.kind) {
      case classify::SiteKind::Meeting: kind = "meeting"; break;
      case classify::SiteKind::Separation: kind = "separation"; break;
      case classify::SiteKind::Crossing: kind = "crossing"; break;
      default: break;
    }
    os << sc.x << "," << sc.t << "," << kind << "," << sc.m_in << ","
       << sc.m_out << "," << sc.dual_m_in << "," << sc.dual_m_out << "\n";
  }
  return 0;
}

inline int density_psi(const RunConfig& rc, double time, double width,
                       double tol) {
  classify::DensityPsiConfig dc{detail::effective_epsilon(rc.epsilon), time,
                                width, rc.seed};
  const auto values = parallel::map_indexed<double>(
      rc.reps, [&](std::size_t i) {
        return classify::density_psi_replicate(dc, static_cast<std::uint64_t>(i));
      });
  auto rep = stats::mc_mean(values);
  if (rc.epsilon > 0.0) rep.set_reference(stats::psi(time));
  json echo{{"subcommand", "density-psi"}, {"epsilon", rc.epsilon},
            {"time", time},  {"width", width},
            {"reps", rc.reps}, {"seed", rc.seed}};
  std::ofstream file;
  detail::out_stream(rc.out, file) << detail::report_json(echo, rep, rc.seed).dump(2)
                                   << "\n";
  if (rc.check && rep.reference &&
      std::abs(rep.estimate - *rep.reference) > tol * *rep.reference)
    return 1;
  return 0;
}

inline int relevant_density(const RunConfig& rc, double s, double u, double a,
                            double b, double tol) {
  classify::RelevantDensityConfig cfg{detail::effective_epsilon(rc.epsilon),
                                      s, u, a, b, rc.seed};
  const auto values = parallel::map_indexed<double>(
      rc.reps, [&](std::size_t i) {
        return classify::relevant_density_replicate(cfg, static_cast<std::uint64_t>(i));
      });
  const auto rep = classify::relevant_density_estimate_reduce(values, cfg);
  json j = detail::report_json(
      json{{"subcommand", "relevant-density"}, {"epsilon", rc.epsilon},
           {"s", s}, {"u", u}, {"a", a}, {"b", b},
           {"reps", rc.reps}, {"seed", rc.seed}},
      rep, rc.seed);
  j["epsilon"] = rc.epsilon;
  j["s"] = s;
  j["u"] = u;
  j["a"] = a;
  j["b"] = b;
  j["reps"] = rc.reps;
  j["mean"] = rep.estimate;
  std::ofstream file;
  detail::out_stream(rc.out, file) << j.dump(2) << "\n";
  if (rc.check && rep.reference &&
      std::abs(rep.estimate - *rep.reference) > tol * *rep.reference)
    return 1;
  return 0;
}

inline int t_mesh(const RunConfig& rc) {
  lattice::LatticeConfig lc{detail::effective_epsilon(rc.epsilon),
                            rc.x_lo, rc.x_hi, rc.t_lo, rc.t_hi, rc.seed};
  const auto field = lattice::ArrowField::sample(lc);
  const auto comps = classify::t_mesh_components(field, rc.t_lo);
  std::ofstream file;
  auto& os = detail::out_stream(rc.out, file);
  os << "component,cells,t_min,t_max,closed,boundaries_are_net_paths\n";
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const auto& comp = comps[i];
    long long t_min = comp.cells.front().second, t_max = t_min;
    for (const auto& [cx, ct] : comp.cells) {
      t_min = std::min(t_min, ct);
      t_max = std::max(t_max, ct);
    }
    const bool closed = !comp.touches_top && !comp.touches_side;
    const bool bnet = comp.boundaries_extracted &&
                      paths::is_net_path(field, comp.left_boundary) &&
                      paths::is_net_path(field, comp.right_boundary);
    os << i << "," << comp.cells.size() << "," << t_min << "," << t_max << ","
       << (closed ? 1 : 0) << "," << (bnet ? 1 : 0) << "\n";
  }
  return 0;
}

inline int excursions(const RunConfig& rc, double budget, double h_cap,
                      const std::vector<double>& hs, double tol) {
  const auto counts = parallel::map_indexed<excursion::TailCounts>(
      rc.reps, [&](std::size_t i) {
        rng::Stream rs(rng::stream_seed(rc.seed, static_cast<std::uint64_t>(i)));
        return excursion::count_tail_excursions(budget, hs, h_cap, rc.dt, rs);
      });
  std::vector<std::size_t> total(hs.size(), 0);
  double local_time = 0.0;
  for (const auto& tc : counts) {
    local_time += tc.local_time;
    for (std::size_t i = 0; i < hs.size(); ++i) total[i] += tc.count[i];
  }
  std::ofstream file;
  auto& os = detail::out_stream(rc.out, file);
  os << "h_lo,h_hi,count,local_time,estimate,reference\n";
  bool ok = true;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const double est = static_cast<double>(total[i]) / local_time;
    const double ref = excursion::tail_intensity_reference(hs[i]);
    os << hs[i] << ",inf," << total[i] << "," << local_time << "," << est
       << "," << ref << "\n";
    if (std::abs(est - ref) > tol * ref) ok = false;
  }
  return (rc.check && !ok) ? 1 : 0;
}

inline int cross_thinning(const RunConfig& rc, const std::vector<double>& centers,
                          std::size_t min_per_bucket) {
  std::ofstream file;
  auto& os = detail::out_stream(rc.out, file);
  os << "h_lo,h_hi,n,mean_h,rho_direct,rho_closed,rho_over_sqrt_h,scaling_stat\n";
  std::vector<double> scaling;
  bool identity_ok = true;
  for (std::size_t bi = 0; bi < centers.size(); ++bi) {
    const double c = centers[bi];
    const double h_lo = 0.5 * c, h_hi = 2.0 * c;
    const double dt = std::min(rc.dt, h_lo / 500.0);
    const auto samples = parallel::map_indexed<excursion::ThinningSample>(
        rc.reps, [&](std::size_t i) {
          rng::Stream rs(rng::stream_seed(
              rc.seed, (static_cast<std::uint64_t>(bi) << 32) + i));
          return excursion::thinning_sample(h_lo, h_hi, dt, rs);
        });
    const auto rep = excursion::crossing_thinning_reduce(samples);
    os << h_lo << "," << h_hi << "," << rep.n << "," << rep.mean_h << ","
       << rep.direct.estimate << "," << rep.closed_form.estimate << ","
       << rep.rho_over_sqrt_h << "," << rep.scaling_stat << "\n";
    if (rep.n >= min_per_bucket) scaling.push_back(rep.scaling_stat);
    const double se = std::sqrt(rep.direct.stderr_ * rep.direct.stderr_ +
                                rep.closed_form.stderr_ * rep.closed_form.stderr_);
    if (std::abs(rep.direct.estimate - rep.closed_form.estimate) > 5.0 * se + 1e-12)
      identity_ok = false;
  }
  bool scaling_ok = true;
  if (scaling.size() >= 2) {
    const double lo = *std::min_element(scaling.begin(), scaling.end());
    const double hi = *std::max_element(scaling.begin(), scaling.end());
    scaling_ok = hi <= 1.30 * lo;
  }
  return (rc.check && !(identity_ok && scaling_ok)) ? 1 : 0;
}

inline int sticky(const RunConfig& rc, bool dump) {
  if (dump) {
    rng::Stream rs(rng::stream_seed(rc.seed, 0));
    const auto tr = sde::simulate_sticky_gap(rc.horizon, rc.dt, rs);
    std::ofstream file;
    auto& os = detail::out_stream(rc.out, file);
    os << "t,value,aux\n";
    for (std::size_t k = 0; k < tr.times.size(); ++k)
      os << tr.times[k] << "," << tr.gap[k] << "," << tr.local_time[k] << "\n";
    return 0;
  }
  const std::vector<double> windows{1e-3, 1e-1};
  const std::vector<double> atom_times{0.1, 0.2, 0.4, 0.8};
  struct Row {
    double frac_small = 0, frac_large = 0;
    std::vector<double> at_zero;
  };
  const auto rows = parallel::map_indexed<Row>(rc.reps, [&](std::size_t i) {
    rng::Stream rs(rng::stream_seed(rc.seed, static_cast<std::uint64_t>(i)));
    const auto tr = sde::simulate_sticky_gap(rc.horizon, rc.dt, rs);
    Row r;
    r.frac_small = tr.occupation_zero(windows[0]) / windows[0];
    r.frac_large = tr.occupation_zero(windows[1]) / windows[1];
    for (double t : atom_times) r.at_zero.push_back(tr.at_zero(t) ? 1.0 : 0.0);
    return r;
  });
  std::vector<double> fs, fl;
  std::vector<std::vector<double>> atoms(atom_times.size());
  for (const auto& r : rows) {
    fs.push_back(r.frac_small);
    fl.push_back(r.frac_large);
    for (std::size_t i = 0; i < atom_times.size(); ++i)
      atoms[i].push_back(r.at_zero[i]);
  }
  const auto rep_s = stats::mc_mean(fs);
  const auto rep_l = stats::mc_mean(fl);
  json j;
  j["config_echo"] = {{"subcommand", "sticky"}, {"dt", rc.dt},
                      {"horizon", rc.horizon}, {"reps", rc.reps},
                      {"seed", rc.seed}};
  j["seed"] = rc.seed;
  j["n"] = rc.reps;
  j["occupation_fraction"] = {
      {"window_1e-3", {{"estimate", rep_s.estimate}, {"stderr", rep_s.stderr_}}},
      {"window_1e-1", {{"estimate", rep_l.estimate}, {"stderr", rep_l.stderr_}}}};
  j["estimate"] = rep_s.estimate;
  j["stderr"] = rep_s.stderr_;
  j["reference"] = 1.0;
  json atom_json = json::array();
  bool monotone = true;
  double prev = 2.0, prev_se = 0.0;
  for (std::size_t i = 0; i < atom_times.size(); ++i) {
    const auto r = stats::mc_mean(atoms[i]);
    atom_json.push_back({{"t", atom_times[i]}, {"p_zero", r.estimate},
                         {"stderr", r.stderr_}});
    const double se = 3.0 * std::sqrt(r.stderr_ * r.stderr_ + prev_se * prev_se);
    if (r.estimate > prev + se) monotone = false;
    prev = r.estimate;
    prev_se = r.stderr_;
  }
  j["p_zero_atoms"] = atom_json;
  j["monotone"] = monotone;
  std::ofstream file;
  detail::out_stream(rc.out, file) << j.dump(2) << "\n";
  const bool occupied_ok = rep_s.estimate > 0.9 && rep_s.estimate > rep_l.estimate;
  return (rc.check && !(occupied_ok && monotone)) ? 1 : 0;
}

inline int meeting(const RunConfig& rc, const std::vector<double>& eps_list) {
  json results = json::array();
  bool increasing = true;
  double prev = -1.0, prev_se = 0.0, last = 0.0;
  for (std::size_t ei = 0; ei < eps_list.size(); ++ei) {
    const auto vals = parallel::map_indexed<double>(rc.reps, [&](std::size_t i) {
      rng::Stream rs(rng::stream_seed(
          rc.seed, (static_cast<std::uint64_t>(ei) << 32) + i));
      const auto st = sde::simulate_meeting_triple(eps_list[ei], rc.dt, rs,
                                                   rc.horizon);
      return (!st.censored && st.absorbed) ? 1.0 : 0.0;
    });
    const auto rep = stats::mc_mean(vals);
    results.push_back({{"epsilon", eps_list[ei]}, {"p_absorbed", rep.estimate},
                       {"stderr", rep.stderr_}, {"n", rep.n}});
    const double se = 3.0 * std::sqrt(rep.stderr_ * rep.stderr_ + prev_se * prev_se);
    if (prev >= 0.0 && rep.estimate + se < prev) increasing = false;
    prev = rep.estimate;
    prev_se = rep.stderr_;
    last = rep.estimate;
  }
  json j;
  j["config_echo"] = {{"subcommand", "meeting"}, {"dt", rc.dt},
                      {"horizon", rc.horizon}, {"reps", rc.reps},
                      {"seed", rc.seed}};
  j["seed"] = rc.seed;
  j["n"] = rc.reps;
  j["estimate"] = last;
  j["stderr"] = 0.0;
  j["reference"] = 1.0;
  j["results"] = results;
  j["increasing"] = increasing;
  std::ofstream file;
  detail::out_stream(rc.out, file) << j.dump(2) << "\n";
  return (rc.check && !(increasing && last > 0.8)) ? 1 : 0;
}

inline int reflect_cross(const RunConfig& rc, double barrier0,
                         double barrier_slope, double barrier_end, double x0,
                         bool right_side) {
  if (rc.reps <= 1) {
    rng::Stream rs(rng::stream_seed(rc.seed, 0));
    const auto tr = sde::simulate_reflect_cross(
        [&](double t) { return barrier0 + barrier_slope * t; }, barrier_end,
        x0, right_side ? sde::Side::Right : sde::Side::Left, rc.horizon, rc.dt,
        rs);
    std::ofstream file;
    auto& os = detail::out_stream(rc.out, file);
    os << "t,value,aux\n";
    for (std::size_t k = 0; k < tr.r.size(); ++k)
      os << tr.time_at(k) << "," << tr.r[k] << "," << tr.delta[k] << "\n";
    return 0;
  }
  // two-estimator comparison: crossing by the horizon happens iff the
  // pure-reflection local time exceeds the clock, so the same Delta
  // paths feed the indicator and the closed form E[1 - e^{-2 Delta}]
  struct Pair { double ind, closed; };
  const auto vals = parallel::map_indexed<Pair>(rc.reps, [&](std::size_t i) {
    rng::Stream rs(rng::stream_seed(rc.seed, static_cast<std::uint64_t>(i)));
    const auto tr = sde::simulate_reflect_cross(
        [&](double t) { return barrier0 + barrier_slope * t; }, barrier_end,
        x0, sde::Side::Left, rc.horizon, rc.dt, rs,
        std::numeric_limits<double>::infinity());
    const double delta_end = tr.delta.back();
    const double clock = rs.exponential(0.5);
    return Pair{delta_end >= clock ? 1.0 : 0.0,
                1.0 - std::exp(-2.0 * delta_end)};
  });
  std::vector<double> ind, closed;
  for (const auto& v : vals) {
    ind.push_back(v.ind);
    closed.push_back(v.closed);
  }
  const auto ri = stats::mc_mean(ind);
  const auto rcf = stats::mc_mean(closed);
  json j;
  j["config_echo"] = {{"subcommand", "reflect-cross"}, {"dt", rc.dt},
                      {"horizon", rc.horizon}, {"reps", rc.reps},
                      {"seed", rc.seed}, {"barrier0", barrier0},
                      {"barrier_slope", barrier_slope}, {"x0", x0}};
  j["seed"] = rc.seed;
  j["n"] = rc.reps;
  j["estimate"] = ri.estimate;
  j["stderr"] = ri.stderr_;
  j["reference"] = rcf.estimate;
  j["closed_form_stderr"] = rcf.stderr_;
  std::ofstream file;
  detail::out_stream(rc.out, file) << j.dump(2) << "\n";
  const double se = std::sqrt(ri.stderr_ * ri.stderr_ + rcf.stderr_ * rcf.stderr_);
  return (rc.check && std::abs(ri.estimate - rcf.estimate) > 5.0 * se + 1e-12)
             ? 1
             : 0;
}

inline int invariants_cmd(const RunConfig& rc, int cases,
                          const std::vector<double>& eps_list) {
  invariants::SuiteConfig sc;
  sc.cases = cases;
  if (!eps_list.empty()) sc.epsilons = eps_list;
  sc.seed = rc.seed;
  const auto res = invariants::run_suite(sc, &std::cout);
  return res.ok ? 0 : 1;
}

}  // namespace cmd

inline int run_args(std::vector<std::string> args) {
  try {
    args = detail::splice_config(std::move(args));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"branching-coalescing lattice and Brownian net laboratory"};
  app.require_subcommand(1);
  RunConfig rc;

  const auto add_common = [&](CLI::App* sub, bool window = false) {
    sub->add_option("--epsilon", rc.epsilon)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_option("--seed", rc.seed)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_option("--reps", rc.reps)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_option("--dt", rc.dt)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_option("--horizon", rc.horizon)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_option("--out", rc.out)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_option("--format", rc.format)
        ->check(CLI::IsMember({"csv", "json"}))
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_flag("--check", rc.check);
    if (window) {
      sub->add_option("--x-lo", rc.x_lo)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
      sub->add_option("--x-hi", rc.x_hi)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
      sub->add_option("--t-lo", rc.t_lo)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
      sub->add_option("--t-hi", rc.t_hi)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    }
  };

  auto* s_sample = app.add_subcommand("sample", "dump a sampled arrow field");
  add_common(s_sample, true);

  auto* s_census = app.add_subcommand("census", "per-site classification CSV");
  add_common(s_census, true);

  auto* s_dpsi = app.add_subcommand("density-psi", "point-set density vs psi");
  double dp_time = 1.0, dp_width = 40.0, dp_tol = 0.05;
  add_common(s_dpsi);
  s_dpsi->add_option("--time", dp_time);
  s_dpsi->add_option("--width", dp_width);
  s_dpsi->add_option("--tol", dp_tol);

  auto* s_rel = app.add_subcommand("relevant-density",
                                   "relevant separation point density");
  double rl_s = 0.0, rl_u = 1.0, rl_a = 0.0, rl_b = 1.0, rl_tol = 0.15;
  add_common(s_rel);
  s_rel->add_option("--s", rl_s);
  s_rel->add_option("--u", rl_u);
  s_rel->add_option("--a", rl_a);
  s_rel->add_option("--b", rl_b);
  s_rel->add_option("--tol", rl_tol);

  auto* s_tmesh = app.add_subcommand("t-mesh", "complement components");
  add_common(s_tmesh, true);

  auto* s_exc = app.add_subcommand("excursions", "excursion tail intensity");
  double ex_budget = 20.0, ex_cap = 8.0, ex_tol = 0.05;
  std::vector<double> ex_h{0.01, 0.1, 1.0};
  add_common(s_exc);
  s_exc->add_option("--budget", ex_budget);
  s_exc->add_option("--h-cap", ex_cap);
  s_exc->add_option("--h", ex_h);
  s_exc->add_option("--tol", ex_tol);

  auto* s_thin = app.add_subcommand("cross-thinning", "crossing thinning law");
  std::vector<double> th_centers{0.04, 0.16, 0.64};
  std::size_t th_floor = 100;
  add_common(s_thin);
  s_thin->add_option("--buckets", th_centers);
  s_thin->add_option("--min-per-bucket", th_floor);

  auto* s_sticky = app.add_subcommand("sticky", "sticky gap statistics");
  bool st_dump = false;
  add_common(s_sticky);
  s_sticky->add_flag("--dump", st_dump);

  auto* s_meet = app.add_subcommand("meeting", "meeting triple absorption");
  std::vector<double> me_eps{0.4, 0.2, 0.1, 0.05};
  add_common(s_meet);
  s_meet->add_option("--eps-list", me_eps);

  auto* s_refl = app.add_subcommand("reflect-cross", "reflection off a dual path");
  double rf_b0 = 1.0, rf_slope = 0.0, rf_end = 1e30, rf_x0 = 0.0;
  bool rf_right = false;
  add_common(s_refl);
  s_refl->add_option("--barrier0", rf_b0);
  s_refl->add_option("--barrier-slope", rf_slope);
  s_refl->add_option("--barrier-end", rf_end);
  s_refl->add_option("--x0", rf_x0);
  s_refl->add_flag("--right", rf_right);

  auto* s_inv = app.add_subcommand("invariants", "randomized property suite");
  int inv_cases = 100;
  std::vector<double> inv_eps;
  add_common(s_inv);
  s_inv->add_option("--cases", inv_cases);
  s_inv->add_option("--eps-list", inv_eps);

  std::vector<const char*> argv;
  argv.push_back("bnet");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (s_sample->parsed()) return cmd::sample(rc);
    if (s_census->parsed()) return cmd::census(rc);
    if (s_dpsi->parsed()) return cmd::density_psi(rc, dp_time, dp_width, dp_tol);
    if (s_rel->parsed())
      return cmd::relevant_density(rc, rl_s, rl_u, rl_a, rl_b, rl_tol);
    if (s_tmesh->parsed()) return cmd::t_mesh(rc);
    if (s_exc->parsed()) return cmd::excursions(rc, ex_budget, ex_cap, ex_h, ex_tol);
    if (s_thin->parsed()) return cmd::cross_thinning(rc, th_centers, th_floor);
    if (s_sticky->parsed()) return cmd::sticky(rc, st_dump);
    if (s_meet->parsed()) return cmd::meeting(rc, me_eps);
    if (s_refl->parsed())
      return cmd::reflect_cross(rc, rf_b0, rf_slope, rf_end, rf_x0, rf_right);
    if (s_inv->parsed()) return cmd::invariants_cmd(rc, inv_cases, inv_eps);
  } catch (const lattice::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

inline int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_args(std::move(args));
}

}  // namespace bnet::cli
