// kstep: command-line front end for the k-step exclusion toolkit.
//
// Subcommands:
//   flux      tabulate G_k, H, branch and star densities on a grid
//   riemann   exact self-similar solution of the step-data problem
//   simulate  run the particle system, write framed binary snapshots
//   verify    Monte Carlo density profile vs the exact solution
//   tagged    law of large numbers for the tagged pushing particle
//   oracle    exact stationarity check on a small ring
//
// Option precedence: command line > --config JSON file > built-in defaults.
// All outputs embed the resolved configuration and the RNG algorithm name;
// the only non-reproducible field is meta.timestamp in JSON reports.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kstep/engine.hpp"
#include "kstep/io.hpp"
#include "kstep/measurement.hpp"
#include "kstep/riemann.hpp"
#include "kstep/snapshot_io.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json load_config(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      std::ifstream in(argv[i + 1]);
      if (!in) throw std::runtime_error("cannot open config file");
      json j;
      in >> j;
      return j;
    }
  }
  return json::object();
}

template <typename T>
T cfg_default(const json& cfg, const std::string& key, T fallback) {
  if (cfg.contains(key)) return cfg.at(key).get<T>();
  return fallback;
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
  return buf;
}

json base_meta(const json& params) {
  json j;
  j["params"] = params;
  j["rng"] = std::string(kstep::Philox::algorithm());
  return j;
}

void emit(const std::string& out_dir, const std::string& name,
          const std::string& content) {
  if (out_dir.empty()) {
    std::cout << content;
    return;
  }
  fs::create_directories(out_dir);
  kstep::write_text((fs::path(out_dir) / name).string(), content);
}

// Run replicas r = 0..n-1 on a small thread pool; results land in replica
// order no matter how the pool schedules them.
template <typename F>
void parallel_replicas(int replicas, int threads, F&& body) {
  if (threads <= 1) {
    for (int r = 0; r < replicas; ++r) body(r);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int nthreads = std::min(threads, replicas);
  pool.reserve(nthreads);
  for (int i = 0; i < nthreads; ++i)
    pool.emplace_back([&] {
      for (int r = next.fetch_add(1); r < replicas; r = next.fetch_add(1)) body(r);
    });
  for (auto& th : pool) th.join();
}

int default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 2 : static_cast<int>(hw);
}

// Auto-sized segment: the measured coordinate region padded by the
// information-cone clearance the horizon check demands.
struct SegmentPlan {
  int64_t lo, hi;
  std::pair<double, double> measured;
};

SegmentPlan plan_segment(double measured_lo, double measured_hi, int k, double T) {
  const double clear =
      kstep::max_speed_bound(k) * T + 10.0 * std::sqrt(std::max(T, 0.0));
  SegmentPlan plan;
  plan.lo = static_cast<int64_t>(std::floor(measured_lo - clear)) - 1;
  plan.hi = static_cast<int64_t>(std::ceil(measured_hi + clear)) + 1;
  plan.measured = {measured_lo, measured_hi};
  return plan;
}

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::string tok;
  for (char c : csv) {
    if (c == ',') {
      if (!tok.empty()) out.push_back(std::stod(tok));
      tok.clear();
    } else {
      tok += c;
    }
  }
  if (!tok.empty()) out.push_back(std::stod(tok));
  return out;
}

struct FluxOpts {
  int k;
  double umin, umax;
  int points;
  std::string grid_csv, out_dir;
};

void run_flux(const FluxOpts& o) {
  const kstep::FluxSpec spec = kstep::FluxSpec::totally_asymmetric(o.k);
  std::vector<double> grid;
  if (!o.grid_csv.empty())
    grid = parse_list(o.grid_csv);
  else
    for (int i = 0; i < o.points; ++i)
      grid.push_back(o.points == 1 ? o.umin
                                   : o.umin + (o.umax - o.umin) * i / (o.points - 1));
  const auto infl = kstep::inflection(spec);
  const json meta = base_meta({{"command", "flux"}, {"k", o.k}});
  std::string csv = "# " + meta.dump() + "\n";
  csv += "u,G,H,branch,u_star,u_lower_star\n";
  for (double u : grid) {
    csv += kstep::fmt17(u) + "," + kstep::fmt17(kstep::flux(spec, u)) + "," +
           kstep::fmt17(kstep::characteristic_speed(spec, u)) + ",";
    std::string branch = "upper", star, lower_star;
    if (infl) {
      if (u == *infl)
        branch = "inflection";
      else if (u < *infl)
        branch = "lower";
      if (u < *infl) star = kstep::fmt17(kstep::star_upper(spec, u));
      if (u > *infl) {
        const kstep::StarPoint s = kstep::star_lower(spec, u);
        if (std::isnan(s.value))
          lower_star = "below-range";
        else
          lower_star = kstep::fmt17(s.value) +
                       (s.below_range ? std::string(" (below-range)") : "");
      }
    }
    csv += branch + "," + star + "," + lower_star + "\n";
  }
  emit(o.out_dir, "flux.csv", csv);
}

struct RiemannOpts {
  double lambda, rho, vmin, vmax;
  int k, points;
  bool envelope;
  std::string out_dir;
};

void run_riemann(const RiemannOpts& o) {
  const kstep::RiemannProblem problem{o.lambda, o.rho,
                                      kstep::FluxSpec::totally_asymmetric(o.k)};
  const kstep::SelfSimilarSolution sol =
      o.envelope ? kstep::solve_general_envelope(problem) : kstep::solve(problem);
  double lo = o.vmin, hi = o.vmax;
  if (std::isnan(lo))
    lo = (sol.breakpoints.empty() ? 0.0 : sol.breakpoints.front()) - 0.75;
  if (std::isnan(hi))
    hi = (sol.breakpoints.empty() ? 0.0 : sol.breakpoints.back()) + 0.75;
  const json params = {{"command", "riemann"}, {"lambda", o.lambda},
                       {"rho", o.rho},         {"k", o.k},
                       {"vmin", lo},           {"vmax", hi},
                       {"points", o.points},   {"envelope", o.envelope}};
  json report = base_meta(params);
  report["solution"] = kstep::to_json(sol);
  report["rankine_hugoniot_residual"] = kstep::check_rankine_hugoniot(sol);
  report["condition_E_violation"] = kstep::check_condition_E(sol, 1000);
  report["meta"] = {{"timestamp", iso_timestamp()}};
  std::string csv = "# " + base_meta(params).dump() + "\n";
  csv += "v,u\n";
  for (int i = 0; i < o.points; ++i) {
    const double v = o.points == 1 ? lo : lo + (hi - lo) * i / (o.points - 1);
    csv += kstep::fmt17(v) + "," + kstep::fmt17(kstep::evaluate(sol, v, 1.0)) + "\n";
  }
  if (o.out_dir.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    emit(o.out_dir, "riemann.json", report.dump(2) + "\n");
    emit(o.out_dir, "riemann.csv", csv);
  }
}

struct SimulateOpts {
  int k;
  std::string topology, measure, snapshot_csv, out_dir;
  int64_t size, lo, hi;
  double alpha, lambda, rho, time;
  uint64_t seed, stream;
};

void run_simulate(const SimulateOpts& o) {
  kstep::RunParams p;
  p.k = o.k;
  p.topology =
      o.topology == "ring" ? kstep::Topology::ring : kstep::Topology::segment;
  p.ring_size = o.size;
  p.segment_lo = o.lo;
  p.segment_hi = o.hi;
  if (o.measure == "bernoulli")
    p.initial = kstep::InitialMeasure::bernoulli(o.alpha);
  else if (o.measure == "step")
    p.initial = kstep::InitialMeasure::step(o.lambda, o.rho);
  else
    p.initial = kstep::InitialMeasure::palm_bernoulli(o.alpha, 0);
  p.snapshot_times =
      o.snapshot_csv.empty() ? std::vector<double>{o.time} : parse_list(o.snapshot_csv);
  p.seed = o.seed;
  p.stream = o.stream;
  const kstep::RunResult rr = kstep::run(p);
  const json params = {{"command", "simulate"},
                       {"k", o.k},
                       {"topology", o.topology},
                       {"lo", o.lo},
                       {"hi", o.hi},
                       {"size", p.topology == kstep::Topology::ring ? o.size
                                                                    : o.hi - o.lo + 1},
                       {"measure", o.measure},
                       {"alpha", o.alpha},
                       {"lambda", o.lambda},
                       {"rho", o.rho},
                       {"snapshot_times", p.snapshot_times},
                       {"seed", o.seed},
                       {"stream", o.stream}};
  json meta = base_meta(params);
  meta["event_count"] = rr.event_count;
  meta["deadlocked"] = rr.deadlocked;
  meta["final_time"] = rr.final_time;
  fs::create_directories(o.out_dir);
  json files = json::array();
  for (size_t i = 0; i < rr.snapshots.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "snap_%03zu.bin", i);
    kstep::write_snapshot((fs::path(o.out_dir) / name).string(), rr.snapshots[i]);
    files.push_back({{"file", name}, {"time", p.snapshot_times[i]}});
  }
  meta["snapshots"] = files;
  meta["meta"] = {{"timestamp", iso_timestamp()}};
  kstep::write_text((fs::path(o.out_dir) / "metadata.json").string(),
                    meta.dump(2) + "\n");
  std::cout << "simulate: " << rr.event_count << " events, "
            << rr.snapshots.size() << " snapshots -> " << o.out_dir << "\n";
}

struct VerifyOpts {
  double lambda, rho, time, window, exclusion, tolerance, vmin, vmax, grid_step;
  int k, replicas, threads;
  uint64_t seed;
  std::string out_dir;
};

int run_verify(const VerifyOpts& o) {
  const kstep::FluxSpec spec = kstep::FluxSpec::totally_asymmetric(o.k);
  const kstep::RiemannProblem problem{o.lambda, o.rho, spec};
  const kstep::SelfSimilarSolution sol = kstep::solve(problem);
  // Default velocity range covers every wave speed of the family plus slack.
  const auto infl = kstep::inflection(spec);
  const double top_speed = infl ? kstep::characteristic_speed(spec, *infl)
                                : kstep::characteristic_speed(spec, 0.0);
  double vmin = o.vmin, vmax = o.vmax;
  if (std::isnan(vmin)) vmin = -kstep::max_speed_bound(o.k) - 0.5;
  if (std::isnan(vmax)) vmax = top_speed + 0.5;
  std::vector<double> grid;
  for (double v = vmin; v <= vmax + 1e-12; v += o.grid_step) grid.push_back(v);

  const SegmentPlan seg = plan_segment(vmin * o.time - o.window * o.time,
                                       vmax * o.time + o.window * o.time, o.k, o.time);
  std::vector<kstep::Configuration> snaps(o.replicas);
  uint64_t total_events = 0;
  std::atomic<uint64_t> event_acc{0};
  parallel_replicas(o.replicas, o.threads, [&](int r) {
    kstep::RunParams p;
    p.k = o.k;
    p.topology = kstep::Topology::segment;
    p.segment_lo = seg.lo;
    p.segment_hi = seg.hi;
    p.initial = kstep::InitialMeasure::step(o.lambda, o.rho);
    p.snapshot_times = {o.time};
    p.seed = o.seed;
    p.stream = static_cast<uint64_t>(r);
    p.measured_region = seg.measured;
    kstep::RunResult rr = kstep::run(p);
    event_acc += rr.event_count;
    snaps[r] = std::move(rr.snapshots.front());
  });
  total_events = event_acc.load();
  const kstep::ProfileEstimate profile =
      kstep::empirical_profile(snaps, o.time, grid, o.window);
  const kstep::ComparisonReport rep =
      kstep::compare_to_solution(profile, sol, o.exclusion, o.tolerance);

  const json params = {{"command", "verify"},   {"lambda", o.lambda},
                       {"rho", o.rho},          {"k", o.k},
                       {"time", o.time},        {"replicas", o.replicas},
                       {"seed", o.seed},        {"window", o.window},
                       {"exclusion", o.exclusion}, {"tolerance", o.tolerance},
                       {"vmin", vmin},          {"vmax", vmax},
                       {"grid_step", o.grid_step}, {"segment_lo", seg.lo},
                       {"segment_hi", seg.hi}};
  json report = base_meta(params);
  report["solution"] = kstep::to_json(sol);
  report["comparison"] = kstep::to_json(rep);
  report["event_count"] = total_events;
  report["meta"] = {{"timestamp", iso_timestamp()}};
  if (o.out_dir.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    emit(o.out_dir, "report.json", report.dump(2) + "\n");
    emit(o.out_dir, "profile.csv", kstep::profile_csv(profile, base_meta(params)));
  }
  std::fprintf(stderr, "verify: case %d sup_error=%.5f l1_error=%.5f %s\n",
               static_cast<int>(sol.case_label), rep.sup_error, rep.l1_error,
               rep.pass ? "PASS" : "FAIL");
  return rep.pass ? 0 : 1;
}

struct TaggedOpts {
  double alpha, time;
  int replicas, samples, threads, k;
  uint64_t seed;
  std::string out_dir;
};

void run_tagged_cmd(const TaggedOpts& o) {
  std::vector<kstep::TaggedTrajectory> trs(o.replicas);
  parallel_replicas(o.replicas, o.threads, [&](int r) {
    kstep::TaggedRunParams p;
    p.k = o.k;
    p.alpha = o.alpha;
    p.horizon = o.time;
    p.samples = o.samples;
    p.seed = o.seed;
    p.stream = static_cast<uint64_t>(r);
    trs[r] = kstep::run_tagged(p);
  });
  const kstep::LlnEstimate est = kstep::lln_estimate(trs);
  const json params = {{"command", "tagged"},   {"alpha", o.alpha},
                       {"time", o.time},        {"replicas", o.replicas},
                       {"samples", o.samples},  {"seed", o.seed},
                       {"k", o.k}};
  json report = base_meta(params);
  report["lln"] = kstep::to_json(est);
  if (o.k == 2) {
    const double target = (1.0 - o.alpha) * (1.0 + 2.0 * o.alpha);
    report["lln"]["target"] = target;
    report["lln"]["abs_deviation"] = std::abs(est.mean - target);
  }
  report["meta"] = {{"timestamp", iso_timestamp()}};
  std::string csv = "# " + base_meta(params).dump() + "\n";
  csv += "replica,t,y\n";
  for (size_t r = 0; r < trs.size(); ++r)
    for (size_t i = 0; i < trs[r].times.size(); ++i)
      csv += std::to_string(r) + "," + kstep::fmt17(trs[r].times[i]) + "," +
             std::to_string(trs[r].positions[i]) + "\n";
  if (o.out_dir.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    emit(o.out_dir, "tagged.json", report.dump(2) + "\n");
    emit(o.out_dir, "trajectories.csv", csv);
  }
  std::fprintf(stderr, "tagged: alpha=%g mean=%.6f +- %.6f (99%%)\n", o.alpha,
               est.mean, est.ci99_halfwidth);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"totally asymmetric k-step exclusion: simulator, exact Riemann "
               "solver, and verification harness"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "flat JSON key/value defaults");

  json cfg;
  try {
    cfg = load_config(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  FluxOpts fo{cfg_default(cfg, "k", 2),
              cfg_default(cfg, "umin", 0.0),
              cfg_default(cfg, "umax", 1.0),
              cfg_default(cfg, "points", 101),
              cfg_default<std::string>(cfg, "grid", ""),
              cfg_default<std::string>(cfg, "out-dir", "")};
  auto* flux_cmd = app.add_subcommand("flux", "tabulate the flux geometry");
  flux_cmd->add_option("--k", fo.k, "number of exclusion steps");
  flux_cmd->add_option("--umin", fo.umin);
  flux_cmd->add_option("--umax", fo.umax);
  flux_cmd->add_option("--points", fo.points, "grid size on [umin, umax]");
  flux_cmd->add_option("--grid", fo.grid_csv, "explicit comma-separated grid");
  flux_cmd->add_option("--out-dir", fo.out_dir);

  RiemannOpts ro{cfg_default(cfg, "lambda", 0.0),
                 cfg_default(cfg, "rho", 0.0),
                 cfg_default(cfg, "vmin", std::nan("")),
                 cfg_default(cfg, "vmax", std::nan("")),
                 cfg_default(cfg, "k", 2),
                 cfg_default(cfg, "points", 601),
                 cfg_default(cfg, "envelope", false),
                 cfg_default<std::string>(cfg, "out-dir", "")};
  auto* riemann_cmd = app.add_subcommand("riemann", "exact entropy solution");
  riemann_cmd->add_option("--lambda", ro.lambda, "density left of the origin")
      ->required();
  riemann_cmd->add_option("--rho", ro.rho, "density right of the origin")->required();
  riemann_cmd->add_option("--k", ro.k);
  riemann_cmd->add_option("--points", ro.points, "number of sampled velocities");
  riemann_cmd->add_option("--vmin", ro.vmin);
  riemann_cmd->add_option("--vmax", ro.vmax);
  riemann_cmd->add_flag("--envelope", ro.envelope, "use the envelope construction");
  riemann_cmd->add_option("--out-dir", ro.out_dir);

  SimulateOpts so{cfg_default(cfg, "k", 2),
                  cfg_default<std::string>(cfg, "topology", "ring"),
                  cfg_default<std::string>(cfg, "measure", "bernoulli"),
                  cfg_default<std::string>(cfg, "snapshot-times", ""),
                  cfg_default<std::string>(cfg, "out-dir", "out"),
                  cfg_default<int64_t>(cfg, "size", 1000),
                  cfg_default<int64_t>(cfg, "lo", 0),
                  cfg_default<int64_t>(cfg, "hi", 0),
                  cfg_default(cfg, "alpha", 0.5),
                  cfg_default(cfg, "lambda", 0.0),
                  cfg_default(cfg, "rho", 0.0),
                  cfg_default(cfg, "time", 10.0),
                  cfg_default<uint64_t>(cfg, "seed", 0),
                  cfg_default<uint64_t>(cfg, "stream", 0)};
  auto* sim_cmd = app.add_subcommand("simulate", "run the particle system");
  sim_cmd->add_option("--k", so.k);
  sim_cmd->add_option("--topology", so.topology)
      ->check(CLI::IsMember({"ring", "segment"}));
  sim_cmd->add_option("--size", so.size, "ring size");
  sim_cmd->add_option("--lo", so.lo, "segment lowest coordinate");
  sim_cmd->add_option("--hi", so.hi, "segment highest coordinate");
  sim_cmd->add_option("--measure", so.measure)
      ->check(CLI::IsMember({"bernoulli", "step", "palm"}));
  sim_cmd->add_option("--alpha", so.alpha);
  sim_cmd->add_option("--lambda", so.lambda);
  sim_cmd->add_option("--rho", so.rho);
  sim_cmd->add_option("--time", so.time, "single snapshot time");
  sim_cmd->add_option("--snapshot-times", so.snapshot_csv, "comma-separated times");
  sim_cmd->add_option("--seed", so.seed);
  sim_cmd->add_option("--stream", so.stream);
  sim_cmd->add_option("--out-dir", so.out_dir);

  VerifyOpts vo{cfg_default(cfg, "lambda", 0.5),
                cfg_default(cfg, "rho", 0.05),
                cfg_default(cfg, "time", 3000.0),
                cfg_default(cfg, "window", 0.02),
                cfg_default(cfg, "exclusion", 0.15),
                cfg_default(cfg, "tolerance", 0.02),
                cfg_default(cfg, "vmin", std::nan("")),
                cfg_default(cfg, "vmax", std::nan("")),
                cfg_default(cfg, "grid-step", 0.02),
                cfg_default(cfg, "k", 2),
                cfg_default(cfg, "replicas", 16),
                cfg_default(cfg, "threads", default_threads()),
                cfg_default<uint64_t>(cfg, "seed", 0),
                cfg_default<std::string>(cfg, "out-dir", "")};
  auto* verify_cmd = app.add_subcommand("verify", "profile vs exact solution");
  verify_cmd->add_option("--lambda", vo.lambda)->required();
  verify_cmd->add_option("--rho", vo.rho)->required();
  verify_cmd->add_option("--k", vo.k);
  verify_cmd->add_option("--time", vo.time, "measurement time (Euler scale)");
  verify_cmd->add_option("--replicas", vo.replicas);
  verify_cmd->add_option("--seed", vo.seed);
  verify_cmd->add_option("--window", vo.window, "profile window half-width in v");
  verify_cmd->add_option("--exclusion", vo.exclusion,
                         "radius dropped around discontinuities");
  verify_cmd->add_option("--tolerance", vo.tolerance, "sup-error pass threshold");
  verify_cmd->add_option("--vmin", vo.vmin);
  verify_cmd->add_option("--vmax", vo.vmax);
  verify_cmd->add_option("--grid-step", vo.grid_step);
  verify_cmd->add_option("--threads", vo.threads);
  verify_cmd->add_option("--out-dir", vo.out_dir);

  TaggedOpts to{cfg_default(cfg, "alpha", 0.5),
                cfg_default(cfg, "time", 1000.0),
                cfg_default(cfg, "replicas", 16),
                cfg_default(cfg, "samples", 100),
                cfg_default(cfg, "threads", default_threads()),
                cfg_default(cfg, "k", 2),
                cfg_default<uint64_t>(cfg, "seed", 0),
                cfg_default<std::string>(cfg, "out-dir", "")};
  auto* tagged_cmd = app.add_subcommand("tagged", "tagged-particle LLN");
  tagged_cmd->add_option("--alpha", to.alpha)->required();
  tagged_cmd->add_option("--time", to.time, "trajectory horizon");
  tagged_cmd->add_option("--replicas", to.replicas);
  tagged_cmd->add_option("--samples", to.samples);
  tagged_cmd->add_option("--seed", to.seed);
  tagged_cmd->add_option("--threads", to.threads);
  tagged_cmd->add_option("--k", to.k);
  tagged_cmd->add_option("--out-dir", to.out_dir);

  int oL = cfg_default(cfg, "size", 6), ok = cfg_default(cfg, "k", 2),
      on = cfg_default(cfg, "particles", 3);
  std::string oout = cfg_default<std::string>(cfg, "out-dir", "");
  auto* oracle_cmd = app.add_subcommand("oracle", "small-ring stationarity");
  oracle_cmd->add_option("--size", oL, "ring size (<= 10)");
  oracle_cmd->add_option("--k", ok);
  oracle_cmd->add_option("--particles", on);
  oracle_cmd->add_option("--out-dir", oout);

  CLI11_PARSE(app, argc, argv);

  try {
    if (flux_cmd->parsed()) {
      run_flux(fo);
    } else if (riemann_cmd->parsed()) {
      run_riemann(ro);
    } else if (sim_cmd->parsed()) {
      run_simulate(so);
    } else if (verify_cmd->parsed()) {
      return run_verify(vo);
    } else if (tagged_cmd->parsed()) {
      run_tagged_cmd(to);
    } else if (oracle_cmd->parsed()) {
      const kstep::OracleReport rep = kstep::stationarity_oracle(oL, ok, on);
      json report = base_meta(
          {{"command", "oracle"}, {"size", oL}, {"k", ok}, {"particles", on}});
      report["oracle"] = kstep::to_json(rep);
      report["meta"] = {{"timestamp", iso_timestamp()}};
      if (oout.empty())
        std::cout << report.dump(2) << "\n";
      else
        emit(oout, "oracle.json", report.dump(2) + "\n");
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
