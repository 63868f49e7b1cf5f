// Exact continuous-time simulation of totally asymmetric k-step exclusion
// in its pushing form: an occupied site x with its first vacancy at x + m,
// m <= k, shifts the whole pack x..x+m-1 one site right at rate 1.
//
// The event loop is Gillespie over an active-particle index: every active
// particle carries rate exactly 1, so the total rate is the active count,
// waiting times are Exp(|active|), and the mover is a uniform pick.  A push
// changes occupancy at two sites only, so active membership is rechecked on
// the O(k) window around the move.  coupled_run instead drives two ordered
// configurations with shared per-site clocks, which is what makes the
// order-preservation statement pathwise.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kstep/lattice.hpp"
#include "kstep/rng.hpp"

namespace kstep {

struct HorizonViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PushMove {
  int64_t source = 0;  // site index
  int extent = 0;      // first-vacancy offset m, 1..k
};

/// Occupancy with boundary conventions: segment sites beyond the right edge
/// block (read as occupied), sites beyond the left edge read as empty.
inline int occupancy_at(const Configuration& cfg, int64_t i) {
  const int64_t L = cfg.size();
  if (cfg.topology == Topology::ring) {
    i %= L;
    if (i < 0) i += L;
    return cfg.occ[static_cast<size_t>(i)];
  }
  if (i < 0) return 0;
  if (i >= L) return 1;
  return cfg.occ[static_cast<size_t>(i)];
}

/// Smallest m in 1..k with site x+m empty, or nullopt if x+1..x+k are all
/// occupied (the move is cancelled).  x must hold a particle.
inline std::optional<int> first_vacancy(const Configuration& cfg, int64_t x, int k) {
  const int64_t L = cfg.size();
  if (x < 0 || x >= L || !cfg.occ[static_cast<size_t>(x)])
    throw std::invalid_argument("first_vacancy: source site not occupied");
  const int limit = static_cast<int>(std::min<int64_t>(
      k, cfg.topology == Topology::ring ? L - 1 : L - 1 - x));
  if (cfg.topology == Topology::ring) {
    int64_t j = x;
    for (int m = 1; m <= limit; ++m) {
      if (++j == L) j = 0;
      if (!cfg.occ[static_cast<size_t>(j)]) return m;
    }
  } else {
    for (int m = 1; m <= limit; ++m)
      if (!cfg.occ[static_cast<size_t>(x + m)]) return m;
  }
  return std::nullopt;
}

/// Rate of the move x -> y for the totally asymmetric k-step kernel: 1 when
/// y is the first vacancy within reach, 0 otherwise.
inline double jump_rate(const Configuration& cfg, int64_t x, int64_t y, int k) {
  const int64_t L = cfg.size();
  if (y < 0 || y >= L || cfg.occ[static_cast<size_t>(y)])
    throw std::invalid_argument("jump_rate: target site not empty");
  const auto m = first_vacancy(cfg, x, k);
  if (!m) return 0.0;
  int64_t d = y - x;
  if (cfg.topology == Topology::ring) {
    d %= L;
    if (d < 0) d += L;
  }
  return d == *m ? 1.0 : 0.0;
}

/// Apply a push: site x empties, site x+m fills, the pack in between shifts
/// right by one with order preserved.  Validates the move.
inline Configuration apply_push(const Configuration& cfg, const PushMove& mv) {
  Configuration out = cfg;
  const int64_t L = cfg.size();
  if (mv.extent < 1) throw std::invalid_argument("apply_push: extent must be >= 1");
  const auto site = [&](int64_t i) {
    if (cfg.topology == Topology::ring) {
      i %= L;
      if (i < 0) i += L;
    }
    return i;
  };
  if (mv.source < 0 || mv.source >= L || !out.occ[static_cast<size_t>(mv.source)])
    throw std::invalid_argument("apply_push: source not occupied");
  for (int j = 1; j < mv.extent; ++j) {
    const int64_t s = site(mv.source + j);
    if (s < 0 || s >= L || !out.occ[static_cast<size_t>(s)])
      throw std::invalid_argument("apply_push: pack interior not occupied");
  }
  const int64_t target = site(mv.source + mv.extent);
  if (target < 0 || target >= L || out.occ[static_cast<size_t>(target)])
    throw std::invalid_argument("apply_push: target not empty");
  out.occ[static_cast<size_t>(mv.source)] = 0;
  out.occ[static_cast<size_t>(target)] = 1;
  return out;
}

struct StepEvent {
  double dt = 0.0;
  PushMove move;
};

class SimState {
 public:
  SimState(Configuration cfg, int k, Philox rng)
      : config_(std::move(cfg)), rng_(rng), k_(k), L_(config_.size()) {
    if (k_ < 1) throw std::invalid_argument("SimState: k must be >= 1");
    if (L_ < 2) throw std::invalid_argument("SimState: lattice too small");
    occ_ = config_.occ.data();
    ring_ = config_.topology == Topology::ring;
    scan_limit_ = static_cast<int32_t>(std::min<int64_t>(k_, L_ - 1));
    slot_.assign(static_cast<size_t>(L_), -1);
    for (int64_t s = 0; s < L_; ++s) refresh_site(static_cast<int32_t>(s));
  }
  SimState(const SimState&) = delete;
  SimState& operator=(const SimState&) = delete;

  const Configuration& config() const { return config_; }
  double time() const { return time_; }
  uint64_t events() const { return events_; }
  int64_t active_count() const { return static_cast<int64_t>(active_.size()); }
  int k() const { return k_; }

  void set_tagged(int64_t site) {
    if (!config_.occ[static_cast<size_t>(site)])
      throw std::invalid_argument("set_tagged: site not occupied");
    tagged_site_ = static_cast<int32_t>(site);
    tagged_coordinate_ = config_.coordinate(site);
  }
  bool has_tagged() const { return tagged_site_ >= 0; }
  int64_t tagged_site() const { return tagged_site_; }
  int64_t tagged_coordinate() const { return tagged_coordinate_; }

  struct Pending {
    double dt;
    int32_t site;
    int32_t extent;
  };

  /// Sample the next waiting time and mover without applying the move;
  /// returns nullopt on deadlock (no active particle).
  std::optional<Pending> prepare_step() {
    if (active_.empty()) return std::nullopt;
    const double dt = rng_.exponential(static_cast<double>(active_.size()));
    const int32_t x = active_[rng_.uniform_index(active_.size())];
    return Pending{dt, x, extent_of(x)};
  }

  void commit(const Pending& ev) {
    const int32_t x = ev.site;
    const int32_t m = ev.extent;
    const int32_t target = wrap(x + m);
    occ_[x] = 0;
    occ_[target] = 1;
    if (tagged_site_ >= 0) {
      int64_t off = tagged_site_ - x;
      if (ring_ && off < 0) off += L_;
      if (off >= 0 && off < m) {
        tagged_site_ = wrap(tagged_site_ + 1);
        ++tagged_coordinate_;
      }
    }
    // Membership updates after occupancy changed at x (emptied) and x+m
    // (filled).  The mover leaves the active set; every occupied site within
    // k behind x now has the vacancy at x in range, so it is active without
    // rescanning; the pack interior and the landing site need full rechecks.
    remove_active(x);
    {
      int32_t s = wrap(static_cast<int64_t>(x) - scan_limit_);
      for (int32_t i = 0; i < scan_limit_; ++i) {
        if (s >= 0 && occ_[s] && slot_[static_cast<size_t>(s)] < 0) add_active(s);
        if (++s == L_) s = ring_ ? 0 : s;
      }
    }
    for (int32_t j = 1; j <= m; ++j) {
      const int32_t s = wrap(static_cast<int64_t>(x) + j);
      if (s < L_) refresh_site(s);
    }
    time_ += ev.dt;
    ++events_;
  }

  /// One exact Gillespie step; nullopt signals deadlock (absorbing state).
  std::optional<StepEvent> step() {
    auto ev = prepare_step();
    if (!ev) return std::nullopt;
    commit(*ev);
    return StepEvent{ev->dt, PushMove{ev->site, ev->extent}};
  }

  /// Active sites recomputed from scratch (test support).
  std::vector<int32_t> active_sites_sorted() const {
    auto s = active_;
    std::sort(s.begin(), s.end());
    return s;
  }
  std::vector<int32_t> recompute_active_sorted() const {
    std::vector<int32_t> out;
    for (int64_t s = 0; s < L_; ++s)
      if (config_.occ[static_cast<size_t>(s)] && extent_of(static_cast<int32_t>(s)) > 0)
        out.push_back(static_cast<int32_t>(s));
    return out;
  }

 private:
  int32_t wrap(int64_t i) const {
    if (ring_) {
      if (i >= L_) i -= L_;
      if (i < 0) i += L_;
    }
    return static_cast<int32_t>(i);
  }

  // First-vacancy distance from s, or 0 when the move is blocked.
  int32_t extent_of(int32_t s) const {
    if (ring_) {
      int32_t j = s;
      for (int32_t m = 1; m <= scan_limit_; ++m) {
        if (++j == L_) j = 0;
        if (!occ_[j]) return m;
      }
    } else {
      const int32_t limit =
          static_cast<int32_t>(std::min<int64_t>(k_, L_ - 1 - s));
      for (int32_t m = 1; m <= limit; ++m)
        if (!occ_[s + m]) return m;
    }
    return 0;
  }

  void add_active(int32_t s) {
    slot_[static_cast<size_t>(s)] = static_cast<int32_t>(active_.size());
    active_.push_back(s);
  }

  void remove_active(int32_t s) {
    const int32_t slot = slot_[static_cast<size_t>(s)];
    const int32_t last = active_.back();
    active_[static_cast<size_t>(slot)] = last;
    slot_[static_cast<size_t>(last)] = slot;
    active_.pop_back();
    slot_[static_cast<size_t>(s)] = -1;
  }

  void refresh_site(int32_t s) {
    if (s < 0 || s >= L_) return;
    const bool active = occ_[s] && extent_of(s) > 0;
    const int32_t slot = slot_[static_cast<size_t>(s)];
    if (active && slot < 0)
      add_active(s);
    else if (!active && slot >= 0)
      remove_active(s);
  }

  Configuration config_;
  Philox rng_;
  int k_;
  int64_t L_;
  uint8_t* occ_ = nullptr;
  bool ring_ = true;
  int32_t scan_limit_ = 0;
  double time_ = 0.0;
  uint64_t events_ = 0;
  std::vector<int32_t> active_;
  std::vector<int32_t> slot_;
  int32_t tagged_site_ = -1;
  int64_t tagged_coordinate_ = 0;
};

// ---------------------------------------------------------------------------
// Whole-run drivers
// ---------------------------------------------------------------------------

/// Upper bound on the information-propagation speed used by the segment
/// horizon check: max |G_k'| on [0, 1] = k(k+1)/2.
inline double max_speed_bound(int k) { return 0.5 * k * (k + 1.0); }

/// A segment run is trusted on a measured coordinate region only when both
/// boundaries stay outside the information cone for the whole horizon.
inline void check_segment_horizon(int64_t segment_lo, int64_t segment_hi,
                                  double measured_lo, double measured_hi, int k,
                                  double horizon) {
  const double needed = max_speed_bound(k) * horizon + 10.0 * std::sqrt(std::max(horizon, 0.0));
  if (measured_lo - static_cast<double>(segment_lo) < needed ||
      static_cast<double>(segment_hi) - measured_hi < needed)
    throw HorizonViolation("segment horizon check failed: boundary inside information cone");
}

struct EventRecord {
  double time = 0.0;
  int64_t source = 0;  // site index of the mover
  int32_t extent = 0;
};

struct RunParams {
  int k = 2;
  Topology topology = Topology::ring;
  int64_t ring_size = 0;
  int64_t segment_lo = 0, segment_hi = -1;  // inclusive coordinates
  InitialMeasure initial;
  std::vector<double> snapshot_times;
  uint64_t seed = 0;
  uint64_t stream = 0;
  std::optional<std::pair<double, double>> measured_region;  // horizon check
  std::optional<std::pair<double, double>> current_window;   // (t0, t1]
  bool record_events = false;
  std::optional<int64_t> tag_coordinate;
  std::vector<double> tagged_sample_times;
};

struct RunResult {
  std::vector<Configuration> snapshots;
  uint64_t event_count = 0;
  bool deadlocked = false;
  double final_time = 0.0;
  double crossing_sum = 0.0;  // sum of push extents inside current_window
  std::vector<EventRecord> events;
  std::vector<double> tagged_times;
  std::vector<int64_t> tagged_positions;
};

/// Run one replica to cover every requested output.  Deterministic given
/// (seed, stream) and the parameters.
inline RunResult run(const RunParams& p) {
  if (!std::is_sorted(p.snapshot_times.begin(), p.snapshot_times.end()))
    throw std::invalid_argument("run: snapshot times must be nondecreasing");
  if (!std::is_sorted(p.tagged_sample_times.begin(), p.tagged_sample_times.end()))
    throw std::invalid_argument("run: tagged sample times must be nondecreasing");
  const int64_t L = p.topology == Topology::ring ? p.ring_size
                                                 : p.segment_hi - p.segment_lo + 1;
  double horizon = 0.0;
  for (double t : p.snapshot_times) horizon = std::max(horizon, t);
  for (double t : p.tagged_sample_times) horizon = std::max(horizon, t);
  if (p.current_window) horizon = std::max(horizon, p.current_window->second);
  if (p.topology == Topology::segment && p.measured_region)
    check_segment_horizon(p.segment_lo, p.segment_hi, p.measured_region->first,
                          p.measured_region->second, p.k, horizon);

  Philox rng(p.seed, p.stream);
  Configuration cfg = sample_initial(p.initial, p.topology, L, p.segment_lo, rng);
  SimState st(std::move(cfg), p.k, rng);
  if (p.tag_coordinate) st.set_tagged(st.config().index_of(*p.tag_coordinate));

  RunResult res;
  size_t snap_i = 0, tag_i = 0;
  const auto flush_until = [&](double t_next) {
    while (snap_i < p.snapshot_times.size() && p.snapshot_times[snap_i] < t_next) {
      res.snapshots.push_back(st.config());
      ++snap_i;
    }
    while (tag_i < p.tagged_sample_times.size() &&
           p.tagged_sample_times[tag_i] < t_next) {
      res.tagged_times.push_back(p.tagged_sample_times[tag_i]);
      res.tagged_positions.push_back(st.tagged_coordinate());
      ++tag_i;
    }
  };
  const auto outputs_pending = [&]() {
    return snap_i < p.snapshot_times.size() || tag_i < p.tagged_sample_times.size() ||
           (p.current_window && st.time() <= p.current_window->second);
  };

  while (outputs_pending()) {
    auto ev = st.prepare_step();
    if (!ev) {
      // Absorbing state (e.g. fully occupied ring): remaining outputs see
      // the frozen configuration.
      flush_until(std::numeric_limits<double>::infinity());
      res.deadlocked = true;
      break;
    }
    const double t_next = st.time() + ev->dt;
    flush_until(t_next);
    st.commit(*ev);
    if (p.current_window && t_next > p.current_window->first &&
        t_next <= p.current_window->second)
      res.crossing_sum += ev->extent;
    if (p.record_events) res.events.push_back({t_next, ev->site, ev->extent});
  }
  res.event_count = st.events();
  res.final_time = st.time();
  return res;
}

// ---------------------------------------------------------------------------
// Tagged pushing particle
// ---------------------------------------------------------------------------

/// Instantaneous drift of the tagged pushing particle at occupied site x for
/// k = 2: own jump, push on the right neighbor, or being pushed from the
/// left -- the three channels that move the tag one site right.
inline double tagged_drift(const Configuration& cfg, int64_t x) {
  if (!cfg.occ[static_cast<size_t>(x)])
    throw std::invalid_argument("tagged_drift: site not occupied");
  const double r1 = occupancy_at(cfg, x + 1);
  const double r2 = occupancy_at(cfg, x + 2);
  const double l1 = occupancy_at(cfg, x - 1);
  return (1.0 - r1) + l1 * (1.0 - r1) + r1 * (1.0 - r2);
}

struct TaggedTrajectory {
  std::vector<double> times;
  std::vector<int64_t> positions;  // lattice coordinate of the tag
  double alpha = 0.0;
  uint64_t seed = 0, stream = 0;
};

struct TaggedRunParams {
  int k = 2;
  double alpha = 0.5;
  double horizon = 1000.0;
  int samples = 101;  // evenly spaced in (0, horizon], plus t = 0
  uint64_t seed = 0;
  uint64_t stream = 0;
};

/// Law-of-large-numbers run: tagged pushing particle in a Bernoulli(alpha)
/// sea conditioned to hold a particle at the origin.  The segment is sized
/// so the tag (drift rate <= k) never sees a boundary within the horizon.
inline TaggedTrajectory run_tagged(const TaggedRunParams& p) {
  const double T = p.horizon;
  const double margin = 10.0 * std::sqrt(std::max(T, 0.0));
  const double v = max_speed_bound(p.k);
  RunParams rp;
  rp.k = p.k;
  rp.topology = Topology::segment;
  rp.segment_lo = static_cast<int64_t>(std::floor(-(v * T + margin) - 2.0));
  rp.segment_hi = static_cast<int64_t>(std::ceil(p.k * T + v * T + margin + 2.0));
  rp.initial = InitialMeasure::palm_bernoulli(p.alpha, 0);
  rp.seed = p.seed;
  rp.stream = p.stream;
  rp.measured_region = std::make_pair(0.0, static_cast<double>(p.k) * T);
  rp.tag_coordinate = 0;
  rp.tagged_sample_times.push_back(0.0);
  for (int i = 1; i <= p.samples; ++i)
    rp.tagged_sample_times.push_back(T * i / p.samples);
  const RunResult rr = run(rp);
  TaggedTrajectory tr;
  tr.times = rr.tagged_times;
  tr.positions = rr.tagged_positions;
  tr.alpha = p.alpha;
  tr.seed = p.seed;
  tr.stream = p.stream;
  return tr;
}

// ---------------------------------------------------------------------------
// Coupled (basic-coupling) run
// ---------------------------------------------------------------------------

struct CoupledRunResult {
  std::vector<Configuration> lower_snapshots, upper_snapshots;
  std::vector<uint8_t> ordered_at_snapshot;
  bool ordered_everywhere = true;
  uint64_t event_count = 0;
};

/// Evolve two sitewise-ordered configurations under shared per-site Poisson
/// clocks: a ring at an occupied site fires that site's push in each
/// marginal independently.  Reports whether lower <= upper survived at every
/// snapshot.
inline CoupledRunResult coupled_run(const Configuration& lower,
                                    const Configuration& upper, int k,
                                    uint64_t seed, uint64_t stream,
                                    const std::vector<double>& snapshot_times) {
  if (lower.topology != upper.topology || lower.size() != upper.size() ||
      lower.origin != upper.origin)
    throw std::invalid_argument("coupled_run: mismatched lattices");
  const int64_t L = lower.size();
  for (int64_t i = 0; i < L; ++i)
    if (lower.occ[static_cast<size_t>(i)] > upper.occ[static_cast<size_t>(i)])
      throw std::invalid_argument("coupled_run: initial configurations not ordered");
  if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end()))
    throw std::invalid_argument("coupled_run: snapshot times must be nondecreasing");

  Configuration lo = lower, up = upper;
  Philox rng(seed, stream);
  CoupledRunResult res;
  const auto fire = [&](Configuration& cfg, int64_t site) {
    if (!cfg.occ[static_cast<size_t>(site)]) return;
    const auto m = first_vacancy(cfg, site, k);
    if (!m) return;
    int64_t target = site + *m;
    if (cfg.topology == Topology::ring && target >= L) target -= L;
    cfg.occ[static_cast<size_t>(site)] = 0;
    cfg.occ[static_cast<size_t>(target)] = 1;
  };
  double t = 0.0;
  size_t snap_i = 0;
  while (snap_i < snapshot_times.size()) {
    const double dt = rng.exponential(static_cast<double>(L));
    const int64_t site = static_cast<int64_t>(rng.uniform_index(static_cast<uint64_t>(L)));
    const double t_next = t + dt;
    while (snap_i < snapshot_times.size() && snapshot_times[snap_i] < t_next) {
      bool ordered = true;
      for (int64_t i = 0; i < L; ++i)
        if (lo.occ[static_cast<size_t>(i)] > up.occ[static_cast<size_t>(i)]) {
          ordered = false;
          break;
        }
      res.lower_snapshots.push_back(lo);
      res.upper_snapshots.push_back(up);
      res.ordered_at_snapshot.push_back(ordered);
      res.ordered_everywhere = res.ordered_everywhere && ordered;
      ++snap_i;
    }
    t = t_next;
    fire(lo, site);
    fire(up, site);
    ++res.event_count;
  }
  return res;
}

}  // namespace kstep
