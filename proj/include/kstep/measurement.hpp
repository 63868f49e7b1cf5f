// Estimators that turn raw snapshots and trajectories into quantities
// comparable with the hydrodynamic solution: windowed density profiles in
// v = x/t coordinates, Cesaro time averages, bond currents, the tagged
// law-of-large-numbers estimate, two-point correlations, and the exact
// small-ring stationarity oracle used to validate the event loop.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kstep/engine.hpp"
#include "kstep/riemann.hpp"

namespace kstep {

struct ProfileEstimate {
  std::vector<double> velocity;
  std::vector<double> mean;
  std::vector<double> stderr_;
  double window_halfwidth = 0.0;  // in v units; window spans [vt - wt, vt + wt]
  int replicas = 0;
  double time = 0.0;
};

/// Windowed empirical density at velocities v_i: occupancy averaged over the
/// sites within [v_i t - w t, v_i t + w t] per replica, then across replicas
/// (mean and standard error).
inline ProfileEstimate empirical_profile(const std::vector<Configuration>& snapshots,
                                         double t, const std::vector<double>& grid,
                                         double window_halfwidth) {
  if (snapshots.empty()) throw std::invalid_argument("empirical_profile: no snapshots");
  if (!(t > 0.0)) throw std::invalid_argument("empirical_profile: time must be positive");
  const Configuration& first = snapshots.front();
  for (const auto& c : snapshots)
    if (c.size() != first.size() || c.origin != first.origin ||
        c.topology != first.topology)
      throw std::invalid_argument("empirical_profile: mismatched snapshot lattices");

  ProfileEstimate est;
  est.velocity = grid;
  est.window_halfwidth = window_halfwidth;
  est.replicas = static_cast<int>(snapshots.size());
  est.time = t;
  const int64_t L = first.size();
  for (double v : grid) {
    const int64_t lo = static_cast<int64_t>(std::ceil(v * t - window_halfwidth * t));
    const int64_t hi = static_cast<int64_t>(std::floor(v * t + window_halfwidth * t));
    if (hi < lo) throw std::invalid_argument("empirical_profile: empty window");
    if (first.topology == Topology::segment &&
        (!first.contains_coordinate(lo) || !first.contains_coordinate(hi)))
      throw std::out_of_range("empirical_profile: window outside lattice");
    double sum = 0.0, sumsq = 0.0;
    for (const auto& cfg : snapshots) {
      int64_t occ = 0;
      for (int64_t c = lo; c <= hi; ++c) {
        int64_t i = cfg.index_of(c);
        if (cfg.topology == Topology::ring) {
          i %= L;
          if (i < 0) i += L;
        }
        occ += cfg.occ[static_cast<size_t>(i)];
      }
      const double m = static_cast<double>(occ) / static_cast<double>(hi - lo + 1);
      sum += m;
      sumsq += m * m;
    }
    const double n = static_cast<double>(snapshots.size());
    const double mean = sum / n;
    double se = 0.0;
    if (snapshots.size() > 1) {
      const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
      se = std::sqrt(var / n);
    }
    est.mean.push_back(mean);
    est.stderr_.push_back(se);
  }
  return est;
}

/// Cesaro (time-average) density along the ray x = v t: the mean of
/// eta_t([v t]) over the supplied (t, snapshot) samples.
inline double cesaro_profile(const std::vector<std::pair<double, Configuration>>& samples,
                             double v) {
  if (samples.empty()) throw std::invalid_argument("cesaro_profile: no samples");
  double sum = 0.0;
  for (const auto& [t, cfg] : samples) {
    const int64_t c = static_cast<int64_t>(std::floor(v * t));
    const int64_t L = cfg.size();
    int64_t i = cfg.index_of(c);
    if (cfg.topology == Topology::ring) {
      i %= L;
      if (i < 0) i += L;
    } else if (i < 0 || i >= L) {
      throw std::out_of_range("cesaro_profile: ray leaves the lattice");
    }
    sum += cfg.occ[static_cast<size_t>(i)];
  }
  return sum / static_cast<double>(samples.size());
}

/// Particles per unit time across one marked bond (site b -> b + 1), from a
/// recorded event log: a push from x with extent m carries exactly one
/// particle over each of the m bonds it spans.
inline double bond_current(const std::vector<EventRecord>& events, int64_t bond,
                           double t0, double t1, Topology topology, int64_t L) {
  if (!(t1 > t0)) throw std::invalid_argument("bond_current: empty interval");
  int64_t crossings = 0;
  for (const auto& ev : events) {
    if (ev.time <= t0 || ev.time > t1) continue;
    int64_t d = bond - ev.source;
    if (topology == Topology::ring) {
      d %= L;
      if (d < 0) d += L;
    }
    if (d >= 0 && d < ev.extent) ++crossings;
  }
  return static_cast<double>(crossings) / (t1 - t0);
}

/// Space-time averaged current per bond on a ring: total crossings (sum of
/// push extents) in the accumulation window divided by L * duration.
inline double mean_current(const RunResult& rr, int64_t L, double t0, double t1) {
  if (!(t1 > t0)) throw std::invalid_argument("mean_current: empty interval");
  return rr.crossing_sum / (static_cast<double>(L) * (t1 - t0));
}

struct LlnEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  double ci99_halfwidth = 0.0;
  int replicas = 0;
};

/// Mean and normal-approximation confidence interval of Y(T)/T across
/// replica trajectories.
inline LlnEstimate lln_estimate(const std::vector<TaggedTrajectory>& trajectories) {
  if (trajectories.size() < 2)
    throw std::invalid_argument("lln_estimate: need at least 2 trajectories");
  std::vector<double> speeds;
  for (const auto& tr : trajectories) {
    if (tr.times.size() < 2 || !(tr.times.back() > 0.0))
      throw std::invalid_argument("lln_estimate: trajectory too short");
    speeds.push_back(
        static_cast<double>(tr.positions.back() - tr.positions.front()) /
        tr.times.back());
  }
  const double n = static_cast<double>(speeds.size());
  double sum = 0.0, sumsq = 0.0;
  for (double s : speeds) {
    sum += s;
    sumsq += s * s;
  }
  LlnEstimate est;
  est.replicas = static_cast<int>(speeds.size());
  est.mean = sum / n;
  const double var = std::max(0.0, (sumsq - n * est.mean * est.mean) / (n - 1.0));
  est.stderr_ = std::sqrt(var / n);
  est.ci99_halfwidth = 2.5758293035489004 * est.stderr_;
  return est;
}

/// Covariance of (eta(x), eta(x + lag)) pooled over the window sites and
/// replicas; vanishes under a product (local equilibrium) law.
inline double two_point_correlation(const std::vector<Configuration>& snapshots,
                                    double t, double v_center, double halfwidth_v,
                                    int lag) {
  if (snapshots.empty())
    throw std::invalid_argument("two_point_correlation: no snapshots");
  const Configuration& first = snapshots.front();
  const int64_t L = first.size();
  const int64_t lo = static_cast<int64_t>(std::ceil(v_center * t - halfwidth_v * t));
  const int64_t hi = static_cast<int64_t>(std::floor(v_center * t + halfwidth_v * t));
  if (hi < lo) throw std::invalid_argument("two_point_correlation: empty window");
  if (first.topology == Topology::segment &&
      (!first.contains_coordinate(lo) || !first.contains_coordinate(hi + lag)))
    throw std::out_of_range("two_point_correlation: window outside lattice");
  double s1 = 0.0, s2 = 0.0, s12 = 0.0;
  int64_t count = 0;
  for (const auto& cfg : snapshots) {
    for (int64_t c = lo; c <= hi; ++c) {
      const auto at = [&](int64_t coord) {
        int64_t i = cfg.index_of(coord);
        if (cfg.topology == Topology::ring) {
          i %= L;
          if (i < 0) i += L;
        }
        return static_cast<double>(cfg.occ[static_cast<size_t>(i)]);
      };
      const double a = at(c), b = at(c + lag);
      s1 += a;
      s2 += b;
      s12 += a * b;
      ++count;
    }
  }
  const double n = static_cast<double>(count);
  return s12 / n - (s1 / n) * (s2 / n);
}

// ---------------------------------------------------------------------------
// Exact small-ring oracle
// ---------------------------------------------------------------------------

struct OracleReport {
  int lattice = 0;
  int k = 0;
  int particles = 0;
  uint64_t num_states = 0;
  double stationarity_residual = 0.0;  // max |(uniform . Q)_j|
  double bond_current = 0.0;           // exact expected crossings of one bond
  double event_rate_per_site = 0.0;    // exact expected active count / L
};

/// Enumerate every ring configuration with n particles on L <= 10 sites,
/// build the exact pushing-dynamics rate matrix, and verify that the
/// uniform distribution on the sector is stationary.  Works directly on
/// bitmasks, independent of the event-loop implementation it validates.
inline OracleReport stationarity_oracle(int L, int k, int n) {
  if (L < 1 || L > 10) throw std::invalid_argument("stationarity_oracle: need 1 <= L <= 10");
  if (n < 0 || n > L) throw std::invalid_argument("stationarity_oracle: bad particle count");
  const uint32_t full = (1u << L) - 1u;
  std::vector<uint32_t> states;
  std::vector<int32_t> index(full + 1, -1);
  for (uint32_t m = 0; m <= full; ++m)
    if (__builtin_popcount(m) == n) {
      index[m] = static_cast<int32_t>(states.size());
      states.push_back(m);
    }
  const size_t N = states.size();
  // Column sums of Q under the uniform row vector; built move by move.
  std::vector<double> colsum(N, 0.0);
  double current_sum = 0.0;  // moves crossing bond 0 (site 0 -> 1), all states
  double move_sum = 0.0;     // active count summed over states
  for (size_t si = 0; si < N; ++si) {
    const uint32_t s = states[si];
    for (int x = 0; x < L; ++x) {
      if (!(s >> x & 1u)) continue;
      int m = 0;
      for (int j = 1; j <= std::min(k, L - 1); ++j) {
        if (!(s >> ((x + j) % L) & 1u)) {
          m = j;
          break;
        }
      }
      if (m == 0) continue;
      const uint32_t target = (s & ~(1u << x)) | (1u << ((x + m) % L));
      colsum[static_cast<size_t>(index[target])] += 1.0;
      colsum[si] -= 1.0;
      move_sum += 1.0;
      // Does this push carry a particle over bond 0, i.e. from site 0 to 1?
      const int offset = ((0 - x) % L + L) % L;
      if (offset < m) current_sum += 1.0;
    }
  }
  OracleReport rep;
  rep.lattice = L;
  rep.k = k;
  rep.particles = n;
  rep.num_states = N;
  double worst = 0.0;
  for (double c : colsum) worst = std::max(worst, std::abs(c) / static_cast<double>(N));
  rep.stationarity_residual = worst;
  rep.bond_current = current_sum / static_cast<double>(N);
  rep.event_rate_per_site =
      move_sum / static_cast<double>(N) / static_cast<double>(L);
  return rep;
}

// ---------------------------------------------------------------------------
// Profile vs exact solution
// ---------------------------------------------------------------------------

struct ComparisonReport {
  double sup_error = 0.0;
  double l1_error = 0.0;
  std::vector<double> excluded_velocities;  // discontinuity locations
  double exclusion_radius = 0.0;
  int points_used = 0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Sup and L1 distance between a measured profile and the exact solution,
/// restricted to grid points farther than the exclusion radius from every
/// discontinuity velocity.
inline ComparisonReport compare_to_solution(const ProfileEstimate& profile,
                                            const SelfSimilarSolution& sol,
                                            double exclusion_radius,
                                            double tolerance) {
  ComparisonReport rep;
  rep.exclusion_radius = exclusion_radius;
  rep.tolerance = tolerance;
  for (const auto& d : sol.discontinuities) rep.excluded_velocities.push_back(d.velocity);
  std::vector<size_t> used;
  for (size_t i = 0; i < profile.velocity.size(); ++i) {
    bool excluded = false;
    for (double dv : rep.excluded_velocities)
      if (std::abs(profile.velocity[i] - dv) <= exclusion_radius) {
        excluded = true;
        break;
      }
    if (!excluded) used.push_back(i);
  }
  if (used.empty()) throw std::invalid_argument("compare_to_solution: empty continuity set");
  rep.points_used = static_cast<int>(used.size());
  for (size_t j = 0; j < used.size(); ++j) {
    const size_t i = used[j];
    const double err =
        std::abs(profile.mean[i] - evaluate(sol, profile.velocity[i], 1.0));
    rep.sup_error = std::max(rep.sup_error, err);
    // Trapezoid-style weight from the neighboring used points.
    const double left = j > 0 ? profile.velocity[used[j - 1]] : profile.velocity[i];
    const double right =
        j + 1 < used.size() ? profile.velocity[used[j + 1]] : profile.velocity[i];
    rep.l1_error += err * 0.5 * (right - left);
  }
  rep.pass = rep.sup_error <= tolerance;
  return rep;
}

}  // namespace kstep
