// Lattice occupancy state and initial distributions.
//
// A Configuration is a 0/1 occupancy over sites 0..L-1, living either on a
// ring (periodic) or on a segment of lattice coordinates [origin, origin+L-1]
// with blocking boundaries.  Segment runs are only trusted inside a measured
// region kept far enough from the boundaries (see engine.hpp horizon check).

#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "kstep/rng.hpp"

namespace kstep {

enum class Topology { ring, segment };

struct Configuration {
  Topology topology = Topology::ring;
  int64_t origin = 0;  // lattice coordinate of site index 0 (0 on a ring)
  std::vector<uint8_t> occ;

  int64_t size() const { return static_cast<int64_t>(occ.size()); }
  int64_t coordinate(int64_t index) const { return origin + index; }
  int64_t index_of(int64_t coordinate) const { return coordinate - origin; }
  bool contains_coordinate(int64_t c) const {
    return c >= origin && c < origin + size();
  }
  int64_t particle_count() const {
    return std::accumulate(occ.begin(), occ.end(), int64_t{0});
  }
  bool operator==(const Configuration&) const = default;
};

struct InitialMeasure {
  enum class Kind { bernoulli, step, explicit_bits, palm_bernoulli };
  Kind kind = Kind::bernoulli;
  double alpha = 0.5;            // bernoulli / palm_bernoulli
  double lambda = 0.0, rho = 0.0;  // step: lambda at coordinates <= 0, rho above
  std::vector<uint8_t> bits;     // explicit_bits
  int64_t conditioned_coordinate = 0;  // palm: occupancy forced to 1 here

  static InitialMeasure bernoulli(double alpha) {
    InitialMeasure m;
    m.kind = Kind::bernoulli;
    m.alpha = alpha;
    return m;
  }
  static InitialMeasure step(double lambda, double rho) {
    InitialMeasure m;
    m.kind = Kind::step;
    m.lambda = lambda;
    m.rho = rho;
    return m;
  }
  static InitialMeasure explicit_bits(std::vector<uint8_t> bits) {
    InitialMeasure m;
    m.kind = Kind::explicit_bits;
    m.bits = std::move(bits);
    return m;
  }
  static InitialMeasure palm_bernoulli(double alpha, int64_t coordinate = 0) {
    InitialMeasure m;
    m.kind = Kind::palm_bernoulli;
    m.alpha = alpha;
    m.conditioned_coordinate = coordinate;
    return m;
  }
};

/// Draw an initial configuration.  Sites are sampled in index order so a
/// given (seed, stream) reproduces the same configuration.
inline Configuration sample_initial(const InitialMeasure& m, Topology topology,
                                    int64_t L, int64_t origin, Philox& rng) {
  if (L <= 0) throw std::invalid_argument("sample_initial: empty lattice");
  Configuration cfg;
  cfg.topology = topology;
  cfg.origin = topology == Topology::ring ? 0 : origin;
  cfg.occ.assign(static_cast<size_t>(L), 0);
  switch (m.kind) {
    case InitialMeasure::Kind::bernoulli:
      for (int64_t i = 0; i < L; ++i) cfg.occ[i] = rng.bernoulli(m.alpha);
      break;
    case InitialMeasure::Kind::step:
      for (int64_t i = 0; i < L; ++i) {
        const double density = cfg.coordinate(i) <= 0 ? m.lambda : m.rho;
        cfg.occ[i] = rng.bernoulli(density);
      }
      break;
    case InitialMeasure::Kind::explicit_bits:
      if (static_cast<int64_t>(m.bits.size()) != L)
        throw std::invalid_argument("sample_initial: explicit bits size mismatch");
      cfg.occ = m.bits;
      break;
    case InitialMeasure::Kind::palm_bernoulli: {
      for (int64_t i = 0; i < L; ++i) cfg.occ[i] = rng.bernoulli(m.alpha);
      if (!cfg.contains_coordinate(m.conditioned_coordinate))
        throw std::invalid_argument("sample_initial: conditioned site outside lattice");
      cfg.occ[cfg.index_of(m.conditioned_coordinate)] = 1;
      break;
    }
  }
  return cfg;
}

}  // namespace kstep
