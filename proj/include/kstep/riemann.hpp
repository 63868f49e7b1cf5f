// Exact self-similar entropy solutions of u_t + G_k(u)_x = 0 with step
// initial data (density lambda left of the origin, rho right of it).
//
// Because G_k is convex below its inflection and concave above it, the
// solution falls into one of six shapes: rarefaction fans on either branch,
// entropy shocks in either orientation, and two contact-discontinuity
// shapes where a fan ends in a jump whose speed is tangent to the flux.
// Two independent constructions are provided: the six-case classifier
// (solve) and a generic convex/concave envelope construction
// (solve_general_envelope); they must agree.

#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "kstep/flux.hpp"

namespace kstep {

struct RiemannProblem {
  double lambda = 0.0;  // density for x <= 0
  double rho = 0.0;     // density for x > 0
  FluxSpec spec = FluxSpec::totally_asymmetric(2);
};

enum class CaseLabel {
  degenerate = 0,  // lambda == rho
  case1 = 1,       // lambda < rho, both below inflection: fan (lower branch)
  case2 = 2,       // rho < lambda < star_upper(rho): entropy shock
  case3 = 3,       // rho < star_upper(rho) < lambda: fan + contact
  case4 = 4,       // inflection < rho < lambda: fan (upper branch)
  case5 = 5,       // rho > lambda > star_lower(rho): entropy shock
  case6 = 6,       // rho > star_lower(rho) > lambda: fan + contact
};

enum class DiscontinuityKind { shock, contact };

struct Discontinuity {
  double velocity = 0.0;
  double u_left = 0.0;
  double u_right = 0.0;
  DiscontinuityKind kind = DiscontinuityKind::shock;
};

struct Segment {
  bool is_fan = false;
  double value = 0.0;                  // constant segments
  Branch branch = Branch::lower;       // fan segments
  static Segment constant(double v) { return {false, v, Branch::lower}; }
  static Segment fan(Branch b) { return {true, 0.0, b}; }
};

struct ClassifyResult {
  CaseLabel label = CaseLabel::degenerate;
  bool near_degenerate = false;  // lambda or rho within 1e-9 of the inflection
};

/// Piecewise self-similar solution u(x, t) = u(x/t, 1).
struct SelfSimilarSolution {
  FluxSpec spec;
  double lambda = 0.0, rho = 0.0;
  CaseLabel case_label = CaseLabel::degenerate;
  bool near_degenerate = false;
  std::vector<double> breakpoints;          // strictly increasing
  std::vector<Segment> segments;            // breakpoints.size() + 1 entries
  std::vector<Discontinuity> discontinuities;
};

/// Decide which of the six solution shapes applies.
inline ClassifyResult classify(const RiemannProblem& pb) {
  const double lambda = detail::clamp_domain(pb.lambda, 0.0, 1.0, "classify(lambda)");
  const double rho = detail::clamp_domain(pb.rho, 0.0, 1.0, "classify(rho)");
  ClassifyResult res;
  if (lambda == rho) {
    res.label = CaseLabel::degenerate;
    return res;
  }
  const auto infl = inflection(pb.spec);
  if (!infl) {
    // k = 1: concave flux, classic two-shape picture.
    res.label = lambda < rho ? CaseLabel::case5 : CaseLabel::case4;
    return res;
  }
  res.near_degenerate =
      std::abs(lambda - *infl) < 1e-9 || std::abs(rho - *infl) < 1e-9;
  if (lambda < rho) {
    if (rho < *infl) {
      res.label = CaseLabel::case1;
    } else {
      const StarPoint rs = star_lower(pb.spec, rho);
      // An unreachable (negative) star point means no density in [0, 1]
      // can sit below it: the jump case.
      res.label = (rs.below_range || lambda >= rs.value) ? CaseLabel::case5
                                                         : CaseLabel::case6;
    }
  } else {
    if (rho > *infl) {
      res.label = CaseLabel::case4;
    } else {
      const double rs = star_upper(pb.spec, rho);
      res.label = lambda <= rs ? CaseLabel::case2 : CaseLabel::case3;
    }
  }
  return res;
}

namespace detail {

inline SelfSimilarSolution make_constant_solution(const RiemannProblem& pb,
                                                  const ClassifyResult& cls) {
  SelfSimilarSolution sol;
  sol.spec = pb.spec;
  sol.lambda = clamp_domain(pb.lambda, 0.0, 1.0, "solve(lambda)");
  sol.rho = clamp_domain(pb.rho, 0.0, 1.0, "solve(rho)");
  sol.case_label = cls.label;
  sol.near_degenerate = cls.near_degenerate;
  sol.segments.push_back(Segment::constant(sol.lambda));
  return sol;
}

}  // namespace detail

/// Construct the entropy solution from the six-case classification.
inline SelfSimilarSolution solve(const RiemannProblem& pb) {
  const ClassifyResult cls = classify(pb);
  const double lambda = detail::clamp_domain(pb.lambda, 0.0, 1.0, "solve(lambda)");
  const double rho = detail::clamp_domain(pb.rho, 0.0, 1.0, "solve(rho)");
  SelfSimilarSolution sol;
  sol.spec = pb.spec;
  sol.lambda = lambda;
  sol.rho = rho;
  sol.case_label = cls.label;
  sol.near_degenerate = cls.near_degenerate;
  if (cls.label == CaseLabel::degenerate) return detail::make_constant_solution(pb, cls);

  const auto H = [&](double u) { return characteristic_speed(pb.spec, u); };
  switch (cls.label) {
    case CaseLabel::case1: {
      sol.breakpoints = {H(lambda), H(rho)};
      sol.segments = {Segment::constant(lambda), Segment::fan(Branch::lower),
                      Segment::constant(rho)};
      break;
    }
    case CaseLabel::case4: {
      sol.breakpoints = {H(lambda), H(rho)};
      sol.segments = {Segment::constant(lambda), Segment::fan(Branch::upper),
                      Segment::constant(rho)};
      break;
    }
    case CaseLabel::case2:
    case CaseLabel::case5: {
      const double s = chord_slope(pb.spec, lambda, rho);
      sol.breakpoints = {s};
      sol.segments = {Segment::constant(lambda), Segment::constant(rho)};
      sol.discontinuities.push_back({s, lambda, rho, DiscontinuityKind::shock});
      break;
    }
    case CaseLabel::case3: {
      const double rs = star_upper(pb.spec, rho);
      sol.breakpoints = {H(lambda), H(rs)};
      sol.segments = {Segment::constant(lambda), Segment::fan(Branch::upper),
                      Segment::constant(rho)};
      sol.discontinuities.push_back({H(rs), rs, rho, DiscontinuityKind::contact});
      break;
    }
    case CaseLabel::case6: {
      const StarPoint rs = star_lower(pb.spec, rho);
      sol.breakpoints = {H(lambda), H(rs.value)};
      sol.segments = {Segment::constant(lambda), Segment::fan(Branch::lower),
                      Segment::constant(rho)};
      sol.discontinuities.push_back(
          {H(rs.value), rs.value, rho, DiscontinuityKind::contact});
      break;
    }
    default:
      break;
  }
  return sol;
}

/// Evaluate the solution at position x and time t > 0.  On a discontinuity
/// line the right limit is returned.
inline double evaluate(const SelfSimilarSolution& sol, double x, double t) {
  if (!(t > 0.0)) throw std::domain_error("evaluate: time must be positive");
  const double v = x / t;
  const auto it =
      std::upper_bound(sol.breakpoints.begin(), sol.breakpoints.end(), v);
  const size_t idx = static_cast<size_t>(it - sol.breakpoints.begin());
  const Segment& seg = sol.segments[idx];
  if (!seg.is_fan) return seg.value;
  return density_from_speed(sol.spec, v, seg.branch);
}

/// Max |jump speed - chord slope| over all discontinuities.
inline double check_rankine_hugoniot(const SelfSimilarSolution& sol) {
  double worst = 0.0;
  for (const Discontinuity& d : sol.discontinuities)
    worst = std::max(worst,
                     std::abs(d.velocity - chord_slope(sol.spec, d.u_left, d.u_right)));
  return worst;
}

/// Max entropy violation over all discontinuities: samples v strictly
/// between the jump values and returns max of S[u+; u-] - S[v; u-]
/// (<= 0 means the jump is admissible).
inline double check_condition_E(const SelfSimilarSolution& sol, int nsamples) {
  if (nsamples < 2) throw std::invalid_argument("check_condition_E: nsamples >= 2");
  double worst = 0.0;
  bool any = false;
  for (const Discontinuity& d : sol.discontinuities) {
    const double lo = std::min(d.u_left, d.u_right);
    const double hi = std::max(d.u_left, d.u_right);
    const double ref = chord_slope(sol.spec, d.u_right, d.u_left);
    for (int i = 1; i <= nsamples; ++i) {
      const double v = lo + (hi - lo) * i / (nsamples + 1);
      const double viol = ref - chord_slope(sol.spec, v, d.u_left);
      if (!any || viol > worst) worst = viol;
      any = true;
    }
  }
  return any ? worst : 0.0;
}

// ---------------------------------------------------------------------------
// Envelope construction
// ---------------------------------------------------------------------------

namespace detail {

struct EnvelopePiece {
  bool is_jump = false;
  double u0 = 0.0, u1 = 0.0;  // u0 < u1
};

// Convex hull pieces of the flux graph sampled on [a, b].  lower = true
// builds the greatest convex minorant, false the least concave majorant.
inline std::vector<EnvelopePiece> envelope_pieces(const FluxSpec& spec, double a,
                                                  double b, bool lower) {
  constexpr int kBase = 4096;
  std::vector<double> grid;
  grid.reserve(kBase + 600);
  for (int i = 0; i <= kBase; ++i) grid.push_back(a + (b - a) * i / kBase);
  // Extra resolution where the curvature changes sign: hull vertices near
  // the inflection are the ones tangency polishing starts from.
  if (const auto infl = inflection(spec); infl && *infl > a && *infl < b) {
    const double halfwidth = (b - a) / 64.0;
    const double lo = std::max(a, *infl - halfwidth);
    const double hi = std::min(b, *infl + halfwidth);
    for (int i = 0; i <= 512; ++i) grid.push_back(lo + (hi - lo) * i / 512);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  }

  const int n = static_cast<int>(grid.size());
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = flux(spec, grid[i]);

  // Andrew monotone chain over the sampled graph; sign selects which hull.
  const double orient = lower ? 1.0 : -1.0;
  std::vector<int> hull;
  hull.reserve(n);
  for (int i = 0; i < n; ++i) {
    while (hull.size() >= 2) {
      const int p = hull[hull.size() - 2], q = hull[hull.size() - 1];
      const double cross = (grid[q] - grid[p]) * (g[i] - g[p]) -
                           (g[q] - g[p]) * (grid[i] - grid[p]);
      if (orient * cross <= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(i);
  }

  // Hull edges either follow the graph (coincidence -> fan) or cut across
  // it (jump).  An edge is a jump when the graph departs from the chord by
  // more than hull roundoff on some interior sample.
  constexpr double kDeviationTol = 1e-10;
  std::vector<EnvelopePiece> pieces;
  for (size_t e = 0; e + 1 < hull.size(); ++e) {
    const int i0 = hull[e], i1 = hull[e + 1];
    bool jump = false;
    if (i1 - i0 > 1) {
      const double slope = (g[i1] - g[i0]) / (grid[i1] - grid[i0]);
      for (int i = i0 + 1; i < i1; ++i) {
        const double chord = g[i0] + slope * (grid[i] - grid[i0]);
        if (std::abs(g[i] - chord) > kDeviationTol) {
          jump = true;
          break;
        }
      }
    }
    if (jump) {
      pieces.push_back({true, grid[i0], grid[i1]});
    } else if (!pieces.empty() && !pieces.back().is_jump) {
      pieces.back().u1 = grid[i1];  // extend the running fan
    } else {
      pieces.push_back({false, grid[i0], grid[i1]});
    }
  }

  // Polish jump endpoints that lie strictly inside (a, b): such an endpoint
  // w is a tangency point, S[d; w] = H(w) with d the opposite endpoint.
  // (A jump between two interior tangencies would need two inflections
  // between its endpoints; the k-step family has one, so it cannot occur.)
  const double h = (b - a) / kBase;
  for (auto& piece : pieces) {
    if (!piece.is_jump) continue;
    const bool left_interior = piece.u0 > a + 0.5 * h;
    const bool right_interior = piece.u1 < b - 0.5 * h;
    if (left_interior == right_interior) continue;
    const double d = left_interior ? piece.u1 : piece.u0;
    const double w0 = left_interior ? piece.u0 : piece.u1;
    const auto f = [&](double w) { return tangency_defect(spec, d, w); };
    for (int widen = 1; widen <= 64; widen *= 2) {
      double wa = std::max(a, w0 - widen * h), wb = std::min(b, w0 + widen * h);
      const double fa = f(wa), fb = f(wb);
      if ((fa < 0.0) != (fb < 0.0)) {
        const double w = refine_root(f, wa, wb, fa, fb, 1e-14);
        (left_interior ? piece.u0 : piece.u1) = w;
        break;
      }
    }
  }
  // Fans adjacent to a polished jump share the tangency endpoint.
  for (size_t i = 0; i + 1 < pieces.size(); ++i) {
    if (pieces[i].is_jump && !pieces[i + 1].is_jump)
      pieces[i + 1].u0 = pieces[i].u1;
    if (!pieces[i].is_jump && pieces[i + 1].is_jump)
      pieces[i].u1 = pieces[i + 1].u0;
  }
  return pieces;
}

}  // namespace detail

/// Entropy solution built from the convex envelope of the flux between the
/// data values: the greatest convex minorant when lambda < rho, the least
/// concave majorant when lambda > rho.  Envelope pieces that follow the
/// graph become fans; straight cuts become discontinuities.
inline SelfSimilarSolution solve_general_envelope(const RiemannProblem& pb) {
  const ClassifyResult cls = classify(pb);
  const double lambda = detail::clamp_domain(pb.lambda, 0.0, 1.0, "solve(lambda)");
  const double rho = detail::clamp_domain(pb.rho, 0.0, 1.0, "solve(rho)");
  if (lambda == rho) return detail::make_constant_solution(pb, cls);

  SelfSimilarSolution sol;
  sol.spec = pb.spec;
  sol.lambda = lambda;
  sol.rho = rho;
  sol.case_label = cls.label;
  sol.near_degenerate = cls.near_degenerate;

  const bool increasing = lambda < rho;  // data orientation
  const double a = std::min(lambda, rho), b = std::max(lambda, rho);
  auto pieces = detail::envelope_pieces(pb.spec, a, b, increasing);
  // Velocity order: envelope slopes increase with u on the convex minorant
  // and decrease with u on the concave majorant, so for decreasing data the
  // walk runs from the high-density end downwards.
  if (!increasing) std::reverse(pieces.begin(), pieces.end());

  const auto H = [&](double u) { return characteristic_speed(pb.spec, u); };
  const Branch fan_branch = increasing ? Branch::lower : Branch::upper;

  sol.segments.push_back(Segment::constant(lambda));
  for (const auto& piece : pieces) {
    const double from = increasing ? piece.u0 : piece.u1;  // left in velocity
    const double to = increasing ? piece.u1 : piece.u0;
    if (piece.is_jump) {
      const double s = chord_slope(pb.spec, piece.u0, piece.u1);
      const bool tangent = std::abs(s - H(piece.u0)) < 1e-9 ||
                           std::abs(s - H(piece.u1)) < 1e-9;
      sol.breakpoints.push_back(s);
      sol.segments.push_back(Segment::constant(to));
      sol.discontinuities.push_back(
          {s, from, to,
           tangent ? DiscontinuityKind::contact : DiscontinuityKind::shock});
    } else {
      sol.breakpoints.push_back(H(from));
      sol.segments.push_back(Segment::fan(fan_branch));
      sol.breakpoints.push_back(H(to));
      sol.segments.push_back(Segment::constant(to));
    }
  }

  // Drop zero-width segments produced where a fan ends exactly at a jump.
  std::vector<double> bps;
  std::vector<Segment> segs;
  segs.push_back(sol.segments.front());
  for (size_t i = 0; i < sol.breakpoints.size(); ++i) {
    if (!bps.empty() && sol.breakpoints[i] <= bps.back() + 1e-13) {
      segs.back() = sol.segments[i + 1];  // zero width: keep the later segment
      continue;
    }
    bps.push_back(sol.breakpoints[i]);
    segs.push_back(sol.segments[i + 1]);
  }
  sol.breakpoints = std::move(bps);
  sol.segments = std::move(segs);
  return sol;
}

}  // namespace kstep
