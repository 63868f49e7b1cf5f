// Flux geometry for k-step exclusion hydrodynamics.
//
// The macroscopic flux of the totally asymmetric k-step exclusion process is
//   G_k(u) = sum_{j=1..k} j u^j (1-u) = u + u^2 + ... + u^k - k u^{k+1},
// a polynomial that is convex below a single inflection density and concave
// above it (k >= 2).  This header evaluates G_k, its derivative H = G_k'
// (the characteristic speed), chord slopes, the branch inverses of H, and
// the tangency ("star") densities that decide whether a Riemann datum
// resolves into a shock, a rarefaction fan, or a contact discontinuity.

#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kstep {

inline constexpr double kBoundaryTol = 1e-12;  // clamp window at domain edges

enum class FluxVariant {
  totally_asymmetric,    // p(x, x+1) = 1, any k >= 1
  nearest_neighbor_k5,   // p(x, x+1) = p, p(x, x-1) = 1-p, k = 5
};

enum class Branch { lower, upper };  // below / above the inflection density

struct FluxSpec {
  int k = 2;
  FluxVariant variant = FluxVariant::totally_asymmetric;
  double p = 1.0;  // nearest_neighbor_k5 only; q = 1 - p implied

  static FluxSpec totally_asymmetric(int k) {
    if (k < 1) throw std::invalid_argument("FluxSpec: k must be >= 1");
    return FluxSpec{k, FluxVariant::totally_asymmetric, 1.0};
  }
  static FluxSpec nearest_neighbor_k5(double p) {
    if (!(p > 0.5 && p <= 1.0))
      throw std::invalid_argument("FluxSpec: nearest-neighbor variant needs p in (1/2, 1]");
    return FluxSpec{5, FluxVariant::nearest_neighbor_k5, p};
  }
  double q() const { return 1.0 - p; }
};

namespace detail {

// Clamp u into [lo, hi]; values beyond the tolerance window are rejected.
inline double clamp_domain(double u, double lo, double hi, const char* what) {
  if (!(u >= lo - kBoundaryTol && u <= hi + kBoundaryTol))
    throw std::domain_error(std::string(what) + ": argument " + std::to_string(u) +
                            " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return u < lo ? lo : (u > hi ? hi : u);
}

// Horner evaluation, coeffs[i] multiplies u^i.
inline double horner(const std::vector<double>& coeffs, double u) {
  double acc = 0.0;
  for (size_t i = coeffs.size(); i-- > 0;) acc = acc * u + coeffs[i];
  return acc;
}

// G_5^{p,q}(u) = u(1-u) * B(u) expanded into coefficients of B, where the
// bracket collects the per-distance jump weights of the nearest-neighbor
// 5-step walk, including the lone cycle path contributing 3u^2 * 2 p^4 q.
inline std::vector<double> nn_k5_bracket(double p) {
  const double q = 1.0 - p, d = p - q, pq = p * q;
  return {d,
          2.0 * d,
          3.0 * d * (1.0 - pq) + 6.0 * p * p * p * p * q,
          4.0 * d * (1.0 - 2.0 * pq),
          5.0 * d * (1.0 - 3.0 * pq + pq * pq)};
}

// Polynomial coefficients of the flux for either variant.
inline std::vector<double> flux_coefficients(const FluxSpec& spec) {
  if (spec.variant == FluxVariant::totally_asymmetric) {
    std::vector<double> c(static_cast<size_t>(spec.k) + 2, 1.0);
    c[0] = 0.0;
    c.back() = -static_cast<double>(spec.k);
    return c;
  }
  // u(1-u)*B(u) = (u - u^2) * B(u)
  const std::vector<double> b = nn_k5_bracket(spec.p);
  std::vector<double> c(b.size() + 2, 0.0);
  for (size_t i = 0; i < b.size(); ++i) {
    c[i + 1] += b[i];
    c[i + 2] -= b[i];
  }
  return c;
}

inline std::vector<double> differentiate(const std::vector<double>& c) {
  std::vector<double> d(c.size() > 1 ? c.size() - 1 : 1, 0.0);
  for (size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
  return d;
}

// Bracketed root refinement: bisection with secant acceleration.  Assumes
// f(a) and f(b) have opposite signs; converges to |b - a| <= tol in u.
template <typename F>
double refine_root(F&& f, double a, double b, double fa, double fb, double tol) {
  for (int iter = 0; iter < 200 && (b - a) > tol; ++iter) {
    double mid;
    if (fb != fa) {
      mid = a - fa * (b - a) / (fb - fa);  // secant step
      const double margin = 0.01 * (b - a);
      if (!(mid > a + margin && mid < b - margin)) mid = 0.5 * (a + b);
    } else {
      mid = 0.5 * (a + b);
    }
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fa < 0.0) != (fm < 0.0)) {
      b = mid;
      fb = fm;
    } else {
      a = mid;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

/// Flux G(u): expected particle current across a bond at product density u.
inline double flux(const FluxSpec& spec, double u) {
  u = detail::clamp_domain(u, 0.0, 1.0, "flux");
  if (spec.variant == FluxVariant::totally_asymmetric) {
    // u * (1 + u + ... + u^{k-1} - k u^k), innermost coefficient first
    double acc = 1.0 - static_cast<double>(spec.k) * u;
    for (int i = 1; i < spec.k; ++i) acc = acc * u + 1.0;
    return u * acc;
  }
  return detail::horner(detail::flux_coefficients(spec), u);
}

/// Characteristic speed H(u) = G'(u).
inline double characteristic_speed(const FluxSpec& spec, double u) {
  u = detail::clamp_domain(u, 0.0, 1.0, "characteristic_speed");
  if (spec.variant == FluxVariant::totally_asymmetric) {
    // 1 + 2u + ... + k u^{k-1} - k(k+1) u^k
    const double k = spec.k;
    double acc = -k * (k + 1.0);
    for (int m = spec.k; m >= 1; --m) acc = acc * u + static_cast<double>(m);
    return acc;
  }
  return detail::horner(detail::differentiate(detail::flux_coefficients(spec)), u);
}

/// G''(u); sign change locates the inflection.
inline double flux_curvature(const FluxSpec& spec, double u) {
  u = detail::clamp_domain(u, 0.0, 1.0, "flux_curvature");
  if (spec.variant == FluxVariant::totally_asymmetric) {
    const double k = spec.k;
    double acc = -k * k * (k + 1.0);
    for (int m = spec.k; m >= 2; --m) acc = acc * u + static_cast<double>(m * (m - 1));
    return acc;
  }
  const auto c = detail::flux_coefficients(spec);
  return detail::horner(detail::differentiate(detail::differentiate(c)), u);
}

/// Unique inflection density in (0,1), or nullopt for k = 1 (G_1 is concave).
inline std::optional<double> inflection(const FluxSpec& spec) {
  if (spec.variant == FluxVariant::totally_asymmetric && spec.k == 1) return std::nullopt;
  if (spec.variant == FluxVariant::totally_asymmetric && spec.k == 2) return 1.0 / 6.0;
  double a = 0.0, b = 1.0;
  double fa = flux_curvature(spec, a);
  // G'' > 0 at 0 and < 0 at 1 for every k >= 2 member of the family.
  for (int iter = 0; iter < 200 && (b - a) > 1e-14; ++iter) {
    const double mid = 0.5 * (a + b);
    const double fm = flux_curvature(spec, mid);
    if ((fa < 0.0) != (fm < 0.0))
      b = mid;
    else {
      a = mid;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

/// Chord slope S[v; w] = (G(w) - G(v)) / (w - v): the Rankine-Hugoniot speed
/// of a jump between densities v and w.
inline double chord_slope(const FluxSpec& spec, double v, double w) {
  if (v == w) throw std::invalid_argument("chord_slope: coincident arguments");
  return (flux(spec, w) - flux(spec, v)) / (w - v);
}

struct StarPoint {
  double value = std::numeric_limits<double>::quiet_NaN();
  bool below_range = false;  // tangency point falls below density 0
};

namespace detail {

// Tangency defect of the chord from (u, G(u)) to (v, G(v)) against the
// characteristic speed at v.  Star points are its zeros in v.
inline double tangency_defect(const FluxSpec& spec, double u, double v) {
  return chord_slope(spec, u, v) - characteristic_speed(spec, v);
}

// Numeric star point above u: unique zero of the tangency defect on (u, 1].
// Scan a fine grid for the sign change, then refine.
inline double star_upper_numeric(const FluxSpec& spec, double u) {
  constexpr int kScan = 10000;
  const double lo = u, hi = 1.0;
  double prev_v = lo + (hi - lo) / kScan;
  double prev_f = tangency_defect(spec, u, prev_v);
  for (int i = 2; i <= kScan; ++i) {
    const double v = lo + (hi - lo) * i / kScan;
    const double f = tangency_defect(spec, u, v);
    if (f == 0.0) return v;
    if ((prev_f < 0.0) != (f < 0.0)) {
      return refine_root([&](double x) { return tangency_defect(spec, u, x); },
                         prev_v, v, prev_f, f, 1e-13);
    }
    prev_v = v;
    prev_f = f;
  }
  throw std::runtime_error("star_upper: no tangency found above u");
}

// Numeric star point below u, or below_range if the tangency leaves [0, u).
inline StarPoint star_lower_numeric(const FluxSpec& spec, double u) {
  constexpr int kScan = 10000;
  const double lo = 0.0, hi = u;
  double prev_v = hi - (hi - lo) / kScan;
  double prev_f = tangency_defect(spec, u, prev_v);
  for (int i = 2; i <= kScan; ++i) {
    const double v = hi - (hi - lo) * i / kScan;
    const double f = tangency_defect(spec, u, v);
    if (f == 0.0) return {v, false};
    if ((prev_f < 0.0) != (f < 0.0)) {
      const double root =
          refine_root([&](double x) { return tangency_defect(spec, u, x); },
                      v, prev_v, f, prev_f, 1e-13);
      return {root, false};
    }
    prev_v = v;
    prev_f = f;
  }
  return {std::numeric_limits<double>::quiet_NaN(), true};
}

}  // namespace detail

/// Star density above u (u strictly below the inflection): the first density
/// where the concave hull of G taken from u re-touches G.  The chord from u
/// to star_upper(u) is tangent there: S[u; u*] = H(u*).
inline double star_upper(const FluxSpec& spec, double u) {
  const auto infl = inflection(spec);
  if (!infl) throw std::domain_error("star_upper: flux has no inflection (k = 1)");
  u = detail::clamp_domain(u, 0.0, 1.0, "star_upper");
  if (!(u < *infl)) throw std::domain_error("star_upper: u must lie below the inflection");
  if (spec.variant == FluxVariant::totally_asymmetric && spec.k == 2)
    return (1.0 - 2.0 * u) / 4.0;
  return detail::star_upper_numeric(spec, u);
}

/// Star density below u (u strictly above the inflection); may fall below 0,
/// in which case it is reported rather than clamped.
inline StarPoint star_lower(const FluxSpec& spec, double u) {
  const auto infl = inflection(spec);
  if (!infl) throw std::domain_error("star_lower: flux has no inflection (k = 1)");
  u = detail::clamp_domain(u, 0.0, 1.0, "star_lower");
  if (!(u > *infl)) throw std::domain_error("star_lower: u must lie above the inflection");
  if (spec.variant == FluxVariant::totally_asymmetric && spec.k == 2) {
    const double v = (1.0 - 2.0 * u) / 4.0;
    return {v, v < 0.0};
  }
  return detail::star_lower_numeric(spec, u);
}

/// Invert the characteristic speed on one monotone branch: returns the
/// density u in [0, inflection] (lower) or [inflection, 1] (upper) with
/// H(u) = x.  Throws std::out_of_range if x is not attained on the branch.
inline double density_from_speed(const FluxSpec& spec, double x, Branch branch) {
  if (spec.variant == FluxVariant::totally_asymmetric && spec.k == 2) {
    // H(u) = 1 + 2u - 6u^2  =>  u = (1 -/+ sqrt(7 - 6x)) / 6
    if (x > 7.0 / 6.0 + kBoundaryTol)
      throw std::out_of_range("density_from_speed: speed above the maximum 7/6");
    const double s = std::sqrt(std::max(0.0, 7.0 - 6.0 * x));
    const double u = branch == Branch::lower ? (1.0 - s) / 6.0 : (1.0 + s) / 6.0;
    const double lo = branch == Branch::lower ? 0.0 : 1.0 / 6.0;
    const double hi = branch == Branch::lower ? 1.0 / 6.0 : 1.0;
    if (u < lo - kBoundaryTol || u > hi + kBoundaryTol)
      throw std::out_of_range("density_from_speed: speed not attained on branch");
    return u < lo ? lo : (u > hi ? hi : u);
  }
  const auto infl = inflection(spec);
  double lo, hi;  // density interval of the branch
  if (!infl) {
    if (branch == Branch::lower)
      throw std::out_of_range("density_from_speed: k = 1 flux has a single (upper) branch");
    lo = 0.0;
    hi = 1.0;
  } else {
    lo = branch == Branch::lower ? 0.0 : *infl;
    hi = branch == Branch::lower ? *infl : 1.0;
  }
  double flo = characteristic_speed(spec, lo), fhi = characteristic_speed(spec, hi);
  const double fmin = std::min(flo, fhi), fmax = std::max(flo, fhi);
  if (x < fmin - kBoundaryTol || x > fmax + kBoundaryTol)
    throw std::out_of_range("density_from_speed: speed not attained on branch");
  x = x < fmin ? fmin : (x > fmax ? fmax : x);
  // H is strictly monotone on a branch; plain bisection to 1e-13.
  const bool increasing = fhi > flo;
  double a = lo, b = hi;
  for (int iter = 0; iter < 200 && (b - a) > 1e-13; ++iter) {
    const double mid = 0.5 * (a + b);
    const double fm = characteristic_speed(spec, mid);
    if ((fm < x) == increasing)
      a = mid;
    else
      b = mid;
  }
  return 0.5 * (a + b);
}

/// Nearest-neighbor asymmetric 5-step flux with jump probabilities (p, q).
inline double flux_nn_k5(double p, double q, double u) {
  if (std::abs(p + q - 1.0) > kBoundaryTol || !(p > q))
    throw std::invalid_argument("flux_nn_k5: need p + q = 1 and p > q");
  if (p <= 0.5)
    throw std::invalid_argument("flux_nn_k5: need p > 1/2");
  u = detail::clamp_domain(u, 0.0, 1.0, "flux_nn_k5");
  return u * (1.0 - u) * detail::horner(detail::nn_k5_bracket(p), u);
}

/// (G_k(u), u/(1-u)): the finite-k flux against its long-range (k -> inf)
/// limit.  Singular at u = 1.
inline std::pair<double, double> longrange_limit_pair(double u, int k) {
  if (u >= 1.0) throw std::domain_error("longrange_limit_pair: singular at u = 1");
  u = detail::clamp_domain(u, 0.0, 1.0 - kBoundaryTol, "longrange_limit_pair");
  return {flux(FluxSpec::totally_asymmetric(k), u), u / (1.0 - u)};
}

}  // namespace kstep
