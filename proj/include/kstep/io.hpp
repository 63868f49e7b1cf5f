// CSV and JSON renderings of the public result types.  Floating point goes
// out with 17 significant digits so files round-trip bit-exactly; every
// report embeds the resolved configuration and the RNG algorithm name.

#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "kstep/measurement.hpp"
#include "kstep/riemann.hpp"

namespace kstep {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline const char* to_string(DiscontinuityKind k) {
  return k == DiscontinuityKind::shock ? "shock" : "contact";
}
inline const char* to_string(Branch b) {
  return b == Branch::lower ? "lower" : "upper";
}
inline const char* case_name(CaseLabel c) {
  switch (c) {
    case CaseLabel::degenerate: return "degenerate";
    case CaseLabel::case1: return "rarefaction-lower";
    case CaseLabel::case2: return "shock-decreasing";
    case CaseLabel::case3: return "contact-upper";
    case CaseLabel::case4: return "rarefaction-upper";
    case CaseLabel::case5: return "shock-increasing";
    case CaseLabel::case6: return "contact-lower";
  }
  return "unknown";
}

inline nlohmann::json to_json(const SelfSimilarSolution& sol) {
  nlohmann::json j;
  j["lambda"] = sol.lambda;
  j["rho"] = sol.rho;
  j["k"] = sol.spec.k;
  j["case"] = static_cast<int>(sol.case_label);
  j["case_name"] = case_name(sol.case_label);
  j["near_degenerate"] = sol.near_degenerate;
  j["breakpoints"] = sol.breakpoints;
  j["segments"] = nlohmann::json::array();
  for (const auto& s : sol.segments) {
    nlohmann::json seg;
    seg["type"] = s.is_fan ? "fan" : "constant";
    if (s.is_fan)
      seg["branch"] = to_string(s.branch);
    else
      seg["value"] = s.value;
    j["segments"].push_back(seg);
  }
  j["discontinuities"] = nlohmann::json::array();
  for (const auto& d : sol.discontinuities)
    j["discontinuities"].push_back({{"velocity", d.velocity},
                                    {"u_left", d.u_left},
                                    {"u_right", d.u_right},
                                    {"kind", to_string(d.kind)}});
  return j;
}

inline nlohmann::json to_json(const ComparisonReport& rep) {
  return {{"sup_error", rep.sup_error},
          {"l1_error", rep.l1_error},
          {"excluded_velocities", rep.excluded_velocities},
          {"exclusion_radius", rep.exclusion_radius},
          {"points_used", rep.points_used},
          {"tolerance", rep.tolerance},
          {"pass", rep.pass}};
}

inline nlohmann::json to_json(const OracleReport& rep) {
  return {{"lattice", rep.lattice},
          {"k", rep.k},
          {"particles", rep.particles},
          {"num_states", rep.num_states},
          {"stationarity_residual", rep.stationarity_residual},
          {"bond_current", rep.bond_current},
          {"event_rate_per_site", rep.event_rate_per_site}};
}

inline nlohmann::json to_json(const LlnEstimate& est) {
  return {{"mean", est.mean},
          {"stderr", est.stderr_},
          {"ci99_halfwidth", est.ci99_halfwidth},
          {"replicas", est.replicas}};
}

/// Profile CSV: '#'-prefixed metadata lines, then v,mean,stderr,n_replicas.
inline std::string profile_csv(const ProfileEstimate& est,
                               const nlohmann::json& metadata) {
  std::string out;
  out += "# " + metadata.dump() + "\n";
  out += "v,mean,stderr,n_replicas\n";
  for (size_t i = 0; i < est.velocity.size(); ++i)
    out += fmt17(est.velocity[i]) + "," + fmt17(est.mean[i]) + "," +
           fmt17(est.stderr_[i]) + "," + std::to_string(est.replicas) + "\n";
  return out;
}

inline void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_text: cannot open " + path);
  out << content;
}

}  // namespace kstep
