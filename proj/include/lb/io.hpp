#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "lb/diagnostics.hpp"

namespace lb {

using json = nlohmann::json;

// Usage / configuration problems map to exit code 2; I/O failures to 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json to_json(const PeriodicProfile& profile);
PeriodicProfile profile_from_json(const json& j);
json to_json(const ResidualReport& r);
json to_json(const MinimizeResult& r);
json to_json(const ConditionReport& r);
json to_json(const DiagnosticsReport& r);

// 17 significant digits; round-trips doubles exactly.
std::string format_double(double x);

// Frozen column schema:
// a,psi,hstar,envelope,nontrivial,omega,energy_residual_rms,converged
std::string landscape_csv(const LandscapeTable& table);
void write_landscape_csv(const LandscapeTable& table, const std::string& path);

// lambda,psi_dual,mean_at_opt,converged
std::string dual_csv(const DualTable& table);
void write_dual_csv(const DualTable& table, const std::string& path);

struct PhaseCell {
  double tau = 0.0;
  double gamma = 0.0;
  double psi0 = 0.0;
  double m_f = 0.0;
  bool condition_holds = false;
  bool is_trivial = true;
  double omega = 0.0;
};

// tau,gamma,psi0,m_f,condition_holds,is_trivial,omega
std::string phase_diagram_csv(const std::vector<PhaseCell>& cells);

std::uint64_t fnv1a64(std::string_view data);

// Content-addressed result store keyed by the canonicalized run
// configuration (sorted keys, normalized number formatting). Corrupt entries
// are ignored and recomputed; an unusable directory only warns.
class RunCache {
 public:
  RunCache(std::string dir, bool enabled);

  std::optional<std::string> lookup(const json& config) const;
  void store(const json& config, const std::string& payload) const;

  static std::string default_dir();  // LB_CACHE_DIR or ./.lb-cache

 private:
  std::string entry_path(const json& config) const;
  std::string dir_;
  bool enabled_;
};

int cli_main(int argc, const char* const* argv);

}  // namespace lb
