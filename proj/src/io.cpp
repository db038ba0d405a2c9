#include "lb/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace lb {

json to_json(const PeriodicProfile& profile) {
  return json{{"mean", profile.mean},
              {"omega", profile.omega},
              {"cos_coeffs", profile.cos_coeffs},
              {"sin_coeffs", profile.sin_coeffs}};
}

PeriodicProfile profile_from_json(const json& j) {
  return PeriodicProfile(j.at("mean").get<double>(),
                         j.at("cos_coeffs").get<std::vector<double>>(),
                         j.at("sin_coeffs").get<std::vector<double>>(),
                         j.at("omega").get<double>());
}

json to_json(const ResidualReport& r) {
  return json{{"rms", r.rms}, {"max_abs", r.max_abs}, {"lambda_used", r.lambda_used}};
}

json to_json(const MinimizeResult& r) {
  return json{{"energy", r.energy},
              {"multiplier", r.multiplier},
              {"converged", r.converged},
              {"iterations", r.iterations},
              {"start_index", r.start_index},
              {"is_trivial", r.is_trivial},
              {"residual", to_json(r.residual)},
              {"profile", to_json(r.profile)}};
}

json to_json(const ConditionReport& r) {
  json j{{"psi_at_zero", r.psi_at_zero},
         {"m_f", r.m_f},
         {"floor_argmin", r.floor_argmin},
         {"condition_holds", r.condition_holds},
         {"margin", r.margin},
         {"exposedness", to_string(r.exposedness_verdict)}};
  j["minimizer_period"] = r.minimizer_period ? json(*r.minimizer_period) : json(nullptr);
  return j;
}

json to_json(const DiagnosticsReport& r) {
  json checks = json::array();
  for (const CheckResult& c : r.checks) {
    const char* status = c.status == CheckStatus::pass ? "pass"
                         : c.status == CheckStatus::fail ? "fail"
                                                         : "not-applicable";
    checks.push_back(json{{"name", c.name},
                          {"status", status},
                          {"measured", c.measured},
                          {"tolerance", c.tolerance},
                          {"anchor", c.anchor}});
  }
  return json{{"overall_pass", r.overall_pass()},
              {"checks", checks},
              {"condition", to_json(r.condition)}};
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string landscape_csv(const LandscapeTable& table) {
  std::ostringstream out;
  out << "a,psi,hstar,envelope,nontrivial,omega,energy_residual_rms,converged\n";
  for (int i = 0; i < table.size(); ++i) {
    out << format_double(table.a_grid[i]) << ',' << format_double(table.psi[i]) << ','
        << format_double(table.hstar[i]) << ',' << format_double(table.envelope[i]) << ','
        << (table.nontrivial[i] ? 1 : 0) << ','
        << format_double(table.results[i].profile.omega) << ','
        << format_double(table.results[i].residual.rms) << ','
        << (table.results[i].converged ? 1 : 0) << '\n';
  }
  return out.str();
}

namespace {

void write_text(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace

void write_landscape_csv(const LandscapeTable& table, const std::string& path) {
  write_text(landscape_csv(table), path);
}

std::string dual_csv(const DualTable& table) {
  std::ostringstream out;
  out << "lambda,psi_dual,mean_at_opt,converged\n";
  for (std::size_t j = 0; j < table.lambda_grid.size(); ++j) {
    out << format_double(table.lambda_grid[j]) << ',' << format_double(table.psi_dual[j])
        << ',' << format_double(table.mean_at_opt[j]) << ','
        << (table.results[j].converged ? 1 : 0) << '\n';
  }
  return out.str();
}

void write_dual_csv(const DualTable& table, const std::string& path) {
  write_text(dual_csv(table), path);
}

std::string phase_diagram_csv(const std::vector<PhaseCell>& cells) {
  std::ostringstream out;
  out << "tau,gamma,psi0,m_f,condition_holds,is_trivial,omega\n";
  for (const PhaseCell& c : cells) {
    out << format_double(c.tau) << ',' << format_double(c.gamma) << ','
        << format_double(c.psi0) << ',' << format_double(c.m_f) << ','
        << (c.condition_holds ? 1 : 0) << ',' << (c.is_trivial ? 1 : 0) << ','
        << format_double(c.omega) << '\n';
  }
  return out.str();
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char ch : data) {
    hash ^= ch;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string RunCache::default_dir() {
  if (const char* env = std::getenv("LB_CACHE_DIR"); env && *env) return env;
  return ".lb-cache";
}

RunCache::RunCache(std::string dir, bool enabled) : dir_(std::move(dir)), enabled_(enabled) {}

std::string RunCache::entry_path(const json& config) const {
  char name[32];
  std::snprintf(name, sizeof(name), "%016llx.json",
                static_cast<unsigned long long>(fnv1a64(config.dump())));
  return dir_ + "/" + name;
}

std::optional<std::string> RunCache::lookup(const json& config) const {
  if (!enabled_) return std::nullopt;
  std::ifstream in(entry_path(config), std::ios::binary);
  if (!in) return std::nullopt;
  json entry = json::parse(in, nullptr, false);
  if (entry.is_discarded() || !entry.is_object() || !entry.contains("config") ||
      !entry.contains("payload") || !entry["payload"].is_string() ||
      entry["config"] != config) {
    std::cerr << "warning: ignoring corrupt cache entry " << entry_path(config) << "\n";
    return std::nullopt;
  }
  return entry["payload"].get<std::string>();
}

void RunCache::store(const json& config, const std::string& payload) const {
  if (!enabled_) return;
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) {
    std::cerr << "warning: cache directory unusable (" << dir_ << "): " << ec.message()
              << "; continuing without cache\n";
    return;
  }
  std::ofstream out(entry_path(config), std::ios::binary);
  if (!out) {
    std::cerr << "warning: cache entry not writable (" << entry_path(config)
              << "); continuing without cache\n";
    return;
  }
  out << json{{"config", config}, {"payload", payload}}.dump();
}

}  // namespace lb
