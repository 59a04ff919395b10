#include "prham/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace prham {

namespace {

using Json = nlohmann::ordered_json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json meta_json(const CliConfig& cfg) {
  Json j;
  j["scenario"] = cfg.scenario;
  j["backend"] = cfg.backend_name();
  j["N"] = cfg.truncation;
  j["epsilon"] = cfg.epsilon;
  j["seed"] = cfg.seed;
  return j;
}

}  // namespace

CommandCheck make_check(std::string name, double value, double threshold) {
  CommandCheck c;
  c.name = std::move(name);
  c.value = value;
  c.threshold = threshold;
  c.pass = std::isfinite(value) && value <= threshold;
  return c;
}

CommandCheck make_skipped(std::string name) {
  CommandCheck c;
  c.name = std::move(name);
  c.pass = true;
  c.skipped = true;
  return c;
}

bool all_pass(const std::vector<CommandCheck>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

void write_norms_csv(const std::string& path, const IterationReport& rep,
                     const std::vector<int>& ks) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "step,k,norm,ratio\n";
  for (std::size_t n = 0; n < rep.steps.size(); ++n) {
    for (int k : ks) {
      const auto it = rep.steps[n].norms.find(k);
      if (it == rep.steps[n].norms.end()) continue;
      double ratio = std::numeric_limits<double>::quiet_NaN();
      if (n > 0) {
        const auto prev = rep.steps[n - 1].norms.find(k);
        if (prev != rep.steps[n - 1].norms.end() && prev->second > 0.0)
          ratio = it->second / (prev->second * prev->second);
      }
      os << rep.steps[n].n << ',' << k << ',' << fmt17(it->second) << ',' << fmt17(ratio)
         << '\n';
    }
  }
}

void write_engine_json(const std::string& path, const CliConfig& cfg,
                       const IterationReport& rep) {
  Json j = meta_json(cfg);
  j["status"] = to_string(rep.status);
  Json steps = Json::array();
  for (const auto& s : rep.steps) {
    Json js;
    js["n"] = s.n;
    Json norms;
    for (const auto& [k, v] : s.norms) norms[std::to_string(k)] = number_or_null(v);
    js["norms"] = norms;
    js["contraction_ratio"] = number_or_null(s.contraction_ratio);
    js["homotopy_residual"] = number_or_null(s.homotopy_residual);
    js["flow_tolerance"] = number_or_null(s.flow_tolerance);
    js["d_commutation_defect"] = number_or_null(s.d_commutation_defect);
    steps.push_back(std::move(js));
  }
  j["steps"] = std::move(steps);
  j["final"] = Json{{"residual", number_or_null(rep.final_residual)},
                    {"morphism_defect", number_or_null(rep.final_morphism_defect)},
                    {"chain_defect", number_or_null(rep.final_chain_defect)}};
  j["wall_clock_s"] = rep.wall_clock_s;
  j["diagnostics"] = Json{{"status_note", rep.status_note},
                          {"contraction_slope", number_or_null(rep.contraction_slope)},
                          {"fitted_delta", number_or_null(rep.fitted_delta)},
                          {"quadratic_constant", number_or_null(rep.quadratic_constant)},
                          {"operator_condition", number_or_null(rep.operator_condition)}};

  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << j.dump(2) << '\n';
}

void write_checks_json(const std::string& path, const CliConfig& cfg,
                       const std::vector<CommandCheck>& checks, bool pass,
                       const std::vector<std::pair<std::string, double>>& diagnostics) {
  Json j = meta_json(cfg);
  j["status"] = pass ? "PASS" : "FAIL";
  Json arr = Json::array();
  for (const auto& c : checks) {
    Json jc;
    jc["name"] = c.name;
    if (c.skipped) {
      jc["skipped"] = true;
    } else {
      jc["value"] = number_or_null(c.value);
      jc["threshold"] = c.threshold;
      jc["pass"] = c.pass;
    }
    arr.push_back(std::move(jc));
  }
  j["checks"] = std::move(arr);
  if (!diagnostics.empty()) {
    Json d;
    for (const auto& [name, value] : diagnostics) d[name] = number_or_null(value);
    j["diagnostics"] = std::move(d);
  }

  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << j.dump(2) << '\n';
}

}  // namespace prham
