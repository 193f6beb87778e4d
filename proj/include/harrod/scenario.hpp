#pragma once

#include <cstdlib>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "harrod/domain.hpp"
#include "harrod/format.hpp"

// Scenario ingestion: a flat key-value document, one `key = value` per line,
// `#` starts a comment. Keys: variant, mu, nu, k0, horizon, max_step, alpha,
// rho, growth_law, mu_schedule, outputs, tolerances. Variant-specific keys
// must be present exactly when the variant needs them.

namespace harrod {

namespace detail {

struct RawEntry {
  std::string value;
  int line = 0;
};

inline GrowthLaw parse_growth_law(const std::string& text, int line) {
  std::vector<double> coeffs;
  for (const std::string& piece : split(text, ','))
    coeffs.push_back(parse_number(piece, line, "growth_law"));
  return GrowthLaw(std::move(coeffs));
}

inline MuSchedule parse_mu_schedule(const std::string& text, int line) {
  const std::string t = trim(text);
  if (t.rfind("piecewise:", 0) == 0) {
    std::vector<std::pair<double, double>> steps;
    for (const std::string& piece : split(t.substr(10), ',')) {
      const auto parts = split(piece, ':');
      if (parts.size() != 2)
        throw parse_error(line, "mu_schedule piecewise entries must be "
                                "time:value pairs");
      steps.emplace_back(parse_number(parts[0], line, "mu_schedule"),
                         parse_number(parts[1], line, "mu_schedule"));
    }
    return MuSchedule::piecewise(std::move(steps));
  }
  if (t.rfind("poly:", 0) == 0) {
    std::vector<double> coeffs;
    for (const std::string& piece : split(t.substr(5), ','))
      coeffs.push_back(parse_number(piece, line, "mu_schedule"));
    return MuSchedule::polynomial(std::move(coeffs));
  }
  return MuSchedule::constant(parse_number(t, line, "mu_schedule"));
}

}  // namespace detail

inline ScenarioConfig parse_scenario(std::string_view text) {
  static const char* kKnownKeys[] = {"variant", "mu",          "nu",
                                     "k0",      "horizon",     "max_step",
                                     "alpha",   "rho",         "growth_law",
                                     "mu_schedule", "outputs", "tolerances"};

  std::map<std::string, detail::RawEntry> entries;
  int line_no = 0;
  std::istringstream stream{std::string(text)};
  std::string raw_line;
  while (std::getline(stream, raw_line)) {
    ++line_no;
    const std::size_t hash = raw_line.find('#');
    if (hash != std::string::npos) raw_line.erase(hash);
    const std::string stripped = detail::trim(raw_line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw parse_error(line_no, "expected 'key = value'");
    const std::string key = detail::trim(stripped.substr(0, eq));
    const std::string value = detail::trim(stripped.substr(eq + 1));
    bool known = false;
    for (const char* k : kKnownKeys) known = known || key == k;
    if (!known) throw parse_error(line_no, "unknown key '" + key + "'");
    if (entries.count(key))
      throw parse_error(line_no, "duplicate key '" + key + "'");
    entries[key] = {value, line_no};
  }

  const auto required = [&](const std::string& key) -> const detail::RawEntry& {
    const auto it = entries.find(key);
    if (it == entries.end())
      throw parse_error(line_no, "missing required key '" + key + "'");
    return it->second;
  };

  ScenarioConfig config;
  {
    const auto& entry = required("variant");
    const auto variant = variant_from_name(entry.value);
    if (!variant)
      throw parse_error(entry.line, "unknown variant '" + entry.value + "'");
    config.variant = *variant;
  }
  {
    const auto& mu = required("mu");
    const auto& nu = required("nu");
    const auto& k0 = required("k0");
    config.params = make_params(detail::parse_number(mu.value, mu.line, "mu"),
                                detail::parse_number(nu.value, nu.line, "nu"),
                                detail::parse_number(k0.value, k0.line, "k0"));
  }

  // variant-specific keys: present exactly when the variant requires them
  const auto gate = [&](const std::string& key, bool needed) {
    const auto it = entries.find(key);
    if (needed && it == entries.end())
      throw parse_error(line_no, "missing required key '" + key +
                                     "' for variant " +
                                     std::string(variant_name(config.variant)));
    if (!needed && it != entries.end())
      throw parse_error(it->second.line,
                        "key '" + key + "' is not allowed for variant " +
                            std::string(variant_name(config.variant)));
  };
  gate("alpha", config.variant == Variant::Amortized);
  gate("rho", config.variant == Variant::Cumulative);
  gate("growth_law", config.variant == Variant::Generalized);
  gate("mu_schedule", config.variant == Variant::VariableMu);

  if (config.variant == Variant::Amortized) {
    const auto& entry = entries.at("alpha");
    const double alpha = detail::parse_number(entry.value, entry.line, "alpha");
    if (alpha < 0.0)
      throw parse_error(entry.line, "alpha must be non-negative");
    config.alpha = alpha;
  }
  if (config.variant == Variant::Cumulative) {
    const auto& entry = entries.at("rho");
    const double rho = detail::parse_number(entry.value, entry.line, "rho");
    if (rho < 0.0) throw parse_error(entry.line, "rho must be non-negative");
    config.rho = rho;
  }
  if (config.variant == Variant::Generalized) {
    const auto& entry = entries.at("growth_law");
    config.growth_law = detail::parse_growth_law(entry.value, entry.line);
  }
  if (config.variant == Variant::VariableMu) {
    const auto& entry = entries.at("mu_schedule");
    config.mu_schedule = detail::parse_mu_schedule(entry.value, entry.line);
  }

  if (const auto it = entries.find("horizon"); it != entries.end()) {
    config.horizon =
        detail::parse_number(it->second.value, it->second.line, "horizon");
    if (!(config.horizon > 0.0))
      throw parse_error(it->second.line, "horizon must be positive");
  } else {
    config.horizon = 0.95 / config.params.sigma;
  }
  if (const auto it = entries.find("max_step"); it != entries.end()) {
    config.max_step =
        detail::parse_number(it->second.value, it->second.line, "max_step");
    if (!(config.max_step > 0.0))
      throw parse_error(it->second.line, "max_step must be positive");
  }
  if (const auto it = entries.find("tolerances"); it != entries.end()) {
    const auto parts = detail::split(it->second.value, ',');
    if (parts.size() != 3)
      throw parse_error(it->second.line,
                        "tolerances must be ode_rel,root_abs,identity_abs");
    config.tolerances.ode_rel =
        detail::parse_number(parts[0], it->second.line, "tolerances");
    config.tolerances.root_abs =
        detail::parse_number(parts[1], it->second.line, "tolerances");
    config.tolerances.identity_abs =
        detail::parse_number(parts[2], it->second.line, "tolerances");
    if (!(config.tolerances.ode_rel > 0.0) ||
        !(config.tolerances.root_abs > 0.0) ||
        !(config.tolerances.identity_abs > 0.0))
      throw parse_error(it->second.line, "tolerances must be positive");
  }
  if (const auto it = entries.find("outputs"); it != entries.end()) {
    config.outputs.clear();
    for (const std::string& piece : detail::split(it->second.value, ',')) {
      const std::string name = detail::trim(piece);
      if (name == "csv")
        config.outputs.push_back(OutputKind::Csv);
      else if (name == "report")
        config.outputs.push_back(OutputKind::Report);
      else if (name == "svg")
        config.outputs.push_back(OutputKind::Svg);
      else
        throw parse_error(it->second.line, "unknown output '" + name + "'");
    }
    // canonical order, duplicates dropped
    std::vector<OutputKind> canonical;
    for (OutputKind k : {OutputKind::Csv, OutputKind::Report, OutputKind::Svg})
      for (OutputKind o : config.outputs)
        if (o == k && (canonical.empty() || canonical.back() != k))
          canonical.push_back(k);
    config.outputs = canonical;
  }
  return config;
}

inline std::string serialize_scenario(const ScenarioConfig& config) {
  std::string out;
  const auto emit = [&](const std::string& key, const std::string& value) {
    out += key + " = " + value + "\n";
  };
  emit("variant", std::string(variant_name(config.variant)));
  emit("mu", format_exact(config.params.mu));
  emit("nu", format_exact(config.params.nu));
  emit("k0", format_exact(config.params.k0));
  if (config.alpha) emit("alpha", format_exact(*config.alpha));
  if (config.rho) emit("rho", format_exact(*config.rho));
  if (config.growth_law) {
    std::string coeffs;
    for (double c : config.growth_law->higher_coefficients()) {
      if (!coeffs.empty()) coeffs += ',';
      coeffs += format_exact(c);
    }
    emit("growth_law", coeffs);
  }
  if (config.mu_schedule) {
    const MuSchedule& s = *config.mu_schedule;
    switch (s.kind()) {
      case MuSchedule::Kind::Constant:
        emit("mu_schedule", format_exact(s.constant_value()));
        break;
      case MuSchedule::Kind::Piecewise: {
        std::string text = "piecewise:";
        bool first = true;
        for (const auto& [t, v] : s.steps()) {
          if (!first) text += ',';
          first = false;
          text += format_exact(t) + ":" + format_exact(v);
        }
        emit("mu_schedule", text);
        break;
      }
      case MuSchedule::Kind::Polynomial: {
        std::string text = "poly:";
        bool first = true;
        for (double c : s.poly_coefficients()) {
          if (!first) text += ',';
          first = false;
          text += format_exact(c);
        }
        emit("mu_schedule", text);
        break;
      }
    }
  }
  emit("horizon", format_exact(config.horizon));
  emit("max_step", format_exact(config.max_step));
  emit("tolerances", format_exact(config.tolerances.ode_rel) + "," +
                         format_exact(config.tolerances.root_abs) + "," +
                         format_exact(config.tolerances.identity_abs));
  std::string outputs;
  for (OutputKind k : config.outputs) {
    if (!outputs.empty()) outputs += ',';
    outputs += std::string(output_kind_name(k));
  }
  emit("outputs", outputs);
  return out;
}

}  // namespace harrod
