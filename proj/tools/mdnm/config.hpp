// Run configuration: one JSON file plus command-line overrides.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "mdnm/mdnm.hpp"

namespace mdnm::cli {

enum class Profile { quick, full };

struct RunConfig {
  std::uint64_t seed = 1;
  unsigned threads = 0;
  Profile profile = Profile::quick;
  std::filesystem::path out = "mdnm-out";

  OffspringLaw base = OffspringLaw::critical_binary();
  std::size_t d = 2;
  double r = 0.0;
  bool law_given = false;
  // Set when the file has a "scaling" block: r = c/n and the initial
  // vector is n e_type.
  std::optional<ScalingSetup> scaling;
  CountVector initial;
  std::optional<std::filesystem::path> forest;

  SimulationCaps caps;
  HittingOptions hitting;

  // Raw file text and parsed object, for command sections.
  std::string text;
  nlohmann::json json = nlohmann::json::object();

  MotherDependentLaw law() const;
  unsigned worker_threads() const { return threads ? threads : default_threads(); }

  // Section option with a default per profile. Throws ConfigError naming
  // "section.key" and its line when the value has the wrong type.
  template <class T>
  T option(const std::string& section, const std::string& key, T quick, T full) const;

  ConfigError error(const std::string& field, const std::string& message) const;
};

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

Profile parse_profile(const std::string& name);

// Scaling setup for the limit commands: the configured one, or c = 1, type 1
// and a profile-dependent n over the configured base law.
ScalingSetup limit_setup(const RunConfig& config);

template <class T>
T RunConfig::option(const std::string& section, const std::string& key, T quick, T full) const {
  T fallback = profile == Profile::full ? full : quick;
  auto s = json.find(section);
  if (s == json.end() || !s->contains(key)) return fallback;
  const auto& v = (*s)[key];
  bool ok;
  if constexpr (std::is_same_v<T, bool>)
    ok = v.is_boolean();
  else if constexpr (std::is_unsigned_v<T>)
    ok = v.is_number_unsigned();
  else if constexpr (std::is_integral_v<T>)
    ok = v.is_number_integer();
  else if constexpr (std::is_floating_point_v<T>)
    ok = v.is_number();
  else
    ok = true;
  if (!ok) throw error(section + "." + key, "has the wrong type");
  try {
    return v.template get<T>();
  } catch (const nlohmann::json::exception&) {
    throw error(section + "." + key, "has the wrong type");
  }
}

}  // namespace mdnm::cli
