#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace mdnm::cli {

using Json = nlohmann::json;

namespace {

// Line of the first "key" occurrence for each dotted component in turn;
// 0 when the field does not appear in the text.
std::size_t line_of_field(const std::string& text, const std::string& field) {
  std::size_t pos = 0;
  bool found = false;
  std::istringstream parts(field);
  std::string part;
  while (std::getline(parts, part, '.')) {
    part = part.substr(0, part.find('['));
    if (part.empty()) continue;
    auto at = text.find('"' + part + '"', pos);
    if (at == std::string::npos) break;
    pos = at;
    found = true;
  }
  return found ? line_of_offset(text, pos) : 0;
}

const std::set<std::string> kTopLevel = {"seed",  "threads", "profile", "out",      "law",
                                         "initial", "scaling", "forest", "caps",    "simulate",
                                         "allele_tree", "exact", "limits", "verify"};

const std::set<std::string> kSections = {"simulate", "allele_tree", "exact", "limits", "verify"};

CountVector count_vector(const RunConfig& c, const Json& j, const std::string& field) {
  if (!j.is_array()) throw c.error(field, "expected a list of nonnegative integers");
  CountVector v;
  for (const auto& x : j) {
    if (!x.is_number_unsigned()) throw c.error(field, "expected a list of nonnegative integers");
    v.push_back(x.get<std::int64_t>());
  }
  return v;
}

}  // namespace

ConfigError RunConfig::error(const std::string& field, const std::string& message) const {
  return ConfigError(field, message, line_of_field(text, field));
}

MotherDependentLaw RunConfig::law() const {
  if (scaling) return scaled_law(*scaling);
  return MotherDependentLaw(base, d, r);
}

Profile parse_profile(const std::string& name) {
  if (name == "quick") return Profile::quick;
  if (name == "full") return Profile::full;
  throw ConfigError("profile", "expected quick or full, got '" + name + "'");
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  RunConfig c;
  c.text = text;
  try {
    c.json = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError("", std::string("syntax error: ") + e.what(), line_of_offset(text, e.byte));
  }
  const Json& j = c.json;
  if (!j.is_object()) throw ConfigError("", "expected a JSON object", 1);
  for (const auto& [key, value] : j.items()) {
    if (!kTopLevel.count(key)) throw c.error(key, "unknown field");
    if (kSections.count(key) && !value.is_object()) throw c.error(key, "expected an object");
  }

  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw c.error("seed", "expected a 64-bit unsigned integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("threads")) {
    if (!j["threads"].is_number_unsigned()) throw c.error("threads", "expected a nonnegative integer");
    c.threads = j["threads"].get<unsigned>();
  }
  if (j.contains("profile")) {
    if (!j["profile"].is_string()) throw c.error("profile", "expected quick or full");
    try {
      c.profile = parse_profile(j["profile"].get<std::string>());
    } catch (const ConfigError& e) {
      throw c.error("profile", e.message());
    }
  }
  if (j.contains("out")) {
    if (!j["out"].is_string()) throw c.error("out", "expected a path");
    c.out = base_dir / j["out"].get<std::string>();
  }
  if (j.contains("forest")) {
    if (!j["forest"].is_string()) throw c.error("forest", "expected a path");
    c.forest = base_dir / j["forest"].get<std::string>();
  }

  const bool scaled = j.contains("scaling");
  if (j.contains("law")) {
    const Json& law = j["law"];
    if (!law.is_object()) throw c.error("law", "expected an object");
    for (const auto& [key, value] : law.items())
      if (key != "d" && key != "r" && key != "pmf" && key != "family")
        throw c.error("law." + key, "unknown field");
    if (!law.contains("d") || !law["d"].is_number_unsigned() || law["d"].get<std::size_t>() < 2)
      throw c.error("law.d", "expected an integer >= 2");
    c.d = law["d"].get<std::size_t>();
    if (scaled && law.contains("r"))
      throw c.error("law.r", "the scaling regime sets r = c/n; remove this field");
    if (!scaled) {
      if (!law.contains("r") || !law["r"].is_number()) throw c.error("law.r", "missing or not a number");
      c.r = law["r"].get<double>();
      if (!(c.r >= 0.0 && c.r <= 1.0)) throw c.error("law.r", "must lie in [0, 1]");
    }
    try {
      c.base = parse_offspring_law(law.dump(), "law.");
    } catch (const ConfigError& e) {
      throw ConfigError(e.field(), e.message(), line_of_field(text, e.field()));
    }
    c.law_given = true;
  }

  if (scaled) {
    const Json& s = j["scaling"];
    if (!s.is_object()) throw c.error("scaling", "expected an object");
    for (const auto& [key, value] : s.items())
      if (key != "n" && key != "c" && key != "type") throw c.error("scaling." + key, "unknown field");
    ScalingSetup setup;
    setup.base = c.base;
    setup.d = c.d;
    if (!s.contains("n") || !s["n"].is_number_unsigned()) throw c.error("scaling.n", "expected a positive integer");
    setup.n = s["n"].get<std::int64_t>();
    if (s.contains("c")) {
      if (!s["c"].is_number()) throw c.error("scaling.c", "expected a number");
      setup.c = s["c"].get<double>();
    }
    if (s.contains("type")) {
      if (!s["type"].is_number_unsigned() || s["type"].get<std::size_t>() < 1)
        throw c.error("scaling.type", "types are numbered from 1");
      setup.type = s["type"].get<std::uint32_t>() - 1;
    }
    try {
      validate(setup);
    } catch (const InvalidArgument& e) {
      throw c.error("scaling", e.what());
    }
    c.scaling = setup;
    c.r = setup.c / static_cast<double>(setup.n);
    c.initial = unit_vector(setup.d, setup.type, setup.n);
  }

  if (j.contains("initial")) {
    if (scaled) throw c.error("initial", "the scaling regime sets the initial vector to n e_type");
    c.initial = count_vector(c, j["initial"], "initial");
    if (c.initial.size() != c.d) throw c.error("initial", "length must equal law.d");
  }

  if (j.contains("caps")) {
    const Json& caps = j["caps"];
    if (!caps.is_object()) throw c.error("caps", "expected an object");
    for (const auto& [key, value] : caps.items()) {
      if (!value.is_number_unsigned()) throw c.error("caps." + key, "expected a nonnegative integer");
      if (key == "max_nodes")
        c.caps.max_nodes = value.get<std::uint64_t>();
      else if (key == "max_levels")
        c.caps.max_levels = value.get<std::uint32_t>();
      else if (key == "max_allelic_generation")
        c.caps.max_allelic_generation = value.get<std::uint32_t>();
      else if (key == "max_steps")
        c.hitting.max_steps = value.get<std::uint64_t>();
      else
        throw c.error("caps." + key, "unknown field");
    }
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

ScalingSetup limit_setup(const RunConfig& config) {
  if (config.scaling) return *config.scaling;
  ScalingSetup s;
  s.base = config.base;
  s.d = config.d;
  s.n = config.profile == Profile::full ? 2000 : 500;
  try {
    validate(s);
  } catch (const InvalidArgument& e) {
    throw config.error("law", e.what());
  }
  return s;
}

}  // namespace mdnm::cli
