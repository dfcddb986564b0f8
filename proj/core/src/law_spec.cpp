#include "mdnm/law_spec.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mdnm/errors.hpp"

namespace mdnm {

using Json = nlohmann::json;

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  std::size_t line = 1;
  for (std::size_t k = 0; k < offset && k < text.size(); ++k)
    if (text[k] == '\n') ++line;
  return line;
}

namespace {

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError("", std::string("syntax error: ") + e.what(), line_of_offset(text, e.byte));
  }
}

OffspringLaw offspring_from(const Json& j, const std::string& prefix) {
  if (j.contains("pmf")) {
    const auto& pmf = j["pmf"];
    if (!pmf.is_array() || pmf.empty())
      throw ConfigError(prefix + "pmf", "expected a nonempty list of [count, probability]");
    std::vector<OffspringLaw::Atom> atoms;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
      const auto& e = pmf[k];
      std::string field = prefix + "pmf[" + std::to_string(k) + "]";
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number())
        throw ConfigError(field, "expected [count, probability]");
      atoms.push_back({e[0].get<std::int64_t>(), e[1].get<double>()});
    }
    try {
      return OffspringLaw::from_pmf(std::move(atoms));
    } catch (const InvalidArgument& e) {
      throw ConfigError(prefix + "pmf", e.what());
    }
  }
  if (j.contains("family")) {
    const auto& f = j["family"];
    try {
      if (f.contains("poisson") && f["poisson"].is_number())
        return OffspringLaw::poisson(f["poisson"].get<double>());
      if (f.contains("geometric") && f["geometric"].is_number())
        return OffspringLaw::geometric(f["geometric"].get<double>());
    } catch (const InvalidArgument& e) {
      throw ConfigError(prefix + "family", e.what());
    }
    throw ConfigError(prefix + "family", "expected {\"poisson\": mean} or {\"geometric\": p}");
  }
  throw ConfigError(prefix + "pmf", "missing");
}

}  // namespace

OffspringLaw parse_offspring_law(const std::string& json_text, const std::string& field_prefix) {
  return offspring_from(parse_json(json_text), field_prefix);
}

MotherDependentLaw parse_law_spec(const std::string& text) {
  Json j = parse_json(text);
  if (!j.is_object()) throw ConfigError("", "expected a JSON object", 1);
  if (!j.contains("d") || !j["d"].is_number_integer())
    throw ConfigError("d", "missing or not an integer");
  if (!j.contains("r") || !j["r"].is_number()) throw ConfigError("r", "missing or not a number");
  auto d = j["d"].get<std::int64_t>();
  double r = j["r"].get<double>();
  if (d < 2) throw ConfigError("d", "must be at least 2");
  if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("r", "must lie in [0, 1]");
  return MotherDependentLaw(offspring_from(j, ""), static_cast<std::size_t>(d), r);
}

MotherDependentLaw load_law_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_law_spec(ss.str());
}

}  // namespace mdnm
