#include "mdnm/errors.hpp"

#include <sstream>

namespace mdnm {

namespace {

const char* kind_name(CapExceeded::Kind kind) {
  switch (kind) {
    case CapExceeded::Kind::nodes: return "nodes";
    case CapExceeded::Kind::levels: return "levels";
    case CapExceeded::Kind::steps: return "steps";
  }
  return "?";
}

std::string cap_message(CapExceeded::Kind kind, std::uint64_t limit) {
  std::ostringstream os;
  os << "cap exceeded: " << kind_name(kind) << " limit " << limit;
  return os.str();
}

}  // namespace

CapExceeded::CapExceeded(Kind kind, std::uint64_t limit)
    : Error(cap_message(kind, limit)), kind_(kind), limit_(limit) {}

CapTooSmall::CapTooSmall(double captured_mass, std::int64_t cap)
    : Error("truncation at total " + std::to_string(cap) + " keeps only mass " +
            std::to_string(captured_mass)),
      captured_mass_(captured_mass) {}

NoConvergence::NoConvergence(double last_iterate, double residual, std::uint64_t iterations)
    : Error("fixed point did not converge after " + std::to_string(iterations) +
            " iterations (last iterate " + std::to_string(last_iterate) + ", residual " +
            std::to_string(residual) + ")"),
      last_iterate_(last_iterate),
      residual_(residual) {}

MixedRootTypes::MixedRootTypes()
    : Error("roots have more than one type; use build_allele_forest") {}

static std::string config_message(const std::string& field, const std::string& message,
                                  std::size_t line) {
  std::string out;
  if (line > 0) out += "line " + std::to_string(line) + ": ";
  if (!field.empty()) out += "field '" + field + "': ";
  return out + message;
}

ConfigError::ConfigError(std::string field, std::string message, std::size_t line)
    : Error(config_message(field, message, line)),
      field_(std::move(field)),
      message_(std::move(message)),
      line_(line) {}

}  // namespace mdnm
