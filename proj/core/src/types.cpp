#include "mdnm/types.hpp"

namespace mdnm {

std::string join_counts(std::span<const std::int64_t> v, char sep) {
  std::string out;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (j > 0) out += sep;
    out += std::to_string(v[j]);
  }
  return out;
}

}  // namespace mdnm
