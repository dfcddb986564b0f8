#include "mdnm/verify.hpp"

#include <algorithm>
#include <cmath>

#include "mdnm/enumeration.hpp"
#include "mdnm/exact_dist.hpp"

namespace mdnm {

std::vector<OffspringLaw> small_support_laws() {
  std::vector<OffspringLaw> laws;
  for (int mask = 1; mask < 16; ++mask) {
    std::vector<std::int64_t> support;
    for (int k = 0; k < 4; ++k)
      if (mask & (1 << k)) support.push_back(k);
    const double m = static_cast<double>(support.size());
    std::vector<OffspringLaw::Atom> flat, ramp;
    for (std::size_t j = 0; j < support.size(); ++j) {
      flat.push_back({support[j], 1.0 / m});
      ramp.push_back({support[j], 2.0 * static_cast<double>(j + 1) / (m * (m + 1.0))});
    }
    laws.push_back(OffspringLaw::from_pmf(flat));
    if (support.size() > 1) laws.push_back(OffspringLaw::from_pmf(ramp));
  }
  return laws;
}

std::vector<CountVector> small_initial_vectors(std::size_t d) {
  std::vector<CountVector> out;
  for (std::size_t i = 0; i < d; ++i) {
    out.push_back(unit_vector(d, i));
    out.push_back(unit_vector(d, i, 2));
    for (std::size_t j = i + 1; j < d; ++j) {
      CountVector v(d, 0);
      v[i] = v[j] = 1;
      out.push_back(v);
    }
  }
  return out;
}

OracleCheckReport check_exact_against_enumeration(std::int64_t max_total) {
  OracleCheckReport report;
  report.max_total = max_total;
  for (const auto& base : small_support_laws())
    for (std::size_t d : {2u, 3u})
      for (double r : {0.0, 0.25, 0.5, 1.0}) {
        MotherDependentLaw law(base, d, r);
        for (const auto& a : small_initial_vectors(d)) {
          auto exact = exact_joint_pmf(law, a, max_total, {0.0});
          auto oracle = enumerate_joint_law(law, a, max_total);
          double worst = 0.0;
          for (const auto& [key, p] : oracle) {
            auto it = exact.entries.find(key);
            worst = std::max(worst, std::abs(p - (it == exact.entries.end() ? 0.0 : it->second)));
          }
          for (const auto& [key, p] : exact.entries)
            if (!oracle.count(key)) worst = std::max(worst, p);
          report.max_abs_difference = std::max(report.max_abs_difference, worst);
          ++report.cases;
        }
      }
  return report;
}

}  // namespace mdnm
