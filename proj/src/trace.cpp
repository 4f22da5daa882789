#include "trace.hpp"

#include <algorithm>

#include "errors.hpp"

namespace dane {

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kSgd: return "Sgd";
    case Algorithm::kIdealDistSgd: return "IdealDistSgd";
    case Algorithm::kDistSgd: return "DistSgd";
    case Algorithm::kDaneExact: return "DaneExact";
    case Algorithm::kDaneSgd: return "DaneSgd";
    case Algorithm::kDaneSvrg: return "DaneSvrg";
  }
  throw ContractViolation("algorithm_name: unknown algorithm");
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "Sgd") return Algorithm::kSgd;
  if (name == "IdealDistSgd") return Algorithm::kIdealDistSgd;
  if (name == "DistSgd") return Algorithm::kDistSgd;
  if (name == "DaneExact") return Algorithm::kDaneExact;
  if (name == "DaneSgd") return Algorithm::kDaneSgd;
  if (name == "DaneSvrg") return Algorithm::kDaneSvrg;
  throw ConfigError("algorithm: unknown value '" + name +
                    "' (expected Sgd, IdealDistSgd, DistSgd, DaneExact, DaneSgd or DaneSvrg)");
}

std::uint64_t CostLedger::max_grads() const {
  std::uint64_t m = 0;
  for (std::uint64_t g : grads_per_machine) m = std::max(m, g);
  return m;
}

}  // namespace dane
