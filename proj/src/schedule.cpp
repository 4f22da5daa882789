#include "schedule.hpp"

#include <cmath>

#include "errors.hpp"

namespace dane {

double step_size(const Schedule& s, std::int64_t k, int t) {
  switch (s.kind) {
    case ScheduleKind::kConstant:
      return s.a0;
    case ScheduleKind::kInverseDecay:
      return s.a0 / (1.0 + s.decay * static_cast<double>(k));
    case ScheduleKind::kDaneExpDecay:
      return s.a0 / (std::exp(s.c * static_cast<double>(t)) *
                     (1.0 + s.decay * static_cast<double>(k)));
  }
  throw ContractViolation("step_size: unknown schedule kind");
}

std::string schedule_kind_name(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kConstant: return "Constant";
    case ScheduleKind::kInverseDecay: return "InverseDecay";
    case ScheduleKind::kDaneExpDecay: return "DaneExpDecay";
  }
  throw ContractViolation("schedule_kind_name: unknown schedule kind");
}

ScheduleKind parse_schedule_kind(const std::string& name) {
  if (name == "Constant") return ScheduleKind::kConstant;
  if (name == "InverseDecay") return ScheduleKind::kInverseDecay;
  if (name == "DaneExpDecay") return ScheduleKind::kDaneExpDecay;
  throw ConfigError("schedule.kind: unknown value '" + name +
                    "' (expected Constant, InverseDecay or DaneExpDecay)");
}

}  // namespace dane
