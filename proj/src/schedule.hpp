#pragma once

#include <cstdint>
#include <string>

namespace dane {

/* Step-size rules for the stochastic loops.
 *   Constant:      a0
 *   InverseDecay:  a0 / (1 + decay*k)
 *   DaneExpDecay:  a0 / (exp(c*t) * (1 + decay*k))
 * k is the step counter (global for plain/distributed SGD, reset each round
 * inside local solves) and t the 1-based outer round. */
enum class ScheduleKind { kConstant, kInverseDecay, kDaneExpDecay };

struct Schedule {
  ScheduleKind kind = ScheduleKind::kConstant;
  double a0 = 0.05;
  double decay = 0.0;
  double c = 0.0;
};

double step_size(const Schedule& s, std::int64_t k, int t);

std::string schedule_kind_name(ScheduleKind kind);
ScheduleKind parse_schedule_kind(const std::string& name);  // ConfigError on unknown

}  // namespace dane
