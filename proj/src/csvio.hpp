#pragma once

#include <iosfwd>
#include <string>

#include "trace.hpp"

namespace dane {

/* Trace serialization.  Columns, in order:
 *   algorithm,round,max_grads_per_machine,comm_rounds,floats_communicated,
 *   train_subopt,log10_subopt,pop_error
 * Doubles are written with shortest round-trip formatting and parsed back
 * with from_chars, so write -> read reproduces the trace exactly and two
 * writes of the same trace are byte-identical.  Leading '#' lines document
 * the metric conventions and are skipped on read. */
void write_trace_csv(std::ostream& out, const Trace& trace);
void write_trace_csv_file(const std::string& path, const Trace& trace);
std::string trace_csv_string(const Trace& trace);

Trace read_trace_csv(std::istream& in);            // ConfigError on schema mismatch
Trace read_trace_csv_file(const std::string& path);

}  // namespace dane
