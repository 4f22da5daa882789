#include "csvio.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include "errors.hpp"

namespace dane {

namespace {

constexpr const char* kHeader =
    "algorithm,round,max_grads_per_machine,comm_rounds,floats_communicated,"
    "train_subopt,log10_subopt,pop_error";

void append_double(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

void append_u64(std::string& out, std::uint64_t v) {
  char buf[24];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const std::size_t comma = line.find(',');
    fields.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return fields;
}

template <typename T>
T parse_number(std::string_view field, const char* column) {
  T v{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ConfigError(std::string("trace csv: bad ") + column + " value '" +
                      std::string(field) + "'");
  return v;
}

}  // namespace

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << "# danebench trace v1\n";
  out << "# algorithm=" << algorithm_name(trace.algorithm)
      << " log_base=10 subopt_floor=1e-16\n";
  out << "# one DANE round = gradient broadcast + iterate averaging "
         "= 2 comm_rounds of 2*m*d floats each\n";
  out << kHeader << '\n';
  std::string line;
  for (const TracePoint& p : trace.points) {
    line = algorithm_name(trace.algorithm);
    line += ',';
    line += std::to_string(p.round);
    line += ',';
    append_double(line, p.max_grads_per_machine);
    line += ',';
    append_u64(line, p.comm_rounds);
    line += ',';
    append_u64(line, p.floats_communicated);
    line += ',';
    append_double(line, p.train_subopt);
    line += ',';
    append_double(line, p.log10_subopt);
    line += ',';
    append_double(line, p.pop_error);
    line += '\n';
    out << line;
  }
}

void write_trace_csv_file(const std::string& path, const Trace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("trace csv: cannot open '" + path + "' for writing");
  write_trace_csv(out, trace);
  if (!out) throw ConfigError("trace csv: write to '" + path + "' failed");
}

std::string trace_csv_string(const Trace& trace) {
  std::ostringstream out;
  write_trace_csv(out, trace);
  return out.str();
}

Trace read_trace_csv(std::istream& in) {
  std::string line;
  bool saw_header = false;
  Trace trace;
  bool have_algorithm = false;

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!saw_header) {
      if (line != kHeader)
        throw ConfigError("trace csv: unexpected header '" + line + "'");
      saw_header = true;
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() != 8)
      throw ConfigError("trace csv: row with " + std::to_string(fields.size()) +
                        " fields, expected 8");
    const Algorithm alg = parse_algorithm(std::string(fields[0]));
    if (!have_algorithm) {
      trace.algorithm = alg;
      have_algorithm = true;
    } else if (alg != trace.algorithm) {
      throw ConfigError("trace csv: mixed algorithm labels in one file");
    }
    TracePoint p;
    p.round = parse_number<int>(fields[1], "round");
    p.max_grads_per_machine = parse_number<double>(fields[2], "max_grads_per_machine");
    p.comm_rounds = parse_number<std::uint64_t>(fields[3], "comm_rounds");
    p.floats_communicated = parse_number<std::uint64_t>(fields[4], "floats_communicated");
    p.train_subopt = parse_number<double>(fields[5], "train_subopt");
    p.log10_subopt = parse_number<double>(fields[6], "log10_subopt");
    p.pop_error = parse_number<double>(fields[7], "pop_error");
    trace.points.push_back(p);
  }
  if (!saw_header) throw ConfigError("trace csv: missing header row");
  if (trace.points.empty()) throw ConfigError("trace csv: no data rows");
  return trace;
}

Trace read_trace_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("trace csv: cannot open '" + path + "'");
  return read_trace_csv(in);
}

}  // namespace dane
