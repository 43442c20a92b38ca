#include "gipsa/bench/trace_csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "gipsa/errors.hpp"

namespace gipsa::bench {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

double parse_double(std::string_view text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw InvalidInput("csv: not a number: '" + std::string(text) + "'");
  }
  return v;
}

namespace {

std::int64_t parse_int(std::string_view text) {
  std::int64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw InvalidInput("csv: not an integer: '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
  out << kTraceHeader << '\n';
  for (const auto& r : rows) {
    out << r.k << ',' << format_double(r.F_gap) << ',' << format_double(r.iterate_err) << ','
        << format_double(r.increment_norm_sq) << ',' << r.support_outside_E << ','
        << r.sign_mismatches_on_E << ',' << format_double(r.lyapunov_energy) << ','
        << (r.restarted ? 1 : 0) << '\n';
  }
}

std::string trace_csv_string(const std::vector<TraceRow>& rows) {
  std::ostringstream os;
  write_trace_csv(os, rows);
  return os.str();
}

std::vector<TraceRow> parse_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw InvalidInput("csv: missing or unexpected header");
  }
  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<std::string_view, 8> fields;
    std::string_view rest = line;
    for (std::size_t f = 0; f < fields.size(); ++f) {
      const auto comma = rest.find(',');
      if ((comma == std::string_view::npos) != (f + 1 == fields.size())) {
        throw InvalidInput("csv: expected 8 fields in '" + line + "'");
      }
      fields[f] = rest.substr(0, comma);
      if (comma != std::string_view::npos) rest.remove_prefix(comma + 1);
    }
    TraceRow r;
    r.k = parse_int(fields[0]);
    r.F_gap = parse_double(fields[1]);
    r.iterate_err = parse_double(fields[2]);
    r.increment_norm_sq = parse_double(fields[3]);
    r.support_outside_E = parse_int(fields[4]);
    r.sign_mismatches_on_E = parse_int(fields[5]);
    r.lyapunov_energy = parse_double(fields[6]);
    const auto flag = parse_int(fields[7]);
    if (flag != 0 && flag != 1) throw InvalidInput("csv: restarted must be 0 or 1");
    r.restarted = flag == 1;
    rows.push_back(r);
  }
  return rows;
}

std::vector<TraceRow> parse_trace_csv(std::string_view text) {
  std::istringstream is{std::string(text)};
  return parse_trace_csv(is);
}

}  // namespace gipsa::bench
