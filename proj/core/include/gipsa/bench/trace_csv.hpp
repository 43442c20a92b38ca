#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace gipsa::bench {

/// One line of a per-iteration run trace.
struct TraceRow {
  std::int64_t k = 0;
  double F_gap = 0.0;               // (F(x^k) - F*) / F*
  double iterate_err = 0.0;         // |x^k - x*|_2
  double increment_norm_sq = 0.0;   // |x^k - x^{k-1}|^2
  std::int64_t support_outside_E = 0;
  std::int64_t sign_mismatches_on_E = 0;
  double lyapunov_energy = 0.0;
  bool restarted = false;

  bool operator==(const TraceRow&) const = default;
};

inline constexpr std::string_view kTraceHeader =
    "k,F_gap,iterate_err,increment_norm_sq,support_outside_E,sign_mismatches_on_E,"
    "lyapunov_energy,restarted";

/// Shortest decimal form that parses back to the same double (at most 17
/// significant digits); "nan", "inf", "-inf" for non-finite values.
std::string format_double(double v);
double parse_double(std::string_view text);

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);
std::string trace_csv_string(const std::vector<TraceRow>& rows);
/// Inverse of write_trace_csv. Throws InvalidInput on malformed input.
std::vector<TraceRow> parse_trace_csv(std::istream& in);
std::vector<TraceRow> parse_trace_csv(std::string_view text);

}  // namespace gipsa::bench
