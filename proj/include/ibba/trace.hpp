#pragma once

// Per-trial trace records and their line-oriented text form:
//
//   #ibba-trace method=<ibba|pen> levels=<m+1> a=<a> b=<b>
//   <k> <x> <nu> <raw> <zstar|-> <t|-> <R_t|->
//
// One record per trial, in creation order. The two initial trials carry no
// selected interval (t and R_t are "-").

#include <array>
#include <charconv>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ibba {

struct TraceRecord {
  std::size_t k = 0;
  double x = 0.0;
  std::size_t index = 0;
  double raw = 0.0;
  std::optional<double> zstar;
  std::optional<std::size_t> t;
  std::optional<double> R;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct Trace {
  std::string method = "ibba";
  std::size_t levels = 1;
  double a = 0.0;
  double b = 1.0;
  std::vector<TraceRecord> records;
};

class TraceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal text that reads back to the same double.
inline std::string to_shortest(double v) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

inline double parse_double(std::string_view text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return v;
}

inline std::size_t parse_count(std::string_view text) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("not a count: '" + std::string(text) + "'");
  }
  return v;
}

inline void write_trace(std::ostream& out, const Trace& trace) {
  out << "#ibba-trace method=" << trace.method << " levels=" << trace.levels
      << " a=" << to_shortest(trace.a) << " b=" << to_shortest(trace.b) << '\n';
  out << "# k x nu raw zstar t R_t\n";
  for (const auto& r : trace.records) {
    out << r.k << ' ' << to_shortest(r.x) << ' ' << r.index << ' ' << to_shortest(r.raw) << ' '
        << (r.zstar ? to_shortest(*r.zstar) : "-") << ' '
        << (r.t ? std::to_string(*r.t) : "-") << ' ' << (r.R ? to_shortest(*r.R) : "-")
        << '\n';
  }
}

inline Trace read_trace(std::istream& in) {
  Trace trace;
  std::string line;
  if (!std::getline(in, line) || line.rfind("#ibba-trace", 0) != 0) {
    throw TraceFormatError("missing #ibba-trace header");
  }
  {
    std::istringstream header(line.substr(11));
    std::string field;
    bool have_levels = false, have_a = false, have_b = false;
    while (header >> field) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) throw TraceFormatError("malformed header field " + field);
      const std::string key = field.substr(0, eq);
      const std::string value = field.substr(eq + 1);
      try {
        if (key == "method") {
          trace.method = value;
        } else if (key == "levels") {
          trace.levels = parse_count(value);
          have_levels = true;
        } else if (key == "a") {
          trace.a = parse_double(value);
          have_a = true;
        } else if (key == "b") {
          trace.b = parse_double(value);
          have_b = true;
        }
      } catch (const std::invalid_argument& e) {
        throw TraceFormatError(std::string("header: ") + e.what());
      }
    }
    if (!have_levels || !have_a || !have_b) throw TraceFormatError("incomplete trace header");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::array<std::string, 7> f;
    for (auto& s : f) {
      if (!(fields >> s)) {
        throw TraceFormatError("line " + std::to_string(line_no) + ": expected 7 fields");
      }
    }
    try {
      TraceRecord r;
      r.k = parse_count(f[0]);
      r.x = parse_double(f[1]);
      r.index = parse_count(f[2]);
      r.raw = parse_double(f[3]);
      if (f[4] != "-") r.zstar = parse_double(f[4]);
      if (f[5] != "-") r.t = parse_count(f[5]);
      if (f[6] != "-") r.R = parse_double(f[6]);
      trace.records.push_back(r);
    } catch (const std::invalid_argument& e) {
      throw TraceFormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return trace;
}

}  // namespace ibba
