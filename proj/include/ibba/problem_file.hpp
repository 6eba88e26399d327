#pragma once

// Plain-text problem files. Keys before the first section describe the
// problem; each [constraint] block adds the next g_j in order, and exactly one
// [objective] block gives f. '#' starts a comment line.
//
//   name = problem7
//   domain = -3, 2
//   reference = -0.774575, -0.33007410     (optional)
//
//   [constraint]
//   expr = sin(x)^3*exp(-sin(3*x))+1/2
//   K = 6.5
//   partial = false                       (optional, default false)
//
//   [objective]
//   expr = exp(-cos(4*x-3))+(4*x-3)^2/250-1
//   K = 7

#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ibba/expression.hpp"
#include "ibba/problem.hpp"
#include "ibba/trace.hpp"

namespace ibba {

class ProblemFileError : public std::runtime_error {
 public:
  ProblemFileError(std::size_t line, const std::string& msg)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  /// 1-based; 0 when the error concerns the file as a whole.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::pair<double, double> parse_pair(std::string_view value, std::size_t line) {
  const auto comma = value.find(',');
  if (comma == std::string_view::npos) throw ProblemFileError(line, "expected two comma-separated numbers");
  try {
    return {parse_double(trim(value.substr(0, comma))), parse_double(trim(value.substr(comma + 1)))};
  } catch (const std::invalid_argument& e) {
    throw ProblemFileError(line, e.what());
  }
}

struct PendingFunction {
  std::size_t line = 0;
  bool objective = false;
  std::optional<Expression> expr;
  std::optional<double> K;
  bool partial = false;
};

inline LipschitzFunction<Expression> finish_block(const PendingFunction& p) {
  const char* what = p.objective ? "[objective]" : "[constraint]";
  if (!p.expr) throw ProblemFileError(p.line, std::string(what) + " block has no expr");
  if (!p.K) throw ProblemFileError(p.line, std::string(what) + " block has no K");
  return {*p.expr, *p.K, p.partial};
}

}  // namespace detail

/// Parses and validates a problem file. Errors carry the offending line.
inline ProblemSpec parse_problem(std::istream& in) {
  using detail::trim;
  std::optional<std::string> name;
  std::optional<std::pair<double, double>> domain;
  std::optional<ReferenceSolution> reference;
  std::vector<LipschitzFunction<Expression>> constraints;
  std::optional<LipschitzFunction<Expression>> objective;
  std::optional<detail::PendingFunction> block;

  const auto close_block = [&] {
    if (!block) return;
    auto fn = detail::finish_block(*block);
    if (block->objective) {
      objective = std::move(fn);
    } else {
      constraints.push_back(std::move(fn));
    }
    block.reset();
  };

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (line.front() == '[') {
      close_block();
      if (line == "[constraint]") {
        if (objective) throw ProblemFileError(line_no, "[constraint] after [objective]");
        block = detail::PendingFunction{line_no, false, {}, {}, false};
      } else if (line == "[objective]") {
        if (objective) throw ProblemFileError(line_no, "duplicate [objective] block");
        block = detail::PendingFunction{line_no, true, {}, {}, false};
      } else {
        throw ProblemFileError(line_no, "unknown section " + std::string(line));
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ProblemFileError(line_no, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));

    if (!block) {
      if (key == "name") {
        if (value.empty()) throw ProblemFileError(line_no, "empty name");
        name = std::string(value);
      } else if (key == "domain") {
        domain = detail::parse_pair(value, line_no);
      } else if (key == "reference") {
        const auto [x, f] = detail::parse_pair(value, line_no);
        reference = ReferenceSolution{x, f};
      } else {
        throw ProblemFileError(line_no, "unknown key '" + key + "'");
      }
      continue;
    }

    if (key == "expr") {
      try {
        block->expr = Expression::parse(value);
      } catch (const ParseError& e) {
        throw ProblemFileError(line_no, "column " +
                                            std::to_string(value.data() - raw.data() + e.offset() + 1) +
                                            ": " + e.what());
      }
    } else if (key == "K") {
      try {
        block->K = parse_double(value);
      } catch (const std::invalid_argument& e) {
        throw ProblemFileError(line_no, e.what());
      }
    } else if (key == "partial") {
      if (value == "true") {
        block->partial = true;
      } else if (value == "false") {
        block->partial = false;
      } else {
        throw ProblemFileError(line_no, "partial must be true or false");
      }
    } else {
      throw ProblemFileError(line_no, "unknown key '" + key + "' in block");
    }
  }
  close_block();

  if (!name) throw ProblemFileError(0, "missing name");
  if (!domain) throw ProblemFileError(0, "missing domain");
  if (!objective) throw ProblemFileError(0, "missing [objective] block");
  ProblemSpec spec(*name, domain->first, domain->second, std::move(constraints), std::move(*objective),
                   reference);
  if (const auto errors = validate(spec); !errors.empty()) throw ProblemFileError(0, errors.front());
  return spec;
}

inline ProblemSpec parse_problem(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_problem(in);
}

inline ProblemSpec load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProblemFileError(0, "cannot open " + path);
  try {
    return parse_problem(in);
  } catch (const ProblemFileError& e) {
    throw ProblemFileError(0, path + ": " + e.what());
  }
}

/// Emits a file that parses back to the same spec. Expressions keep their
/// source text; numbers use the shortest round-trip form.
inline void write_problem(std::ostream& out, const ProblemSpec& spec) {
  out << "name = " << spec.name() << '\n';
  out << "domain = " << to_shortest(spec.a()) << ", " << to_shortest(spec.b()) << '\n';
  if (spec.reference()) {
    out << "reference = " << to_shortest(spec.reference()->x) << ", "
        << to_shortest(spec.reference()->f) << '\n';
  }
  const auto block = [&out](const char* header, const LipschitzFunction<Expression>& fn) {
    out << '\n' << header << '\n';
    out << "expr = " << fn.function.source() << '\n';
    out << "K = " << to_shortest(fn.K) << '\n';
    if (fn.partial) out << "partial = true\n";
  };
  for (const auto& c : spec.constraints()) block("[constraint]", c);
  block("[objective]", spec.objective());
}

inline std::string format_problem(const ProblemSpec& spec) {
  std::ostringstream out;
  write_problem(out, spec);
  return out.str();
}

/// Same name, domain, reference, and per-level expression tree, K and flag.
inline bool same_problem(const ProblemSpec& p, const ProblemSpec& q) {
  if (p.name() != q.name() || p.a() != q.a() || p.b() != q.b()) return false;
  if (p.reference().has_value() != q.reference().has_value()) return false;
  if (p.reference() &&
      (p.reference()->x != q.reference()->x || p.reference()->f != q.reference()->f)) {
    return false;
  }
  if (p.level_count() != q.level_count()) return false;
  for (std::size_t j = 1; j <= p.level_count(); ++j) {
    const auto& u = p.level(j);
    const auto& v = q.level(j);
    if (u.K != v.K || u.partial != v.partial || u.function.canonical() != v.function.canonical()) {
      return false;
    }
  }
  return true;
}

}  // namespace ibba
