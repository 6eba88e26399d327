#pragma once

// Closed-form univariate expressions in the single variable `x`.
//
// Grammar (see docs/formats.md):
//   expr    = term { ("+" | "-") term } ;
//   term    = unary { ("*" | "/") unary } ;
//   unary   = "-" unary | power ;
//   power   = primary [ "^" unary ] ;
//   primary = number | "x" | "pi" | "e" | name "(" expr { "," expr } ")"
//           | "(" expr ")" ;

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ibba {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : std::runtime_error(message + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NodeKind { Constant, Variable, Negate, Binary, Call };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Function { Sin, Cos, Tan, Exp, Log, Abs, Sqrt, Min, Max };

struct ExpressionAst {
  NodeKind kind = NodeKind::Constant;
  double value = 0.0;       // Constant
  std::string name;         // Constant: "pi" or "e" when written by name
  BinaryOp op = BinaryOp::Add;
  Function function = Function::Sin;
  std::vector<ExpressionAst> children;
};

namespace detail {

struct FunctionInfo {
  std::string_view name;
  Function function;
  std::size_t min_arity;
  std::size_t max_arity;  // 0 = unbounded
};

inline constexpr std::array<FunctionInfo, 9> kFunctions{{
    {"sin", Function::Sin, 1, 1},
    {"cos", Function::Cos, 1, 1},
    {"tan", Function::Tan, 1, 1},
    {"exp", Function::Exp, 1, 1},
    {"log", Function::Log, 1, 1},
    {"abs", Function::Abs, 1, 1},
    {"sqrt", Function::Sqrt, 1, 1},
    {"min", Function::Min, 2, 0},
    {"max", Function::Max, 2, 0},
}};

inline std::string_view function_name(Function f) {
  for (const auto& info : kFunctions) {
    if (info.function == f) return info.name;
  }
  return "?";
}

inline char op_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return '+';
    case BinaryOp::Sub: return '-';
    case BinaryOp::Mul: return '*';
    case BinaryOp::Div: return '/';
    case BinaryOp::Pow: return '^';
  }
  return '?';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ExpressionAst parse() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("empty expression", 0);
    ExpressionAst root = expr();
    skip_space();
    if (pos_ != text_.size()) {
      throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    }
    return root;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r' ||
            text_[pos_] == '\n')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) {
        throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      }
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  static ExpressionAst binary(BinaryOp op, ExpressionAst lhs, ExpressionAst rhs) {
    ExpressionAst node;
    node.kind = NodeKind::Binary;
    node.op = op;
    node.children.push_back(std::move(lhs));
    node.children.push_back(std::move(rhs));
    return node;
  }

  ExpressionAst expr() {
    ExpressionAst lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = binary(BinaryOp::Add, std::move(lhs), term());
      } else if (accept('-')) {
        lhs = binary(BinaryOp::Sub, std::move(lhs), term());
      } else {
        return lhs;
      }
    }
  }

  ExpressionAst term() {
    ExpressionAst lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = binary(BinaryOp::Mul, std::move(lhs), unary());
      } else if (accept('/')) {
        lhs = binary(BinaryOp::Div, std::move(lhs), unary());
      } else {
        return lhs;
      }
    }
  }

  ExpressionAst unary() {
    if (accept('-')) {
      ExpressionAst node;
      node.kind = NodeKind::Negate;
      node.children.push_back(unary());
      return node;
    }
    return power();
  }

  ExpressionAst power() {
    ExpressionAst base = primary();
    if (accept('^')) return binary(BinaryOp::Pow, std::move(base), unary());
    return base;
  }

  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool is_ident(char c) { return is_ident_start(c) || is_digit(c); }

  ExpressionAst number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && is_digit(text_[p])) {
        pos_ = p;
        while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
      }
    }
    const std::string_view digits = text_.substr(start, pos_ - start);
    if (digits == ".") throw ParseError("malformed number", start);
    ExpressionAst node;
    node.kind = NodeKind::Constant;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), node.value);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || !std::isfinite(node.value)) {
      throw ParseError("malformed number '" + std::string(digits) + "'", start);
    }
    return node;
  }

  ExpressionAst primary() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (is_digit(c) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      ExpressionAst inner = expr();
      expect(')');
      return inner;
    }
    if (!is_ident_start(c)) {
      throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident(text_[pos_])) ++pos_;
    const std::string_view ident = text_.substr(start, pos_ - start);

    ExpressionAst node;
    if (ident == "x") {
      node.kind = NodeKind::Variable;
      return node;
    }
    if (ident == "pi" || ident == "e") {
      node.kind = NodeKind::Constant;
      node.name = std::string(ident);
      node.value = ident == "pi" ? std::numbers::pi : std::numbers::e;
      return node;
    }
    for (const auto& info : kFunctions) {
      if (info.name != ident) continue;
      if (!accept('(')) throw ParseError("expected '(' after " + std::string(ident), pos_);
      node.kind = NodeKind::Call;
      node.function = info.function;
      node.children.push_back(expr());
      while (accept(',')) node.children.push_back(expr());
      expect(')');
      const std::size_t n = node.children.size();
      if (n < info.min_arity || (info.max_arity != 0 && n > info.max_arity)) {
        throw ParseError("arity mismatch: " + std::string(ident) + " takes " +
                             (info.max_arity == 0
                                  ? "at least " + std::to_string(info.min_arity)
                                  : std::to_string(info.min_arity)) +
                             " argument(s), got " + std::to_string(n),
                         start);
      }
      return node;
    }
    throw ParseError("unknown identifier '" + std::string(ident) + "'", start);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

enum class OpCode : unsigned char { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Call };

struct Instruction {
  OpCode code;
  Function function = Function::Sin;
  std::size_t arity = 0;
  double value = 0.0;
};

inline void compile(const ExpressionAst& node, std::vector<Instruction>& out) {
  switch (node.kind) {
    case NodeKind::Constant:
      out.push_back({OpCode::Const, Function::Sin, 0, node.value});
      return;
    case NodeKind::Variable:
      out.push_back({OpCode::Var});
      return;
    case NodeKind::Negate:
      compile(node.children[0], out);
      out.push_back({OpCode::Neg});
      return;
    case NodeKind::Binary: {
      compile(node.children[0], out);
      compile(node.children[1], out);
      constexpr std::array<OpCode, 5> codes{OpCode::Add, OpCode::Sub, OpCode::Mul,
                                            OpCode::Div, OpCode::Pow};
      out.push_back({codes[static_cast<std::size_t>(node.op)]});
      return;
    }
    case NodeKind::Call:
      for (const auto& child : node.children) compile(child, out);
      out.push_back({OpCode::Call, node.function, node.children.size()});
      return;
  }
}

inline std::size_t stack_depth(const std::vector<Instruction>& program) {
  std::size_t depth = 0, peak = 0;
  for (const auto& ins : program) {
    switch (ins.code) {
      case OpCode::Const:
      case OpCode::Var: ++depth; break;
      case OpCode::Neg: break;
      case OpCode::Call: depth -= ins.arity - 1; break;
      default: --depth; break;
    }
    peak = std::max(peak, depth);
  }
  return peak;
}

[[noreturn]] inline void domain_error(const char* what, double arg) {
  throw EvaluationError(std::string(what) + " (argument " + std::to_string(arg) + ")");
}

inline double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw EvaluationError(std::string("non-finite result of ") + what);
  return v;
}

inline double apply(Function f, const double* args, std::size_t n) {
  const double a = args[0];
  switch (f) {
    case Function::Sin: return checked(std::sin(a), "sin");
    case Function::Cos: return checked(std::cos(a), "cos");
    case Function::Tan: return checked(std::tan(a), "tan");
    case Function::Exp: return checked(std::exp(a), "exp");
    case Function::Log:
      if (!(a > 0.0)) domain_error("log of non-positive value", a);
      return checked(std::log(a), "log");
    case Function::Abs: return std::fabs(a);
    case Function::Sqrt:
      if (a < 0.0) domain_error("sqrt of negative value", a);
      return std::sqrt(a);
    case Function::Min: {
      double r = a;
      for (std::size_t i = 1; i < n; ++i) r = std::min(r, args[i]);
      return r;
    }
    case Function::Max: {
      double r = a;
      for (std::size_t i = 1; i < n; ++i) r = std::max(r, args[i]);
      return r;
    }
  }
  return a;
}

inline double run(const std::vector<Instruction>& program, double* stack, double x) {
  std::size_t sp = 0;
  for (const auto& ins : program) {
    switch (ins.code) {
      case OpCode::Const: stack[sp++] = ins.value; break;
      case OpCode::Var: stack[sp++] = x; break;
      case OpCode::Neg: stack[sp - 1] = -stack[sp - 1]; break;
      case OpCode::Add: --sp; stack[sp - 1] = checked(stack[sp - 1] + stack[sp], "+"); break;
      case OpCode::Sub: --sp; stack[sp - 1] = checked(stack[sp - 1] - stack[sp], "-"); break;
      case OpCode::Mul: --sp; stack[sp - 1] = checked(stack[sp - 1] * stack[sp], "*"); break;
      case OpCode::Div:
        --sp;
        if (stack[sp] == 0.0) domain_error("division by zero", stack[sp - 1]);
        stack[sp - 1] = checked(stack[sp - 1] / stack[sp], "/");
        break;
      case OpCode::Pow:
        --sp;
        stack[sp - 1] = checked(std::pow(stack[sp - 1], stack[sp]), "^");
        break;
      case OpCode::Call:
        sp -= ins.arity;
        stack[sp] = apply(ins.function, stack + sp, ins.arity);
        ++sp;
        break;
    }
  }
  return stack[0];
}

inline void serialize_to(const ExpressionAst& node, std::string& out) {
  switch (node.kind) {
    case NodeKind::Constant: {
      if (!node.name.empty()) {
        out += node.name;
        return;
      }
      std::array<char, 32> buf{};
      auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), node.value);
      out.append(buf.data(), ptr);
      return;
    }
    case NodeKind::Variable:
      out += 'x';
      return;
    case NodeKind::Negate:
      out += "(-";
      serialize_to(node.children[0], out);
      out += ')';
      return;
    case NodeKind::Binary:
      out += '(';
      serialize_to(node.children[0], out);
      out += op_symbol(node.op);
      serialize_to(node.children[1], out);
      out += ')';
      return;
    case NodeKind::Call:
      out += function_name(node.function);
      out += '(';
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        if (i) out += ',';
        serialize_to(node.children[i], out);
      }
      out += ')';
      return;
  }
}

}  // namespace detail

inline ExpressionAst parse(std::string_view text) { return detail::Parser(text).parse(); }

/// Fully parenthesized text that parses back to an identical tree.
inline std::string serialize(const ExpressionAst& ast) {
  std::string out;
  detail::serialize_to(ast, out);
  return out;
}

/// Tree-walking evaluation; reference path for the compiled form in Expression.
inline double eval(const ExpressionAst& node, double x) {
  using detail::checked;
  switch (node.kind) {
    case NodeKind::Constant: return node.value;
    case NodeKind::Variable: return x;
    case NodeKind::Negate: return -eval(node.children[0], x);
    case NodeKind::Binary: {
      const double l = eval(node.children[0], x);
      const double r = eval(node.children[1], x);
      switch (node.op) {
        case BinaryOp::Add: return checked(l + r, "+");
        case BinaryOp::Sub: return checked(l - r, "-");
        case BinaryOp::Mul: return checked(l * r, "*");
        case BinaryOp::Div:
          if (r == 0.0) detail::domain_error("division by zero", l);
          return checked(l / r, "/");
        case BinaryOp::Pow: return checked(std::pow(l, r), "^");
      }
      return 0.0;
    }
    case NodeKind::Call: {
      std::vector<double> args;
      args.reserve(node.children.size());
      for (const auto& child : node.children) args.push_back(eval(child, x));
      return detail::apply(node.function, args.data(), args.size());
    }
  }
  return 0.0;
}

// Immutable parsed expression, compiled to a postfix program. Copies share
// the tree and program; evaluation is reentrant.
class Expression {
 public:
  Expression() : Expression(ExpressionAst{}, "0") {}

  static Expression parse(std::string_view text) {
    return Expression(ibba::parse(text), std::string(text));
  }

  explicit Expression(ExpressionAst ast, std::string source = {})
  {
    auto impl = std::make_shared<Impl>();
    impl->ast = std::move(ast);
    impl->source = source.empty() ? ibba::serialize(impl->ast) : std::move(source);
    detail::compile(impl->ast, impl->program);
    impl->depth = detail::stack_depth(impl->program);
    impl_ = std::move(impl);
  }

  double operator()(double x) const {
    constexpr std::size_t kInline = 64;
    if (impl_->depth <= kInline) {
      std::array<double, kInline> stack;
      return detail::run(impl_->program, stack.data(), x);
    }
    std::vector<double> stack(impl_->depth);
    return detail::run(impl_->program, stack.data(), x);
  }

  const ExpressionAst& ast() const noexcept { return impl_->ast; }
  /// Text as written by the user.
  const std::string& source() const noexcept { return impl_->source; }
  std::string canonical() const { return ibba::serialize(impl_->ast); }

 private:
  struct Impl {
    ExpressionAst ast;
    std::string source;
    std::vector<detail::Instruction> program;
    std::size_t depth = 0;
  };
  std::shared_ptr<const Impl> impl_;
};

}  // namespace ibba
