#include "smgof/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <optional>

namespace smgof {

class ExprParser {
public:
  explicit ExprParser(const std::string& src) : src_(src) {}

  Expr::Program parse() {
    parse_sum();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    if (max_depth_ > 64) fail("expression too deeply nested");
    prog_.max_stack = max_depth_;
    return std::move(prog_);
  }

private:
  using Op = Expr::Op;

  // sum := product (('+'|'-') product)*
  void parse_sum() {
    parse_product();
    while (true) {
      skip_ws();
      if (consume('+')) {
        parse_product();
        emit({Op::Add});
      } else if (consume('-')) {
        parse_product();
        emit({Op::Sub});
      } else {
        break;
      }
    }
  }

  // product := unary (('*'|'/') unary)*
  void parse_product() {
    parse_unary();
    while (true) {
      skip_ws();
      if (consume('*')) {
        parse_unary();
        emit({Op::Mul});
      } else if (consume('/')) {
        parse_unary();
        emit({Op::Div});
      } else {
        break;
      }
    }
  }

  void parse_unary() {
    skip_ws();
    if (consume('-')) {
      parse_unary();
      emit({Op::Neg});
      return;
    }
    parse_atom();
  }

  void parse_atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of expression");
    const char c = src_[pos_];
    if (consume('(')) {
      parse_sum();
      expect(')');
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      parse_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      parse_identifier();
      return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  void parse_number() {
    const char* begin = src_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    push({Op::Const, 0, v});
  }

  void parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string name = src_.substr(start, pos_ - start);

    if (name == "t") {
      push({Op::Time});
      return;
    }
    if (auto idx = slot_index(name, "x")) {
      prog_.max_covariate = std::max(prog_.max_covariate, *idx);
      push({Op::Covariate, *idx - 1});
      return;
    }
    if (auto idx = slot_index(name, "theta")) {
      prog_.max_param = std::max(prog_.max_param, *idx);
      push({Op::Param, *idx - 1});
      return;
    }
    if (name == "sin" || name == "cos" || name == "exp" || name == "abs") {
      expect('(');
      parse_sum();
      expect(')');
      emit({name == "sin"   ? Op::Sin
            : name == "cos" ? Op::Cos
            : name == "exp" ? Op::Exp
                            : Op::Abs});
      return;
    }
    if (name == "pow") {
      expect('(');
      parse_sum();
      skip_ws();
      expect(',');
      parse_sum();
      expect(')');
      emit({Op::Pow});
      return;
    }
    fail("unknown identifier '" + name + "'");
  }

  // "x" -> 1, "x2" -> 2, ...; empty when the name does not match the prefix.
  static std::optional<int> slot_index(const std::string& name, const std::string& prefix) {
    if (name.rfind(prefix, 0) != 0) return std::nullopt;
    const std::string tail = name.substr(prefix.size());
    if (tail.empty()) return 1;
    int idx = 0;
    for (char c : tail) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
      idx = idx * 10 + (c - '0');
      if (idx > 16) return std::nullopt;
    }
    return idx >= 1 ? std::optional<int>(idx) : std::nullopt;
  }

  void emit(Expr::Instr instr) {
    // Operators consume operands already on the stack.
    switch (instr.op) {
      case Op::Add: case Op::Sub: case Op::Mul: case Op::Div: case Op::Pow:
        --depth_;
        break;
      default:
        break;
    }
    prog_.code.push_back(instr);
  }

  void push(Expr::Instr instr) {
    ++depth_;
    max_depth_ = std::max(max_depth_, depth_);
    prog_.code.push_back(instr);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip_ws();
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }

  [[noreturn]] void fail(const std::string& what) {
    throw BadDataError("expression error at position " + std::to_string(pos_) + ": " + what +
                       " in \"" + src_ + "\"");
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  int max_depth_ = 0;
  Expr::Program prog_;
};

Expr Expr::parse(const std::string& source) {
  ExprParser parser(source);
  Expr e;
  e.program_ = std::make_shared<const Program>(parser.parse());
  e.source_ = source;
  return e;
}

double Expr::eval(double t, std::span<const double> x, std::span<const double> theta) const {
  if (!program_) throw BadDataError("eval of empty expression");
  double stack[64];
  int top = -1;
  for (const Instr& in : program_->code) {
    switch (in.op) {
      case Op::Const: stack[++top] = in.value; break;
      case Op::Time: stack[++top] = t; break;
      case Op::Covariate:
        if (in.index >= static_cast<int>(x.size()))
          throw BadDataError("expression references x" + std::to_string(in.index + 1) +
                             " but only " + std::to_string(x.size()) + " covariates exist");
        stack[++top] = x[in.index];
        break;
      case Op::Param:
        if (in.index >= static_cast<int>(theta.size()))
          throw BadDataError("expression references theta" + std::to_string(in.index + 1) +
                             " but only " + std::to_string(theta.size()) + " parameters exist");
        stack[++top] = theta[in.index];
        break;
      case Op::Add: stack[top - 1] += stack[top]; --top; break;
      case Op::Sub: stack[top - 1] -= stack[top]; --top; break;
      case Op::Mul: stack[top - 1] *= stack[top]; --top; break;
      case Op::Div: stack[top - 1] /= stack[top]; --top; break;
      case Op::Neg: stack[top] = -stack[top]; break;
      case Op::Sin: stack[top] = std::sin(stack[top]); break;
      case Op::Cos: stack[top] = std::cos(stack[top]); break;
      case Op::Exp: stack[top] = std::exp(stack[top]); break;
      case Op::Abs: stack[top] = std::abs(stack[top]); break;
      case Op::Pow: stack[top - 1] = std::pow(stack[top - 1], stack[top]); --top; break;
    }
  }
  return stack[0];
}

int Expr::max_covariate() const { return program_ ? program_->max_covariate : 0; }
int Expr::max_param() const { return program_ ? program_->max_param : 0; }

} // namespace smgof
