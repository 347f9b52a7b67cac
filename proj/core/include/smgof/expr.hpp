#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "smgof/errors.hpp"

namespace smgof {

// Small arithmetic expression over time, covariates and parameters, used by
// the CLI to declare models and dynamics in config files.
//
// Grammar: numbers, + - * / and unary minus, parentheses, the variables
// t, x (= x1), x2, ..., theta (= theta1), theta2, ..., and the functions
// sin, cos, exp, abs, pow(a, b).
class Expr {
public:
  Expr() = default;

  static Expr parse(const std::string& source);

  double eval(double t, std::span<const double> x, std::span<const double> theta) const;

  bool empty() const { return program_ == nullptr; }
  const std::string& source() const { return source_; }

  // Highest covariate / parameter index referenced (1-based; 0 when unused).
  int max_covariate() const;
  int max_param() const;

private:
  enum class Op : std::uint8_t {
    Const, Time, Covariate, Param, Add, Sub, Mul, Div, Neg, Sin, Cos, Exp, Abs, Pow
  };
  struct Instr {
    Op op;
    int index = 0;      // covariate / parameter slot
    double value = 0.0; // constants
  };
  struct Program {
    std::vector<Instr> code;
    int max_stack = 0;
    int max_covariate = 0;
    int max_param = 0;
  };

  std::shared_ptr<const Program> program_;
  std::string source_;

  friend class ExprParser;
};

} // namespace smgof
