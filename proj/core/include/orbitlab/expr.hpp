#pragma once

// Elementary real expressions in one integer variable, evaluated either
// exactly (when the value is rational) or as a certified enclosure.
//
// Grammar: numbers (integers, decimals, p/q via division), the variable,
// named constants, + - * / ^ (right associative), unary minus, and the
// functions log, exp, sqrt, frac.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orbitlab/numerics.hpp"

namespace orbitlab {

/// Named irrational constants. Each carries a symbol (its name, used by the
/// exact linear algebra) and an enclosure generator.
class SymbolRegistry {
 public:
  using Generator = std::function<RealInterval(unsigned precision)>;

  /// pi, e, sqrt2, phi.
  static const SymbolRegistry& builtin();

  void declare(const std::string& name, Generator enclose);
  bool contains(const std::string& name) const;
  RealInterval enclose(const std::string& name, unsigned precision) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, Generator> generators_;
};

struct ExprNode {
  enum class Kind { Number, Variable, Symbol, Neg, Add, Sub, Mul, Div, Pow, Call };

  Kind kind = Kind::Number;
  BigRational number;
  std::string name;  // symbol or function name
  std::vector<std::shared_ptr<const ExprNode>> args;
};

class RealExpr {
 public:
  RealExpr() = default;

  /// Parses text with `variable` as the free integer variable. Identifiers
  /// other than the variable, functions and registered constants are rejected.
  static RealExpr parse(std::string_view text, const std::string& variable = "n",
                        const SymbolRegistry& symbols = SymbolRegistry::builtin());

  const std::string& text() const { return text_; }
  const std::string& variable() const { return variable_; }
  const ExprNode& root() const { return *root_; }

  RealInterval eval(const BigRational& value, unsigned precision,
                    const SymbolRegistry& symbols = SymbolRegistry::builtin()) const;
  /// Exact value when every step stays rational (no constants, no
  /// transcendental functions except at trivial arguments).
  std::optional<BigRational> try_exact(const BigRational& value) const;

 private:
  std::string text_;
  std::string variable_ = "n";
  std::shared_ptr<const ExprNode> root_;
};

/// Convenience wrapper: parse and evaluate at integer n.
RealInterval real_eval(std::string_view expr, const BigRational& n, unsigned precision);
RealInterval real_eval(const RealExpr& expr, const BigRational& n, unsigned precision);

}  // namespace orbitlab
