#include "orbitlab/expr.hpp"

#include <cctype>

namespace orbitlab {

namespace {

RealInterval golden_ratio(unsigned p) {
  const RealInterval five = RealInterval::from_int(5, p);
  return (RealInterval::from_int(1, p) + sqrt(five)) / RealInterval::from_int(2, p);
}

}  // namespace

const SymbolRegistry& SymbolRegistry::builtin() {
  static const SymbolRegistry registry = [] {
    SymbolRegistry r;
    r.declare("pi", [](unsigned p) { return RealInterval::pi(p); });
    r.declare("e", [](unsigned p) { return RealInterval::euler(p); });
    r.declare("sqrt2", [](unsigned p) { return sqrt(RealInterval::from_int(2, p)); });
    r.declare("phi", golden_ratio);
    return r;
  }();
  return registry;
}

void SymbolRegistry::declare(const std::string& name, Generator enclose) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) {
    throw ParseError("invalid constant name '" + name + "'");
  }
  generators_[name] = std::move(enclose);
}

bool SymbolRegistry::contains(const std::string& name) const { return generators_.count(name) > 0; }

RealInterval SymbolRegistry::enclose(const std::string& name, unsigned precision) const {
  const auto it = generators_.find(name);
  if (it == generators_.end()) throw ParseError("unknown constant '" + name + "'");
  return it->second(precision);
}

std::vector<std::string> SymbolRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, gen] : generators_) out.push_back(name);
  return out;
}

// ----------------------------------------------------------------- parser

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

bool is_function(const std::string& s) { return s == "log" || s == "exp" || s == "sqrt" || s == "frac"; }

NodePtr make(ExprNode::Kind kind, std::vector<NodePtr> args = {}) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->args = std::move(args);
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, const std::string& variable, const SymbolRegistry& symbols)
      : s_(text), variable_(variable), symbols_(symbols) {}

  NodePtr parse() {
    NodePtr e = expression();
    skip_space();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression '" + std::string(s_) + "': " + what + " at offset " + std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(ExprNode::Kind::Add, {lhs, term()});
      } else if (accept('-')) {
        lhs = make(ExprNode::Kind::Sub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(ExprNode::Kind::Mul, {lhs, unary()});
      } else if (accept('/')) {
        lhs = make(ExprNode::Kind::Div, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(ExprNode::Kind::Neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(ExprNode::Kind::Pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expression();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprNode::Kind::Number;
      n->number = parse_rational(s_.substr(start, pos_ - start));
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string id(s_.substr(start, pos_ - start));
      if (is_function(id)) {
        if (!accept('(')) fail("expected '(' after " + id);
        NodePtr arg = expression();
        if (!accept(')')) fail("expected ')'");
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprNode::Kind::Call;
        n->name = id;
        n->args = {arg};
        return n;
      }
      auto n = std::make_shared<ExprNode>();
      n->name = id;
      if (id == variable_) {
        n->kind = ExprNode::Kind::Variable;
      } else if (symbols_.contains(id)) {
        n->kind = ExprNode::Kind::Symbol;
      } else {
        fail("unknown identifier '" + id + "'");
      }
      return n;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  const std::string& variable_;
  const SymbolRegistry& symbols_;
};

std::optional<BigRational> exact_sqrt(const BigRational& q) {
  if (q < 0) return std::nullopt;
  BigInt rn;
  BigInt rd;
  mpz_sqrt(rn.get_mpz_t(), q.get_num_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), q.get_den_mpz_t());
  if (rn * rn != q.get_num() || rd * rd != q.get_den()) return std::nullopt;
  BigRational r(rn, rd);
  r.canonicalize();
  return r;
}

std::optional<BigRational> exact_of(const ExprNode& node, const BigRational& value) {
  using K = ExprNode::Kind;
  switch (node.kind) {
    case K::Number:
      return node.number;
    case K::Variable:
      return value;
    case K::Symbol:
      return std::nullopt;
    case K::Neg: {
      auto a = exact_of(*node.args[0], value);
      if (!a) return std::nullopt;
      return BigRational(-*a);
    }
    case K::Add:
    case K::Sub:
    case K::Mul:
    case K::Div: {
      auto a = exact_of(*node.args[0], value);
      if (!a) return std::nullopt;
      auto b = exact_of(*node.args[1], value);
      if (!b) return std::nullopt;
      if (node.kind == K::Add) return BigRational(*a + *b);
      if (node.kind == K::Sub) return BigRational(*a - *b);
      if (node.kind == K::Mul) return BigRational(*a * *b);
      if (*b == 0) throw DomainError("division by zero");
      return BigRational(*a / *b);
    }
    case K::Pow: {
      auto a = exact_of(*node.args[0], value);
      if (!a) return std::nullopt;
      auto b = exact_of(*node.args[1], value);
      if (!b || b->get_den() != 1 || !b->get_num().fits_slong_p()) return std::nullopt;
      const long e = b->get_num().get_si();
      if (e >= 0) return pow_int(*a, static_cast<unsigned long>(e));
      if (*a == 0) throw DomainError("zero to a negative power");
      return BigRational(1 / pow_int(*a, static_cast<unsigned long>(-e)));
    }
    case K::Call: {
      auto a = exact_of(*node.args[0], value);
      if (!a) return std::nullopt;
      if (node.name == "frac") return BigRational(*a - BigRational(floor_of(*a)));
      if (node.name == "sqrt") return exact_sqrt(*a);
      if (node.name == "log" && *a == 1) return BigRational(0);
      if (node.name == "exp" && *a == 0) return BigRational(1);
      if (node.name == "log" && *a <= 0) throw DomainError("log of a nonpositive value");
      return std::nullopt;
    }
  }
  return std::nullopt;
}

RealInterval eval_node(const ExprNode& node, const BigRational& value, unsigned p, const SymbolRegistry& symbols) {
  using K = ExprNode::Kind;
  if (node.kind != K::Symbol) {
    if (auto q = exact_of(node, value)) return RealInterval::exact(*q, p);
  }
  switch (node.kind) {
    case K::Number:
    case K::Variable:
      break;
    case K::Symbol:
      return symbols.enclose(node.name, p);
    case K::Neg:
      return -eval_node(*node.args[0], value, p, symbols);
    case K::Add:
      return eval_node(*node.args[0], value, p, symbols) + eval_node(*node.args[1], value, p, symbols);
    case K::Sub:
      return eval_node(*node.args[0], value, p, symbols) - eval_node(*node.args[1], value, p, symbols);
    case K::Mul:
      return eval_node(*node.args[0], value, p, symbols) * eval_node(*node.args[1], value, p, symbols);
    case K::Div:
      return eval_node(*node.args[0], value, p, symbols) / eval_node(*node.args[1], value, p, symbols);
    case K::Pow: {
      const RealInterval base = eval_node(*node.args[0], value, p, symbols);
      if (auto e = exact_of(*node.args[1], value)) return pow_rational(base, *e);
      return exp(eval_node(*node.args[1], value, p, symbols) * log(base));
    }
    case K::Call: {
      const RealInterval a = eval_node(*node.args[0], value, p, symbols);
      if (node.name == "log") return log(a);
      if (node.name == "exp") return exp(a);
      if (node.name == "sqrt") return sqrt(a);
      return frac(a);
    }
  }
  throw DomainError("unreachable expression node");
}

}  // namespace

RealExpr RealExpr::parse(std::string_view text, const std::string& variable, const SymbolRegistry& symbols) {
  RealExpr e;
  e.text_ = std::string(text);
  e.variable_ = variable;
  e.root_ = Parser(text, variable, symbols).parse();
  return e;
}

RealInterval RealExpr::eval(const BigRational& value, unsigned precision, const SymbolRegistry& symbols) const {
  if (!root_) throw ParseError("empty expression");
  return eval_node(*root_, value, precision, symbols);
}

std::optional<BigRational> RealExpr::try_exact(const BigRational& value) const {
  if (!root_) throw ParseError("empty expression");
  return exact_of(*root_, value);
}

RealInterval real_eval(std::string_view expr, const BigRational& n, unsigned precision) {
  return RealExpr::parse(expr).eval(n, precision);
}

RealInterval real_eval(const RealExpr& expr, const BigRational& n, unsigned precision) {
  return expr.eval(n, precision);
}

}  // namespace orbitlab
