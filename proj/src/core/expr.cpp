#include "core/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <vector>

#include "core/errors.hpp"

namespace fkm {

namespace {

enum class Op {
  Const,
  Var,
  Add,
  Sub,
  Mul,
  Div,
  Neg,
  Pow,   // real exponent (rhs constant-folded or general)
  IPow,  // integer exponent
  Sqrt,
  Exp,
  Log,
  Sin,
  Cos,
  Tan,
  Atan,
};

}  // namespace

struct Expression::Node {
  Op op;
  double num = 0.0;  // Const value or unused
  long ipow = 0;     // IPow exponent
  int var = -1;      // Var slot in the phase vector
  std::unique_ptr<Node> a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::unique_ptr<Node>;

NodePtr mk(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_unique<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr mkConst(double v) {
  auto n = mk(Op::Const);
  n->num = v;
  return n;
}

class Parser {
public:
  Parser(const std::string& s, int n) : s_(s), n_(n) {}

  NodePtr run() {
    auto e = parseExpr();
    skipWs();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& msg) {
    raise(ErrorCode::Config, "expression error at position " +
                                 std::to_string(pos_) + ": " + msg + " in '" +
                                 s_ + "'");
  }

  void skipWs() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool consume(char c) {
    skipWs();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skipWs();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  NodePtr parseExpr() {
    auto lhs = parseTerm();
    while (true) {
      if (consume('+'))
        lhs = mk(Op::Add, std::move(lhs), parseTerm());
      else if (consume('-'))
        lhs = mk(Op::Sub, std::move(lhs), parseTerm());
      else
        return lhs;
    }
  }

  NodePtr parseTerm() {
    auto lhs = parseUnary();
    while (true) {
      if (consume('*'))
        lhs = mk(Op::Mul, std::move(lhs), parseUnary());
      else if (consume('/'))
        lhs = mk(Op::Div, std::move(lhs), parseUnary());
      else
        return lhs;
    }
  }

  NodePtr parseUnary() {
    if (consume('-')) return mk(Op::Neg, parseUnary());
    return parsePower();
  }

  NodePtr parsePower() {
    auto base = parsePrimary();
    if (!consume('^')) return base;
    auto expNode = parseUnary();  // right associative, -: part of exponent
    if (expNode->op == Op::Const || (expNode->op == Op::Neg && expNode->a->op == Op::Const)) {
      double e = expNode->op == Op::Const ? expNode->num : -expNode->a->num;
      if (e == std::floor(e) && std::abs(e) <= 64) {
        auto n = mk(Op::IPow, std::move(base));
        n->ipow = static_cast<long>(e);
        return n;
      }
      auto n = mk(Op::Pow, std::move(base));
      n->num = e;
      return n;
    }
    fail("exponent must be a numeric constant");
  }

  NodePtr parsePrimary() {
    skipWs();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    if (consume('(')) {
      auto e = parseExpr();
      if (!consume(')')) fail("missing ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parseNumber();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parseIdent();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr parseNumber() {
    double v = 0.0;
    const char* begin = s_.data() + pos_;
    const char* end = s_.data() + s_.size();
    auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc()) fail("malformed number");
    pos_ = res.ptr - s_.data();
    return mkConst(v);
  }

  NodePtr parseIdent() {
    size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    std::string id = s_.substr(start, pos_ - start);

    if (id == "pi") return mkConst(M_PI);
    static const std::pair<const char*, Op> fns[] = {
        {"sqrt", Op::Sqrt}, {"exp", Op::Exp}, {"log", Op::Log},
        {"sin", Op::Sin},   {"cos", Op::Cos}, {"tan", Op::Tan},
        {"atan", Op::Atan},
    };
    for (auto& [name, op] : fns) {
      if (id == name) {
        if (!consume('(')) fail("expected '(' after " + id);
        auto arg = parseExpr();
        if (!consume(')')) fail("missing ')' after " + id + " argument");
        return mk(op, std::move(arg));
      }
    }

    // Variables: x<k> or y<k>, 1-based, k <= n.
    if ((id[0] == 'x' || id[0] == 'y') && id.size() > 1) {
      int k = 0;
      auto res = std::from_chars(id.data() + 1, id.data() + id.size(), k);
      if (res.ec == std::errc() && res.ptr == id.data() + id.size() && k >= 1) {
        if (k > n_)
          fail("variable " + id + " exceeds dimension " + std::to_string(n_));
        auto node = mk(Op::Var);
        node->var = (id[0] == 'x' ? k - 1 : n_ + k - 1);
        return node;
      }
    }
    fail("unknown identifier '" + id + "'");
  }

  const std::string& s_;
  int n_;
  size_t pos_ = 0;
};

template <class T>
T evalNode(const Node& node, std::span<const T> c) {
  using std::atan;
  using std::cos;
  using std::exp;
  using std::log;
  using std::pow;
  using std::sin;
  using std::sqrt;
  using std::tan;
  switch (node.op) {
    case Op::Const: {
      if constexpr (std::is_same_v<T, double>)
        return node.num;
      else
        return T::constant(c[0].layout(), node.num);
    }
    case Op::Var:
      return c[node.var];
    case Op::Add:
      return evalNode(*node.a, c) + evalNode(*node.b, c);
    case Op::Sub:
      return evalNode(*node.a, c) - evalNode(*node.b, c);
    case Op::Mul:
      return evalNode(*node.a, c) * evalNode(*node.b, c);
    case Op::Div:
      return evalNode(*node.a, c) / evalNode(*node.b, c);
    case Op::Neg:
      return -evalNode(*node.a, c);
    case Op::Pow:
      return pow(evalNode(*node.a, c), node.num);
    case Op::IPow: {
      if constexpr (std::is_same_v<T, double>) {
        double base = evalNode(*node.a, c);
        double acc = 1.0;
        long k = node.ipow < 0 ? -node.ipow : node.ipow;
        for (double b2 = base; k > 0; k >>= 1) {
          if (k & 1) acc *= b2;
          if (k > 1) b2 *= b2;
        }
        return node.ipow < 0 ? 1.0 / acc : acc;
      } else {
        return ipow(evalNode(*node.a, c), node.ipow);
      }
    }
    case Op::Sqrt:
      return sqrt(evalNode(*node.a, c));
    case Op::Exp:
      return exp(evalNode(*node.a, c));
    case Op::Log:
      return log(evalNode(*node.a, c));
    case Op::Sin:
      return sin(evalNode(*node.a, c));
    case Op::Cos:
      return cos(evalNode(*node.a, c));
    case Op::Tan:
      return tan(evalNode(*node.a, c));
    case Op::Atan:
      return atan(evalNode(*node.a, c));
  }
  raise(ErrorCode::Config, "corrupt expression node");
}

bool usesFiberVar(const Node& node, int n) {
  if (node.op == Op::Var) return node.var >= n;
  if (node.a && usesFiberVar(*node.a, n)) return true;
  if (node.b && usesFiberVar(*node.b, n)) return true;
  return false;
}

}  // namespace

Expression::Expression(std::string text, int n, std::unique_ptr<Node> root)
    : text_(std::move(text)), n_(n), root_(std::move(root)) {}

Expression::~Expression() = default;

std::shared_ptr<const Expression> Expression::parse(const std::string& text,
                                                    int n) {
  Parser p(text, n);
  auto root = p.run();
  return std::shared_ptr<const Expression>(
      new Expression(text, n, std::move(root)));
}

int Expression::phaseDim() const { return 2 * n_; }

double Expression::eval(std::span<const double> c) const {
  return evalNode<double>(*root_, c);
}

Taylor<double> Expression::eval(std::span<const Taylor<double>> c) const {
  return evalNode<Taylor<double>>(*root_, c);
}

Taylor<Grad> Expression::eval(std::span<const Taylor<Grad>> c) const {
  return evalNode<Taylor<Grad>>(*root_, c);
}

bool Expression::baseOnly() const { return !usesFiberVar(*root_, n_); }

}  // namespace fkm
