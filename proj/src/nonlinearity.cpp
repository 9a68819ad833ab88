#include "curvlab/nonlinearity.hpp"

#include <cctype>
#include <cmath>
#include <memory>

#include "curvlab/error.hpp"

namespace curvlab {

namespace {

// Minimal recursive-descent parser for expressions in one variable s.
struct Parser {
  const std::string& src;
  size_t pos = 0;

  explicit Parser(const std::string& s) : src(s) {}

  void skip() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  bool consume(char c) {
    skip();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  using Node = std::function<double(double)>;

  Node parse() {
    Node e = expr();
    skip();
    if (pos != src.size())
      throw Error(ErrorCode::InvalidArgument, "trailing input in expression: " + src.substr(pos));
    return e;
  }

  Node expr() {
    Node lhs = term();
    for (;;) {
      if (consume('+')) {
        Node rhs = term();
        lhs = [lhs, rhs](double s) { return lhs(s) + rhs(s); };
      } else if (consume('-')) {
        Node rhs = term();
        lhs = [lhs, rhs](double s) { return lhs(s) - rhs(s); };
      } else {
        return lhs;
      }
    }
  }

  Node term() {
    Node lhs = power();
    for (;;) {
      if (consume('*')) {
        Node rhs = power();
        lhs = [lhs, rhs](double s) { return lhs(s) * rhs(s); };
      } else if (consume('/')) {
        Node rhs = power();
        lhs = [lhs, rhs](double s) { return lhs(s) / rhs(s); };
      } else {
        return lhs;
      }
    }
  }

  Node power() {
    Node base = unary();
    if (consume('^')) {
      Node exp = power();  // right associative
      return [base, exp](double s) { return std::pow(base(s), exp(s)); };
    }
    return base;
  }

  Node unary() {
    if (consume('-')) {
      Node n = unary();
      return [n](double s) { return -n(s); };
    }
    consume('+');
    return primary();
  }

  Node primary() {
    skip();
    if (pos >= src.size()) throw Error(ErrorCode::InvalidArgument, "unexpected end of expression");
    const char c = src[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t used = 0;
      const double v = std::stod(src.substr(pos), &used);
      pos += used;
      return [v](double) { return v; };
    }
    if (c == '(') {
      ++pos;
      Node e = expr();
      if (!consume(')')) throw Error(ErrorCode::InvalidArgument, "missing ')' in expression");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t end = pos;
      while (end < src.size() && std::isalpha(static_cast<unsigned char>(src[end]))) ++end;
      const std::string name = src.substr(pos, end - pos);
      pos = end;
      if (name == "s") return [](double s) { return s; };
      if (name == "pi") return [](double) { return M_PI; };
      if (!consume('('))
        throw Error(ErrorCode::InvalidArgument, "unknown symbol '" + name + "' in expression");
      Node arg = expr();
      if (!consume(')')) throw Error(ErrorCode::InvalidArgument, "missing ')' in expression");
      double (*fn)(double) = nullptr;
      if (name == "sin") fn = std::sin;
      else if (name == "cos") fn = std::cos;
      else if (name == "tan") fn = std::tan;
      else if (name == "exp") fn = std::exp;
      else if (name == "log") fn = std::log;
      else if (name == "sqrt") fn = std::sqrt;
      else if (name == "sinh") fn = std::sinh;
      else if (name == "cosh") fn = std::cosh;
      else if (name == "tanh") fn = std::tanh;
      else if (name == "atan") fn = std::atan;
      else if (name == "abs") fn = std::fabs;
      else
        throw Error(ErrorCode::InvalidArgument, "unknown function '" + name + "'");
      return [fn, arg](double s) { return fn(arg(s)); };
    }
    throw Error(ErrorCode::InvalidArgument, std::string("unexpected character '") + c + "'");
  }
};

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace

double eval_expression(const std::string& expr, double s) {
  Parser p(expr);
  return p.parse()(s);
}

Nonlinearity Nonlinearity::torsion() {
  Nonlinearity nl;
  nl.kind = NonlinearityKind::Torsion;
  nl.f = [](double) { return 1.0; };
  nl.fprime = [](double) { return 0.0; };
  nl.F = [](double s) { return s; };
  nl.description = "torsion";
  return nl;
}

Nonlinearity Nonlinearity::eigen(double lambda) {
  Nonlinearity nl;
  nl.kind = NonlinearityKind::Eigen;
  nl.lambda = lambda;
  nl.f = [lambda](double s) { return lambda * s; };
  nl.fprime = [lambda](double) { return lambda; };
  nl.F = [lambda](double s) { return 0.5 * lambda * s * s; };
  nl.description = "eigen";
  return nl;
}

Nonlinearity Nonlinearity::custom(const std::string& expr) {
  Parser p(expr);
  auto fn = p.parse();
  Nonlinearity nl;
  nl.kind = NonlinearityKind::Custom;
  nl.f = fn;
  nl.fprime = [fn](double s) {
    const double h = 1e-6 * std::max(1.0, std::abs(s));
    return (fn(s + h) - fn(s - h)) / (2.0 * h);
  };
  nl.F = [fn](double s) { return integrate(fn, 0.0, s, 1e-12); };
  nl.description = "custom:" + expr;
  return nl;
}

Nonlinearity Nonlinearity::parse(const std::string& spec) {
  if (spec == "torsion") return torsion();
  if (spec == "eigen") return eigen(0.0);  // lambda resolved by the solver
  if (spec.rfind("custom:", 0) == 0) return custom(spec.substr(7));
  throw Error(ErrorCode::InvalidArgument, "unknown nonlinearity '" + spec + "'");
}

void Nonlinearity::validate() const {
  if (f(0.0) < 0.0) throw Error(ErrorCode::InvalidArgument, "nonlinearity requires f(0) >= 0");
  if (std::abs(F(0.0)) > 1e-14) throw Error(ErrorCode::InvalidArgument, "F(0) must vanish");
  for (double s : {0.1, 0.5, 1.0, 2.0}) {
    const double h = 1e-5;
    const double fd = (F(s + h) - F(s - h)) / (2.0 * h);
    if (std::abs(fd - f(s)) > 1e-6 * std::max(1.0, std::abs(f(s))))
      throw Error(ErrorCode::InvalidArgument, "F' != f near s = " + std::to_string(s));
    const double fpd = (f(s + h) - f(s - h)) / (2.0 * h);
    if (std::abs(fpd - fprime(s)) > 1e-4 * std::max(1.0, std::abs(fpd)))
      throw Error(ErrorCode::InvalidArgument, "f' inconsistent near s = " + std::to_string(s));
  }
}

}  // namespace curvlab
