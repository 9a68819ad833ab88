#pragma once

#include <functional>
#include <string>

namespace curvlab {

enum class NonlinearityKind { Torsion, Eigen, Custom };

/// Right-hand side f of -Delta u = f(u) together with its derivative and
/// primitive F (with F(0) = 0).
struct Nonlinearity {
  NonlinearityKind kind = NonlinearityKind::Torsion;
  double lambda = 0.0;  // Eigen kind only
  std::function<double(double)> f;
  std::function<double(double)> fprime;
  std::function<double(double)> F;
  std::string description;

  static Nonlinearity torsion();
  static Nonlinearity eigen(double lambda);
  /// Custom smooth f given as an expression in the variable s, e.g.
  /// "1 + 0.5*s" or "exp(s)". f' is obtained by central differences and F by
  /// adaptive quadrature.
  static Nonlinearity custom(const std::string& expr);

  /// Parses "torsion", "eigen" or "custom:<expr>".
  static Nonlinearity parse(const std::string& spec);

  /// Spot-checks F' = f and f' ~ df/ds by finite differences and f(0) >= 0.
  void validate() const;
};

/// Evaluate an arithmetic expression in the variable s (used by the custom
/// nonlinearity and by the CLI).
double eval_expression(const std::string& expr, double s);

}  // namespace curvlab
