#pragma once

#include <concepts>
#include <vector>

#include "dopt/linalg.hpp"

namespace dopt {

/// f(theta) = 1/2 theta^T H theta + g^T theta + c with H symmetric positive definite.
class QuadraticCost {
 public:
  QuadraticCost(Matrix h, Vector g, double c);

  int dim() const { return static_cast<int>(g_.size()); }
  double value(const Vector& theta) const;
  Vector gradient(const Vector& theta) const;
  /// Gradient Lipschitz constant, lambda_max(H).
  double lipschitz_constant() const { return lipschitz_; }
  /// Strong convexity modulus, lambda_min(H).
  double convexity_modulus() const { return convexity_; }

  const Matrix& hessian() const { return h_; }
  const Vector& linear() const { return g_; }
  double offset() const { return c_; }

 private:
  Matrix h_;
  Vector g_;
  double c_;
  double lipschitz_;
  double convexity_;
};

/// The surface other cost families would need to provide.
template <typename F>
concept SmoothCost = requires(const F& f, const Vector& theta) {
  { f.value(theta) } -> std::convertible_to<double>;
  { f.gradient(theta) } -> std::convertible_to<Vector>;
  { f.lipschitz_constant() } -> std::convertible_to<double>;
};
static_assert(SmoothCost<QuadraticCost>);

struct ValueGradient {
  double value;
  Vector gradient;
};

ValueGradient evaluate_with_gradient(const QuadraticCost& f, const Vector& theta);

using CostSet = std::vector<QuadraticCost>;

double lipschitz_max(const CostSet& costs);

struct GlobalOptimum {
  Vector theta_star;
  double f_min = 0.0;
  double gradient_residual = 0.0;
};

/// Minimizer of sum_i f_i: theta* = -(sum H_i)^{-1} sum g_i.
GlobalOptimum global_optimum(const CostSet& costs);

}  // namespace dopt
