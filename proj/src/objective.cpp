#include "dopt/objective.hpp"

#include <algorithm>

#include "dopt/error.hpp"

namespace dopt {

QuadraticCost::QuadraticCost(Matrix h, Vector g, double c) : h_(std::move(h)), g_(std::move(g)), c_(c) {
  if (h_.rows() != h_.cols() || h_.rows() != g_.size() || g_.size() < 1) {
    throw Error(ErrorCode::kDimension, "cost: H must be q x q and g must have q entries");
  }
  if ((h_ - h_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, h_.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::kInput, "cost: H must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h_, Eigen::EigenvaluesOnly);
  convexity_ = es.eigenvalues().minCoeff();
  lipschitz_ = es.eigenvalues().maxCoeff();
  if (!(convexity_ > 0.0)) throw Error(ErrorCode::kInput, "cost: H must be positive definite (strongly convex)");
}

double QuadraticCost::value(const Vector& theta) const {
  if (theta.size() != dim()) throw Error(ErrorCode::kDimension, "cost: argument has wrong dimension");
  return 0.5 * theta.dot(h_ * theta) + g_.dot(theta) + c_;
}

Vector QuadraticCost::gradient(const Vector& theta) const {
  if (theta.size() != dim()) throw Error(ErrorCode::kDimension, "cost: argument has wrong dimension");
  return h_ * theta + g_;
}

ValueGradient evaluate_with_gradient(const QuadraticCost& f, const Vector& theta) {
  return {f.value(theta), f.gradient(theta)};
}

double lipschitz_max(const CostSet& costs) {
  if (costs.empty()) throw Error(ErrorCode::kInput, "lipschitz_max: empty cost set");
  double l = 0.0;
  for (const auto& f : costs) l = std::max(l, f.lipschitz_constant());
  return l;
}

GlobalOptimum global_optimum(const CostSet& costs) {
  if (costs.empty()) throw Error(ErrorCode::kInput, "global_optimum: empty cost set");
  const int q = costs.front().dim();
  Matrix h_sum = Matrix::Zero(q, q);
  Vector g_sum = Vector::Zero(q);
  for (const auto& f : costs) {
    if (f.dim() != q) throw Error(ErrorCode::kDimension, "global_optimum: costs disagree on dimension");
    h_sum += f.hessian();
    g_sum += f.linear();
  }
  GlobalOptimum out;
  out.theta_star = h_sum.llt().solve(-g_sum);
  Vector grad = Vector::Zero(q);
  for (const auto& f : costs) {
    out.f_min += f.value(out.theta_star);
    grad += f.gradient(out.theta_star);
  }
  out.gradient_residual = grad.norm();
  return out;
}

}  // namespace dopt
