#include "minimax/model.hpp"

#include <cmath>

#include "minimax/errors.hpp"

namespace minimax {

double sigmoid(double z) noexcept {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Model::Model(Kind kind, int input_dim) : kind_(kind), input_dim_(input_dim) {
  if (input_dim < 1) {
    throw DimensionError("model input dimension must be >= 1, got " + std::to_string(input_dim));
  }
}

void Model::check_dims(const ParameterVector& params, Eigen::Index x_size) const {
  if (params.size() != param_count()) {
    throw DimensionError("expected " + std::to_string(param_count()) + " parameters, got " +
                         std::to_string(params.size()));
  }
  if (x_size != input_dim_) {
    throw DimensionError("expected input of dimension " + std::to_string(input_dim_) + ", got " +
                         std::to_string(x_size));
  }
}

double Model::predict(const ParameterVector& params, Eigen::Ref<const Eigen::VectorXd> x) const {
  check_dims(params, x.size());
  const double z = params.head(input_dim_).dot(x) + params(input_dim_);
  return kind_ == Kind::Linear ? z : sigmoid(z);
}

Eigen::VectorXd Model::param_gradient(const ParameterVector& params,
                                      Eigen::Ref<const Eigen::VectorXd> x) const {
  Eigen::VectorXd grad(param_count());
  predict_with_gradient(params, x, grad);
  return grad;
}

double Model::predict_with_gradient(const ParameterVector& params,
                                    Eigen::Ref<const Eigen::VectorXd> x,
                                    Eigen::Ref<Eigen::VectorXd> grad) const {
  check_dims(params, x.size());
  if (grad.size() != param_count()) {
    throw DimensionError("gradient buffer has wrong size");
  }
  const double z = params.head(input_dim_).dot(x) + params(input_dim_);
  if (kind_ == Kind::Linear) {
    grad.head(input_dim_) = x;
    grad(input_dim_) = 1.0;
    return z;
  }
  const double s = sigmoid(z);
  const double slope = s * (1.0 - s);
  grad.head(input_dim_) = slope * x;
  grad(input_dim_) = slope;
  return s;
}

std::string Model::name() const { return kind_ == Kind::Linear ? "linear" : "sigmoid"; }

Model Model::from_name(std::string_view name, int input_dim) {
  if (name == "linear") return linear(input_dim);
  if (name == "sigmoid") return sigmoid_unit(input_dim);
  throw ConfigError("unknown model kind '" + std::string(name) + "' (expected linear|sigmoid)");
}

}  // namespace minimax
