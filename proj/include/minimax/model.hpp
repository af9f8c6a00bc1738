#pragma once

#include <Eigen/Core>

#include <string>
#include <string_view>

namespace minimax {

/// Flat parameter vector u. Packing is (w_1, ..., w_d, b): bias last.
using ParameterVector = Eigen::VectorXd;

/// Differentiable prediction model with d inputs and d + 1 parameters.
class Model {
 public:
  enum class Kind { Linear, SigmoidUnit };

  static Model linear(int input_dim) { return Model(Kind::Linear, input_dim); }
  static Model sigmoid_unit(int input_dim) { return Model(Kind::SigmoidUnit, input_dim); }

  Model(Kind kind, int input_dim);

  Kind kind() const noexcept { return kind_; }
  int input_dim() const noexcept { return input_dim_; }
  int param_count() const noexcept { return input_dim_ + 1; }

  /// Linear: w.x + b. SigmoidUnit: sigma(w.x + b), in (0, 1).
  double predict(const ParameterVector& params, Eigen::Ref<const Eigen::VectorXd> x) const;

  /// d predict / d params, laid out like the parameter vector.
  Eigen::VectorXd param_gradient(const ParameterVector& params,
                                 Eigen::Ref<const Eigen::VectorXd> x) const;

  /// Prediction and gradient in one pass (the loss loops use this).
  double predict_with_gradient(const ParameterVector& params, Eigen::Ref<const Eigen::VectorXd> x,
                               Eigen::Ref<Eigen::VectorXd> grad) const;

  std::string name() const;
  static Model from_name(std::string_view name, int input_dim);

 private:
  void check_dims(const ParameterVector& params, Eigen::Index x_size) const;

  Kind kind_;
  int input_dim_;
};

/// 1 / (1 + exp(-z)) without overflow for large |z|.
double sigmoid(double z) noexcept;

}  // namespace minimax
