#include "minimax/group_loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "minimax/errors.hpp"

namespace minimax {

double active_tolerance(double phi) noexcept { return 1e-10 * std::max(1.0, std::abs(phi)); }

namespace {

void check_group(const Group& group) {
  if (group.size() == 0) {
    throw EmptyGroupError("group '" + group.id + "' has no samples");
  }
}

}  // namespace

LossValue group_loss(const Model& model, const ParameterVector& params, const Group& group) {
  check_group(group);
  LossValue out;
  out.grad = Eigen::VectorXd::Zero(model.param_count());
  Eigen::VectorXd sample_grad(model.param_count());
  double sum = 0.0;
  for (Eigen::Index l = 0; l < group.size(); ++l) {
    const double residual =
        model.predict_with_gradient(params, group.x.row(l).transpose(), sample_grad) - group.y(l);
    sum += residual * residual;
    out.grad += residual * sample_grad;
  }
  const double n = static_cast<double>(group.size());
  out.value = sum / n;
  out.grad *= 2.0 / n;
  return out;
}

double group_loss_value(const Model& model, const ParameterVector& params, const Group& group) {
  check_group(group);
  double sum = 0.0;
  for (Eigen::Index l = 0; l < group.size(); ++l) {
    const double residual = model.predict(params, group.x.row(l).transpose()) - group.y(l);
    sum += residual * residual;
  }
  return sum / static_cast<double>(group.size());
}

PhiValue phi(const Model& model, const ParameterVector& params, const GroupedDataset& data) {
  PhiValue out;
  out.per_group.resize(static_cast<Eigen::Index>(data.group_count()));
  for (std::size_t j = 0; j < data.group_count(); ++j) {
    out.per_group(static_cast<Eigen::Index>(j)) = group_loss_value(model, params, data.group(j));
  }
  out.value = out.per_group.maxCoeff();
  const double cutoff = out.value - active_tolerance(out.value);
  for (Eigen::Index j = 0; j < out.per_group.size(); ++j) {
    if (out.per_group(j) >= cutoff) out.active_set.push_back(static_cast<int>(j));
  }
  return out;
}

double phi_value(const Model& model, const ParameterVector& params, const GroupedDataset& data) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Group& g : data.groups()) {
    const double f = group_loss_value(model, params, g);
    // NaN must propagate so callers can reject the point.
    if (std::isnan(f)) return f;
    best = std::max(best, f);
  }
  return best;
}

GroupJacobian jacobian(const Model& model, const ParameterVector& params,
                       const GroupedDataset& data) {
  const auto groups = static_cast<Eigen::Index>(data.group_count());
  GroupJacobian out;
  out.g.resize(groups, model.param_count());
  out.f.resize(groups);
  for (Eigen::Index j = 0; j < groups; ++j) {
    LossValue loss = group_loss(model, params, data.group(static_cast<std::size_t>(j)));
    out.f(j) = loss.value;
    out.g.row(j) = loss.grad.transpose();
  }
  return out;
}

LossValue average_loss(const Model& model, const ParameterVector& params,
                       const GroupedDataset& data) {
  if (data.sample_count() == 0) {
    throw EmptyDataError("average loss of an empty dataset");
  }
  LossValue out;
  out.grad = Eigen::VectorXd::Zero(model.param_count());
  Eigen::VectorXd sample_grad(model.param_count());
  double sum = 0.0;
  for (const Group& g : data.groups()) {
    for (Eigen::Index l = 0; l < g.size(); ++l) {
      const double residual =
          model.predict_with_gradient(params, g.x.row(l).transpose(), sample_grad) - g.y(l);
      sum += residual * residual;
      out.grad += residual * sample_grad;
    }
  }
  const double m = static_cast<double>(data.sample_count());
  out.value = sum / m;
  out.grad *= 2.0 / m;
  return out;
}

Eigen::VectorXd finite_difference_gradient(const ScalarFunction& fn, const Eigen::VectorXd& at,
                                           double h) {
  if (!(h > 0.0)) {
    throw ConfigError("finite-difference step must be positive");
  }
  Eigen::VectorXd grad(at.size());
  Eigen::VectorXd probe = at;
  for (Eigen::Index i = 0; i < at.size(); ++i) {
    const double step = h * std::max(1.0, std::abs(at(i)));
    probe(i) = at(i) + step;
    const double up = fn(probe);
    probe(i) = at(i) - step;
    const double down = fn(probe);
    probe(i) = at(i);
    grad(i) = (up - down) / (2.0 * step);
  }
  return grad;
}

}  // namespace minimax
