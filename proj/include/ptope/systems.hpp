#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "ptope/dual.hpp"
#include "ptope/errors.hpp"
#include "ptope/interval.hpp"
#include "ptope/matrix.hpp"

namespace ptope {

// x1' = x2, x2' = -x1 + mu (1 - x1^2) x2
struct VanDerPol {
  double mu = 0.25;

  static constexpr std::size_t dim() { return 2; }

  template <class S>
  std::vector<S> drift(const std::vector<S>& x) const {
    return {x[1], -x[0] + mu * (1.0 - sqr(x[0])) * x[1]};
  }
};

// Four-state two-link arm under PD control. State order is (q1, q2, z1, z2).
struct RobotArm {
  double u1 = 2.0;
  double u2 = 1.0;
  double m = 1.0;
  double M = 1.0;
  double length_sq = 3.0;  // L = sqrt(3); kept squared so the constant is exact
  double kp1 = 2.0;
  double kp2 = 1.0;
  double kd1 = 2.0;
  double kd2 = 1.0;

  static constexpr std::size_t dim() { return 4; }

  template <class S>
  std::vector<S> drift(const std::vector<S>& x) const {
    const S& q1 = x[0];
    const S& q2 = x[1];
    const S& z1 = x[2];
    const S& z2 = x[3];
    const S inertia = m * sqr(q2) + M * length_sq / 3.0;
    const S z1_dot = (-2.0 * m * q2 * z1 * z2 - kd1 * z1 + kp1 * (u1 - q1)) / inertia;
    const S z2_dot = q2 * sqr(z1) + (1.0 / m) * (-kd2 * z2 + kp2 * (u2 - q2));
    return {z1, z2, z1_dot, z2_dot};
  }
};

// x' = A x
struct LinearDynamics {
  DenseMatrix A;

  std::size_t dim() const { return A.rows(); }

  template <class S>
  std::vector<S> drift(const std::vector<S>& x) const {
    std::vector<S> out;
    out.reserve(A.rows());
    for (std::size_t i = 0; i < A.rows(); ++i) {
      S acc(0.0);
      for (std::size_t j = 0; j < A.cols(); ++j) acc = acc + A(i, j) * x[j];
      out.push_back(acc);
    }
    return out;
  }
};

// x' = f(x) + C w with w in the box W. Evaluable over double, Interval and
// their dual numbers.
class DynamicalSystem {
 public:
  using Model = std::variant<VanDerPol, RobotArm, LinearDynamics>;

  DynamicalSystem(Model model, DenseMatrix input, IntervalVector disturbance)
      : model_(std::move(model)), input_(std::move(input)), disturbance_(std::move(disturbance)) {
    const std::size_t n = dim();
    if (input_.rows() != n) throw DimensionError("disturbance matrix must have one row per state");
    if (input_.cols() != disturbance_.size()) throw DimensionError("disturbance matrix and box disagree");
  }
  explicit DynamicalSystem(Model model) : model_(std::move(model)) {
    input_ = DenseMatrix(dim(), 0);
  }

  std::size_t dim() const {
    return std::visit([](const auto& m) { return m.dim(); }, model_);
  }
  std::size_t disturbance_dim() const { return disturbance_.size(); }

  const Model& model() const noexcept { return model_; }
  const DenseMatrix& input_matrix() const noexcept { return input_; }
  const IntervalVector& disturbance_box() const noexcept { return disturbance_; }
  std::vector<double> nominal_disturbance() const { return midpoints(disturbance_); }

  bool is_linear() const noexcept { return std::holds_alternative<LinearDynamics>(model_); }
  // Only meaningful when is_linear().
  const DenseMatrix& linear_part() const { return std::get<LinearDynamics>(model_).A; }

  std::string name() const {
    struct Namer {
      std::string operator()(const VanDerPol&) const { return "vanderpol"; }
      std::string operator()(const RobotArm&) const { return "robot_arm"; }
      std::string operator()(const LinearDynamics&) const { return "linear"; }
    };
    return std::visit(Namer{}, model_);
  }

  template <class S>
  std::vector<S> drift(const std::vector<S>& x) const {
    if (x.size() != dim()) throw DimensionError("state dimension mismatch");
    return std::visit([&](const auto& m) { return m.template drift<S>(x); }, model_);
  }

  std::vector<double> field(const std::vector<double>& x, const std::vector<double>& w) const {
    auto dx = drift(x);
    if (input_.cols() == 0) return dx;
    const auto cw = input_ * w;
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += cw[i];
    return dx;
  }

  IntervalVector field(const IntervalVector& x, const IntervalVector& w) const {
    auto dx = drift(x);
    if (input_.cols() == 0) return dx;
    return dx + to_intervals(input_) * w;
  }

 private:
  Model model_;
  DenseMatrix input_;
  IntervalVector disturbance_;
};

inline DynamicalSystem vanderpol(double mu = 0.25) {
  if (!std::isfinite(mu)) throw Error("vanderpol: mu must be finite");
  return DynamicalSystem(VanDerPol{mu});
}

inline DynamicalSystem robot_arm() { return DynamicalSystem(RobotArm{}); }

inline DynamicalSystem linear_system(DenseMatrix a, DenseMatrix c, IntervalVector w) {
  if (!a.is_square()) throw DimensionError("linear_system: A must be square");
  if (c.rows() == 0 && c.cols() == 0) c = DenseMatrix(a.rows(), 0);
  return DynamicalSystem(LinearDynamics{std::move(a)}, std::move(c), std::move(w));
}

inline DynamicalSystem linear_system(DenseMatrix a) {
  const std::size_t n = a.rows();
  return linear_system(std::move(a), DenseMatrix(n, 0), {});
}

}  // namespace ptope
