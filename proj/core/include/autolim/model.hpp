#pragma once

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace autolim {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowVector = Eigen::RowVectorXd;

/// Two-state glycolysis model: lumped intermediate x and product y (ATP).
/// alpha is the number of y molecules invested, k the intermediate rate,
/// g and h the feedback strengths of y on PK and PFK, a the PFK cooperativity.
struct TwoStateParams {
  double alpha = 1.0;
  double k = 1.0;
  double g = 0.0;
  double h = 0.0;
  double a = 0.0;

  friend bool operator==(const TwoStateParams&, const TwoStateParams&) = default;
};

/// Chain of n intermediates sharing the rate K.
struct ChainParams {
  double alpha = 1.0;
  double K = 1.0;
  double g = 0.0;
  double h = 0.0;
  double a = 0.0;
  int n = 1;

  friend bool operator==(const ChainParams&, const ChainParams&) = default;
};

void validate(const TwoStateParams& p);
void validate(const ChainParams& p);

enum class RateShape { linear, saturating, power };

/// Scalar rate law from the fixed catalog: c*x, c*x/(1+x) or c*x^p.
class RateFunction {
 public:
  static RateFunction linear(double c);
  static RateFunction saturating(double c);
  static RateFunction power(double c, double p);

  double operator()(double x) const;
  double derivative(double x) const;

  RateShape shape() const { return shape_; }
  double coefficient() const { return c_; }
  double exponent() const { return p_; }

  friend bool operator==(const RateFunction&, const RateFunction&) = default;

 private:
  RateFunction(RateShape shape, double c, double p) : shape_(shape), c_(c), p_(p) {}

  RateShape shape_;
  double c_;
  double p_;
};

std::string to_string(RateShape shape);

/// Node i of a cyclic network: dx_i/dt = -f_i(x_i) + g_{i-1}(x_{i-1}).
struct CyclicNode {
  RateFunction f;
  RateFunction g;

  friend bool operator==(const CyclicNode&, const CyclicNode&) = default;
};

/// General cyclic feedback network
///
///   x1'      = -f_1(x_1) + u
///   x_i'     = -f_i(x_i) + g_{i-1}(x_{i-1}),       i = 2..n
///   y'       = -f_{n+1}(y) + g_n(x_n) - alpha*u - delta
///
/// The constructor checks that every f_i and g_i is increasing, that the
/// catalog derivatives agree with central differences at the equilibrium, and
/// that the supplied equilibrium (x_1*..x_n*, y*) zeroes the unperturbed field.
/// Equal slopes f_i'(x_i*) are not enforced here; analysis operations that
/// need them call require_equal_slopes().
class CyclicNetwork {
 public:
  CyclicNetwork(double alpha, std::vector<CyclicNode> nodes, RateFunction sink,
                Vector equilibrium);

  int n() const { return static_cast<int>(nodes_.size()); }
  double alpha() const { return alpha_; }
  const std::vector<CyclicNode>& nodes() const { return nodes_; }
  const RateFunction& sink() const { return sink_; }
  /// (x_1*, ..., x_n*, y*)
  const Vector& equilibrium() const { return equilibrium_; }

  /// Control value balancing the sink equation at the equilibrium.
  double u_star() const;
  /// f_{n+1}'(y*)
  double sink_slope() const;
  /// g_i'(x_i*), i = 1..n
  Vector output_slopes() const;
  /// f_i'(x_i*), i = 1..n
  Vector decay_slopes() const;

  bool equal_slopes() const;
  void require_equal_slopes() const;
  /// Common slope a = f_i'(x_i*). Requires equal slopes.
  double a() const;
  /// r = (prod_i g_i'(x_i*) / alpha)^(1/n)
  double r() const;

  friend bool operator==(const CyclicNetwork& lhs, const CyclicNetwork& rhs);

 private:
  double alpha_;
  std::vector<CyclicNode> nodes_;
  RateFunction sink_;
  Vector equilibrium_;
};

enum class Family { two_state, chain, cyclic };

std::string to_string(Family family);

class PathwayModel {
 public:
  using Params = std::variant<TwoStateParams, ChainParams, CyclicNetwork>;

  static PathwayModel two_state(const TwoStateParams& p);
  static PathwayModel chain(const ChainParams& p);
  static PathwayModel cyclic(CyclicNetwork network);

  Family family() const { return static_cast<Family>(params_.index()); }
  int state_dim() const;
  double alpha() const;
  const Params& params() const { return params_; }

  const TwoStateParams& two_state_params() const;
  const ChainParams& chain_params() const;
  const CyclicNetwork& cyclic_network() const;

  friend bool operator==(const PathwayModel&, const PathwayModel&) = default;

 private:
  explicit PathwayModel(Params params) : params_(std::move(params)) {}

  Params params_;
};

struct Equilibrium {
  Vector x_star;
  double y_star = 1.0;
  double u_star = 1.0;

  /// Full state (x*, y*).
  Vector state() const;
};

/// Time derivative of the state (x_1..x_m, y) under control u and disturbance
/// delta. Throws contract_violation on a dimension mismatch and domain on a
/// negative component.
Vector vector_field(const PathwayModel& model, const Eigen::Ref<const Vector>& state,
                    double u, double delta);

/// Allocation-free variant used by the integrator.
void vector_field(const PathwayModel& model, const Eigen::Ref<const Vector>& state,
                  double u, double delta, Eigen::Ref<Vector> out);

Equilibrium equilibrium(const PathwayModel& model);

/// Allosteric inhibition law 2/(1+y^(2h)).
double natural_control(const PathwayModel& model, double y);

struct StabilityMargin {
  double lower = 0.0;
  double value = 0.0;
  double upper = 0.0;
  bool stable = false;
};

/// 0 < h - a < (k + g(1+alpha))/alpha for the natural closed loop.
StabilityMargin two_state_stability_margin(const TwoStateParams& p);

/// Cyclic-form view of a two-state or chain model with g = 0. The cyclic
/// control is the PFK flux y^a * u, so both models share the same zero dynamics.
CyclicNetwork cyclic_view(const PathwayModel& model);

/// Two-state pathway with y-dependent consumption k_y*y + delta, written in
/// cyclic form: f_1 = k x, g_1 = (alpha+1) k x, sink = k_y y, x_1* = k_y/k, y* = 1.
CyclicNetwork linear_consumption_network(double alpha, double k, double k_y);

/// Name of state component i ("x1".."xm", "y").
std::string component_name(const PathwayModel& model, int index);

}  // namespace autolim
