#include "autolim/model.hpp"

#include <cmath>
#include <sstream>

#include "autolim/error.hpp"
#include "autolim/tolerances.hpp"

namespace autolim {
namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require_positive(double v, const char* name) {
  require(std::isfinite(v) && v > 0.0, ErrorKind::invalid_parameter,
          std::string(name) + " must be a positive finite number, got " + fmt_double(v));
}

void require_nonnegative(double v, const char* name) {
  require(std::isfinite(v) && v >= 0.0, ErrorKind::invalid_parameter,
          std::string(name) + " must be a nonnegative finite number, got " + fmt_double(v));
}

// Sampled forward differences on [0, span]; catches non-increasing laws.
void require_increasing(const RateFunction& fn, double span, const std::string& label) {
  constexpr int samples = 64;
  for (int j = 0; j <= samples; ++j) {
    const double x = span * j / samples;
    const double step = 1e-6 * std::max(1.0, x);
    const double diff = fn(x + step) - fn(x);
    require(diff > 0.0, ErrorKind::invalid_model,
            label + " is not increasing near x = " + fmt_double(x));
  }
}

void require_derivative_consistent(const RateFunction& fn, double x, const std::string& label) {
  const double h = tol::derivative_fd_step;
  const double fd = x >= h ? (fn(x + h) - fn(x - h)) / (2.0 * h) : (fn(x + h) - fn(x)) / h;
  const double exact = fn.derivative(x);
  require(std::isfinite(exact), ErrorKind::invalid_model,
          label + " has a non-finite derivative at x = " + fmt_double(x));
  require(std::abs(fd - exact) <= tol::derivative_fd_relative * (std::abs(exact) + 1e-6),
          ErrorKind::invalid_model,
          label + " derivative " + fmt_double(exact) + " disagrees with finite difference " +
              fmt_double(fd));
}

std::string node_label(const char* which, int i) {
  return std::string(which) + "_" + std::to_string(i + 1);
}

double hill(double y, double exponent) { return std::pow(y, exponent); }

void check_state(const PathwayModel& model, const Eigen::Ref<const Vector>& state) {
  if (state.size() != model.state_dim()) {
    fail(ErrorKind::contract_violation,
         "state has dimension " + std::to_string(state.size()) + ", model expects " +
             std::to_string(model.state_dim()));
  }
  for (Eigen::Index i = 0; i < state.size(); ++i) {
    if (!(state[i] >= 0.0)) {
      fail(ErrorKind::domain, "state component " + component_name(model, static_cast<int>(i)) +
                                  " is negative (" + fmt_double(state[i]) + ")");
    }
  }
}

}  // namespace

void validate(const TwoStateParams& p) {
  require_positive(p.alpha, "alpha");
  require_positive(p.k, "k");
  require_nonnegative(p.g, "g");
  require_nonnegative(p.h, "h");
  require_nonnegative(p.a, "a");
}

void validate(const ChainParams& p) {
  require_positive(p.alpha, "alpha");
  require_positive(p.K, "K");
  require_nonnegative(p.g, "g");
  require_nonnegative(p.h, "h");
  require_nonnegative(p.a, "a");
  require(p.n >= 1, ErrorKind::invalid_parameter,
          "n must be at least 1, got " + std::to_string(p.n));
}

// --- RateFunction -----------------------------------------------------------

RateFunction RateFunction::linear(double c) {
  require(std::isfinite(c), ErrorKind::invalid_parameter, "rate coefficient must be finite");
  return {RateShape::linear, c, 1.0};
}

RateFunction RateFunction::saturating(double c) {
  require(std::isfinite(c), ErrorKind::invalid_parameter, "rate coefficient must be finite");
  return {RateShape::saturating, c, 1.0};
}

RateFunction RateFunction::power(double c, double p) {
  require(std::isfinite(c), ErrorKind::invalid_parameter, "rate coefficient must be finite");
  require(std::isfinite(p) && p >= 0.0, ErrorKind::invalid_parameter,
          "power exponent must be finite and nonnegative, got " + fmt_double(p));
  return {RateShape::power, c, p};
}

double RateFunction::operator()(double x) const {
  switch (shape_) {
    case RateShape::linear: return c_ * x;
    case RateShape::saturating: return c_ * x / (1.0 + x);
    case RateShape::power: return c_ * std::pow(x, p_);
  }
  return 0.0;
}

double RateFunction::derivative(double x) const {
  switch (shape_) {
    case RateShape::linear: return c_;
    case RateShape::saturating: return c_ / ((1.0 + x) * (1.0 + x));
    case RateShape::power:
      if (p_ == 0.0) return 0.0;
      return c_ * p_ * std::pow(x, p_ - 1.0);
  }
  return 0.0;
}

std::string to_string(RateShape shape) {
  switch (shape) {
    case RateShape::linear: return "linear";
    case RateShape::saturating: return "saturating";
    case RateShape::power: return "power";
  }
  return "unknown";
}

// --- CyclicNetwork ----------------------------------------------------------

CyclicNetwork::CyclicNetwork(double alpha, std::vector<CyclicNode> nodes, RateFunction sink,
                             Vector equilibrium)
    : alpha_(alpha), nodes_(std::move(nodes)), sink_(sink), equilibrium_(std::move(equilibrium)) {
  require_positive(alpha_, "alpha");
  require(!nodes_.empty(), ErrorKind::invalid_parameter, "cyclic network needs at least one node");
  require(equilibrium_.size() == n() + 1, ErrorKind::invalid_parameter,
          "equilibrium must have n+1 = " + std::to_string(n() + 1) + " entries, got " +
              std::to_string(equilibrium_.size()));
  for (Eigen::Index i = 0; i < equilibrium_.size(); ++i) {
    require(std::isfinite(equilibrium_[i]) && equilibrium_[i] >= 0.0,
            ErrorKind::invalid_parameter, "equilibrium entries must be nonnegative and finite");
  }

  const double span = 4.0 * std::max(1.0, equilibrium_.maxCoeff());
  for (int i = 0; i < n(); ++i) {
    require_increasing(nodes_[i].f, span, node_label("f", i));
    require_increasing(nodes_[i].g, span, node_label("g", i));
    require_derivative_consistent(nodes_[i].f, equilibrium_[i], node_label("f", i));
    require_derivative_consistent(nodes_[i].g, equilibrium_[i], node_label("g", i));
  }
  require_derivative_consistent(sink_, equilibrium_[n()], "sink");

  // Residual of the unperturbed field at the supplied equilibrium.
  const double u = u_star();
  double residual = std::abs(-nodes_[0].f(equilibrium_[0]) + u);
  for (int i = 1; i < n(); ++i) {
    residual = std::max(residual, std::abs(-nodes_[i].f(equilibrium_[i]) +
                                           nodes_[i - 1].g(equilibrium_[i - 1])));
  }
  if (residual > tol::cyclic_equilibrium_residual) {
    fail(ErrorKind::invalid_model,
         "supplied equilibrium does not zero the vector field (residual " + fmt_double(residual) +
             ")");
  }
}

double CyclicNetwork::u_star() const {
  return (nodes_.back().g(equilibrium_[n() - 1]) - sink_(equilibrium_[n()])) / alpha_;
}

double CyclicNetwork::sink_slope() const { return sink_.derivative(equilibrium_[n()]); }

Vector CyclicNetwork::output_slopes() const {
  Vector s(n());
  for (int i = 0; i < n(); ++i) s[i] = nodes_[i].g.derivative(equilibrium_[i]);
  return s;
}

Vector CyclicNetwork::decay_slopes() const {
  Vector s(n());
  for (int i = 0; i < n(); ++i) s[i] = nodes_[i].f.derivative(equilibrium_[i]);
  return s;
}

bool CyclicNetwork::equal_slopes() const {
  const Vector s = decay_slopes();
  const double ref = s[0];
  for (int i = 1; i < n(); ++i) {
    const double scale = std::max(std::abs(ref), std::abs(s[i]));
    if (std::abs(s[i] - ref) > tol::assumption_relative * scale) return false;
  }
  return true;
}

void CyclicNetwork::require_equal_slopes() const {
  if (!equal_slopes()) {
    const Vector s = decay_slopes();
    std::ostringstream os;
    os.precision(17);
    os << "decay slopes f_i'(x_i*) differ:";
    for (Eigen::Index i = 0; i < s.size(); ++i) os << ' ' << s[i];
    fail(ErrorKind::assumption_violation, os.str());
  }
}

double CyclicNetwork::a() const {
  require_equal_slopes();
  return decay_slopes().mean();
}

double CyclicNetwork::r() const {
  // Geometric mean in log space keeps large n from overflowing.
  const Vector s = output_slopes();
  double log_sum = -std::log(alpha_);
  for (Eigen::Index i = 0; i < s.size(); ++i) log_sum += std::log(s[i]);
  return std::exp(log_sum / n());
}

bool operator==(const CyclicNetwork& lhs, const CyclicNetwork& rhs) {
  return lhs.alpha_ == rhs.alpha_ && lhs.nodes_ == rhs.nodes_ && lhs.sink_ == rhs.sink_ &&
         lhs.equilibrium_.size() == rhs.equilibrium_.size() &&
         lhs.equilibrium_ == rhs.equilibrium_;
}

// --- PathwayModel -----------------------------------------------------------

std::string to_string(Family family) {
  switch (family) {
    case Family::two_state: return "two_state";
    case Family::chain: return "chain";
    case Family::cyclic: return "cyclic";
  }
  return "unknown";
}

PathwayModel PathwayModel::two_state(const TwoStateParams& p) {
  validate(p);
  return PathwayModel(Params{p});
}

PathwayModel PathwayModel::chain(const ChainParams& p) {
  validate(p);
  return PathwayModel(Params{p});
}

PathwayModel PathwayModel::cyclic(CyclicNetwork network) {
  return PathwayModel(Params{std::move(network)});
}

int PathwayModel::state_dim() const {
  switch (family()) {
    case Family::two_state: return 2;
    case Family::chain: return chain_params().n + 1;
    case Family::cyclic: return cyclic_network().n() + 1;
  }
  return 0;
}

double PathwayModel::alpha() const {
  return std::visit([](const auto& p) -> double {
    if constexpr (std::is_same_v<std::decay_t<decltype(p)>, CyclicNetwork>) {
      return p.alpha();
    } else {
      return p.alpha;
    }
  }, params_);
}

const TwoStateParams& PathwayModel::two_state_params() const {
  require(family() == Family::two_state, ErrorKind::contract_violation, "model is not two-state");
  return std::get<TwoStateParams>(params_);
}

const ChainParams& PathwayModel::chain_params() const {
  require(family() == Family::chain, ErrorKind::contract_violation, "model is not a chain");
  return std::get<ChainParams>(params_);
}

const CyclicNetwork& PathwayModel::cyclic_network() const {
  require(family() == Family::cyclic, ErrorKind::contract_violation, "model is not cyclic");
  return std::get<CyclicNetwork>(params_);
}

Vector Equilibrium::state() const {
  Vector s(x_star.size() + 1);
  s.head(x_star.size()) = x_star;
  s[x_star.size()] = y_star;
  return s;
}

std::string component_name(const PathwayModel& model, int index) {
  if (index == model.state_dim() - 1) return "y";
  return "x" + std::to_string(index + 1);
}

// --- Operations -------------------------------------------------------------

void vector_field(const PathwayModel& model, const Eigen::Ref<const Vector>& state, double u,
                  double delta, Eigen::Ref<Vector> out) {
  check_state(model, state);
  if (out.size() != state.size()) {
    fail(ErrorKind::contract_violation, "output buffer has the wrong dimension");
  }
  const Eigen::Index m = state.size() - 1;
  const double y = state[m];

  switch (model.family()) {
    case Family::two_state: {
      const auto& p = model.two_state_params();
      const double pfk = hill(y, p.a) * u;
      const double pk = 2.0 * p.k * state[0] / (1.0 + hill(y, 2.0 * p.g));
      out[0] = pfk - pk;
      out[1] = -p.alpha * pfk + (p.alpha + 1.0) * pk - (1.0 + delta);
      break;
    }
    case Family::chain: {
      const auto& p = model.chain_params();
      const double pfk = hill(y, p.a) * u;
      const double pk = 2.0 * p.K * state[m - 1] / (1.0 + hill(y, 2.0 * p.g));
      for (Eigen::Index i = 0; i < m; ++i) {
        const double inflow = i == 0 ? pfk : p.K * state[i - 1];
        const double outflow = i == m - 1 ? pk : p.K * state[i];
        out[i] = inflow - outflow;
      }
      out[m] = (p.alpha + 1.0) * pk - p.alpha * pfk - (1.0 + delta);
      break;
    }
    case Family::cyclic: {
      const auto& net = model.cyclic_network();
      const auto& nodes = net.nodes();
      out[0] = -nodes[0].f(state[0]) + u;
      for (Eigen::Index i = 1; i < m; ++i) {
        out[i] = -nodes[i].f(state[i]) + nodes[i - 1].g(state[i - 1]);
      }
      out[m] = -net.sink()(y) + nodes[m - 1].g(state[m - 1]) - net.alpha() * u - delta;
      break;
    }
  }
}

Vector vector_field(const PathwayModel& model, const Eigen::Ref<const Vector>& state, double u,
                    double delta) {
  Vector out(state.size());
  vector_field(model, state, u, delta, out);
  return out;
}

Equilibrium equilibrium(const PathwayModel& model) {
  Equilibrium eq;
  switch (model.family()) {
    case Family::two_state:
      eq.x_star = Vector::Constant(1, 1.0 / model.two_state_params().k);
      eq.y_star = 1.0;
      eq.u_star = 1.0;
      break;
    case Family::chain: {
      const auto& p = model.chain_params();
      eq.x_star = Vector::Constant(p.n, 1.0 / p.K);
      eq.y_star = 1.0;
      eq.u_star = 1.0;
      break;
    }
    case Family::cyclic: {
      const auto& net = model.cyclic_network();
      eq.x_star = net.equilibrium().head(net.n());
      eq.y_star = net.equilibrium()[net.n()];
      eq.u_star = net.u_star();
      const double residual =
          vector_field(model, eq.state(), eq.u_star, 0.0).cwiseAbs().maxCoeff();
      if (residual > tol::cyclic_equilibrium_residual) {
        fail(ErrorKind::invalid_model,
             "cyclic equilibrium residual " + fmt_double(residual) + " exceeds tolerance");
      }
      break;
    }
  }
  return eq;
}

double natural_control(const PathwayModel& model, double y) {
  if (!(y >= 0.0)) fail(ErrorKind::domain, "natural control needs y >= 0, got " + fmt_double(y));
  double h = 0.0;
  switch (model.family()) {
    case Family::two_state: h = model.two_state_params().h; break;
    case Family::chain: h = model.chain_params().h; break;
    case Family::cyclic:
      fail(ErrorKind::unsupported, "cyclic networks have no PFK feedback exponent h");
  }
  return 2.0 / (1.0 + std::pow(y, 2.0 * h));
}

StabilityMargin two_state_stability_margin(const TwoStateParams& p) {
  validate(p);
  StabilityMargin m;
  m.lower = 0.0;
  m.value = p.h - p.a;
  m.upper = (p.k + p.g * (1.0 + p.alpha)) / p.alpha;
  m.stable = m.lower < m.value && m.value < m.upper;
  return m;
}

CyclicNetwork cyclic_view(const PathwayModel& model) {
  switch (model.family()) {
    case Family::cyclic: return model.cyclic_network();
    case Family::two_state: {
      const auto& p = model.two_state_params();
      require(p.g == 0.0, ErrorKind::unsupported,
              "cyclic view needs g = 0 (PK rate must not depend on y)");
      Vector eq(2);
      eq << 1.0 / p.k, 1.0;
      return CyclicNetwork(p.alpha,
                           {CyclicNode{RateFunction::linear(p.k),
                                       RateFunction::linear((p.alpha + 1.0) * p.k)}},
                           RateFunction::power(1.0, 0.0), eq);
    }
    case Family::chain: {
      const auto& p = model.chain_params();
      require(p.g == 0.0, ErrorKind::unsupported,
              "cyclic view needs g = 0 (PK rate must not depend on y)");
      std::vector<CyclicNode> nodes;
      nodes.reserve(p.n);
      for (int i = 0; i < p.n; ++i) {
        const double out_gain = i == p.n - 1 ? (p.alpha + 1.0) * p.K : p.K;
        nodes.push_back({RateFunction::linear(p.K), RateFunction::linear(out_gain)});
      }
      Vector eq = Vector::Constant(p.n + 1, 1.0 / p.K);
      eq[p.n] = 1.0;
      return CyclicNetwork(p.alpha, std::move(nodes), RateFunction::power(1.0, 0.0), eq);
    }
  }
  fail(ErrorKind::unsupported, "unknown model family");
}

CyclicNetwork linear_consumption_network(double alpha, double k, double k_y) {
  require_positive(alpha, "alpha");
  require_positive(k, "k");
  require_positive(k_y, "k_y");
  Vector eq(2);
  eq << k_y / k, 1.0;
  return CyclicNetwork(alpha,
                       {CyclicNode{RateFunction::linear(k),
                                   RateFunction::linear((alpha + 1.0) * k)}},
                       RateFunction::linear(k_y), eq);
}

}  // namespace autolim
