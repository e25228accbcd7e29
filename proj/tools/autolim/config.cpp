#include "config.hpp"

#include <cmath>
#include <set>

#include "autolim/error.hpp"

namespace autolim::cli {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Reads an object and rejects any key that was never asked for.
class Reader {
 public:
  Reader(const Json& doc, std::string where) : doc_(doc), where_(std::move(where)) {
    if (!doc_.is_object()) throw ConfigError(where_ + " must be a JSON object");
  }

  ~Reader() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& item : doc_.items()) {
      if (!seen_.count(item.key())) {
        throw ConfigError("unknown key '" + item.key() + "' in " + where_);
      }
    }
  }

  bool has(const std::string& key) const { return doc_.contains(key); }

  const Json& raw(const std::string& key) {
    seen_.insert(key);
    if (!doc_.contains(key)) throw ConfigError(where_ + " is missing '" + key + "'");
    return doc_.at(key);
  }

  double number(const std::string& key) {
    const Json& v = raw(key);
    if (!v.is_number()) throw ConfigError(path(key) + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(path(key) + " must be finite");
    return d;
  }

  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : (seen_.insert(key), fallback);
  }

  long long integer(const std::string& key) {
    const Json& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError(path(key) + " must be an integer");
    return v.get<long long>();
  }

  std::string string(const std::string& key) {
    const Json& v = raw(key);
    if (!v.is_string()) throw ConfigError(path(key) + " must be a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) {
    const Json& v = raw(key);
    if (!v.is_array()) throw ConfigError(path(key) + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number() || !std::isfinite(e.get<double>())) {
        throw ConfigError(path(key) + " must contain finite numbers only");
      }
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::string path(const std::string& key) const { return where_ + "." + key; }

 private:
  const Json& doc_;
  std::string where_;
  std::set<std::string> seen_;
};

Vector to_vector(const std::vector<double>& values) {
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Json vector_json(const Eigen::Ref<const Vector>& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

RateFunction rate_from_json(const Json& doc, const std::string& where) {
  Reader r(doc, where);
  const std::string shape = r.string("shape");
  const double c = r.number("c");
  if (shape == "linear") return RateFunction::linear(c);
  if (shape == "saturating") return RateFunction::saturating(c);
  if (shape == "power") return RateFunction::power(c, r.number("p"));
  throw ConfigError(where + ".shape must be linear, saturating or power, got '" + shape + "'");
}

Json rate_to_json(const RateFunction& fn) {
  Json out{{"shape", to_string(fn.shape())}, {"c", fn.coefficient()}};
  if (fn.shape() == RateShape::power) out["p"] = fn.exponent();
  return out;
}

ControllerSpec controller_from_json(const Json& doc) {
  Reader r(doc, "simulate.controller");
  const std::string type = r.string("type");
  if (type == "natural") return NaturalController{};
  if (type == "constant") return ConstantController{r.number("value")};
  if (type == "linear_state_feedback") {
    const std::vector<double> gain = r.numbers("gain");
    return LinearStateFeedback{to_vector(gain).transpose(), r.number("offset", 0.0)};
  }
  throw ConfigError("simulate.controller.type must be natural, constant or linear_state_feedback");
}

Json controller_to_json(const ControllerSpec& controller) {
  return std::visit(overloaded{
                        [](const NaturalController&) { return Json{{"type", "natural"}}; },
                        [](const ConstantController& c) {
                          return Json{{"type", "constant"}, {"value", c.value}};
                        },
                        [](const LinearStateFeedback& c) {
                          return Json{{"type", "linear_state_feedback"},
                                      {"gain", vector_json(c.gain.transpose())},
                                      {"offset", c.offset}};
                        },
                    },
                    controller);
}

DisturbanceSpec disturbance_from_json(const Json& doc) {
  Reader r(doc, "simulate.disturbance");
  const std::string type = r.string("type");
  if (type == "zero") return ZeroDisturbance{};
  if (type == "step") return StepDisturbance{r.number("magnitude"), r.number("onset", 0.0)};
  if (type == "sine") {
    SineDisturbance d;
    d.amplitude = r.number("amplitude");
    d.omega = r.number("omega");
    d.start = r.number("start", 0.0);
    d.stop = r.number("stop");
    return d;
  }
  if (type == "pulse") {
    PulseDisturbance d;
    d.magnitude = r.number("magnitude");
    d.start = r.number("start", 0.0);
    d.stop = r.number("stop");
    return d;
  }
  throw ConfigError("simulate.disturbance.type must be zero, step, sine or pulse");
}

Json disturbance_to_json(const DisturbanceSpec& dist) {
  return std::visit(
      overloaded{
          [](const ZeroDisturbance&) { return Json{{"type", "zero"}}; },
          [](const StepDisturbance& d) {
            return Json{{"type", "step"}, {"magnitude", d.magnitude}, {"onset", d.onset}};
          },
          [](const SineDisturbance& d) {
            return Json{{"type", "sine"},   {"amplitude", d.amplitude}, {"omega", d.omega},
                        {"start", d.start}, {"stop", d.stop}};
          },
          [](const PulseDisturbance& d) {
            return Json{
                {"type", "pulse"}, {"magnitude", d.magnitude}, {"start", d.start}, {"stop", d.stop}};
          },
      },
      dist);
}

SweepAxis axis_from_json(const Json& doc, std::size_t index) {
  Reader r(doc, "sweep.axes[" + std::to_string(index) + "]");
  SweepAxis axis;
  axis.name = r.string("name");
  if (r.has("values")) {
    if (r.has("from") || r.has("to") || r.has("step")) {
      throw ConfigError(r.path("values") + " cannot be combined with from/to/step");
    }
    axis.values = r.numbers("values");
  } else {
    const double from = r.number("from");
    const double to = r.number("to");
    const double step = r.number("step", 1.0);
    if (!(step > 0.0) || to < from) {
      throw ConfigError(r.path("step") + " must be positive with to >= from");
    }
    const double count = std::floor((to - from) / step + 1e-9) + 1.0;
    if (count > 1e6) throw ConfigError(r.path("step") + " gives more than 10^6 values");
    for (long i = 0; i < static_cast<long>(count); ++i) axis.values.push_back(from + i * step);
  }
  if (axis.values.empty()) throw ConfigError("sweep axis '" + axis.name + "' is empty");
  return axis;
}

}  // namespace

std::string to_string(Command command) {
  switch (command) {
    case Command::limits: return "limits";
    case Command::sweep: return "sweep";
    case Command::simulate: return "simulate";
    case Command::verify: return "verify";
  }
  return "unknown";
}

bool operator==(const RunConfig& lhs, const RunConfig& rhs) {
  const bool same_state =
      lhs.initial_state.has_value() == rhs.initial_state.has_value() &&
      (!lhs.initial_state || (lhs.initial_state->size() == rhs.initial_state->size() &&
                              *lhs.initial_state == *rhs.initial_state));
  return lhs.command == rhs.command && lhs.model == rhs.model && same_state &&
         lhs.axes == rhs.axes && lhs.simulate == rhs.simulate && lhs.verify == rhs.verify &&
         lhs.out == rhs.out;
}

PathwayModel model_from_json(const Json& doc) {
  Reader r(doc, "model");
  const std::string family = r.string("family");
  try {
    if (family == "two_state") {
      TwoStateParams p;
      p.alpha = r.number("alpha", p.alpha);
      p.k = r.number("k", p.k);
      p.g = r.number("g", p.g);
      p.h = r.number("h", p.h);
      p.a = r.number("a", p.a);
      return PathwayModel::two_state(p);
    }
    if (family == "chain") {
      ChainParams p;
      p.alpha = r.number("alpha", p.alpha);
      p.K = r.number("K", p.K);
      p.g = r.number("g", p.g);
      p.h = r.number("h", p.h);
      p.a = r.number("a", p.a);
      const long long n = r.has("n") ? r.integer("n") : 1;
      if (n < 1 || n > 100000) throw ConfigError("model.n must be a positive integer");
      p.n = static_cast<int>(n);
      return PathwayModel::chain(p);
    }
    if (family == "linear_consumption") {
      return PathwayModel::cyclic(
          linear_consumption_network(r.number("alpha"), r.number("k"), r.number("k_y")));
    }
    if (family == "cyclic") {
      const double alpha = r.number("alpha");
      const Json& nodes_doc = r.raw("nodes");
      if (!nodes_doc.is_array() || nodes_doc.empty()) {
        throw ConfigError("model.nodes must be a non-empty array");
      }
      std::vector<CyclicNode> nodes;
      for (std::size_t i = 0; i < nodes_doc.size(); ++i) {
        const std::string where = "model.nodes[" + std::to_string(i) + "]";
        Reader nr(nodes_doc[i], where);
        nodes.push_back({rate_from_json(nr.raw("f"), where + ".f"),
                         rate_from_json(nr.raw("g"), where + ".g")});
      }
      const RateFunction sink = rate_from_json(r.raw("sink"), "model.sink");
      const Vector eq = to_vector(r.numbers("equilibrium"));
      return PathwayModel::cyclic(CyclicNetwork(alpha, std::move(nodes), sink, eq));
    }
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid model: ") + e.what());
  }
  throw ConfigError("model.family must be two_state, chain, cyclic or linear_consumption");
}

Json model_to_json(const PathwayModel& model) {
  switch (model.family()) {
    case Family::two_state: {
      const auto& p = model.two_state_params();
      return {{"family", "two_state"}, {"alpha", p.alpha}, {"k", p.k},
              {"g", p.g},              {"h", p.h},         {"a", p.a}};
    }
    case Family::chain: {
      const auto& p = model.chain_params();
      return {{"family", "chain"}, {"alpha", p.alpha}, {"K", p.K}, {"g", p.g},
              {"h", p.h},          {"a", p.a},         {"n", p.n}};
    }
    case Family::cyclic: {
      const auto& net = model.cyclic_network();
      Json nodes = Json::array();
      for (const auto& node : net.nodes()) {
        nodes.push_back({{"f", rate_to_json(node.f)}, {"g", rate_to_json(node.g)}});
      }
      return {{"family", "cyclic"},
              {"alpha", net.alpha()},
              {"nodes", nodes},
              {"sink", rate_to_json(net.sink())},
              {"equilibrium", vector_json(net.equilibrium())}};
    }
  }
  return {};
}

RunConfig parse_config(const Json& doc) {
  RunConfig config;
  Reader r(doc, "config");
  const std::string command = r.string("command");
  if (command == "limits") {
    config.command = Command::limits;
  } else if (command == "sweep") {
    config.command = Command::sweep;
  } else if (command == "simulate") {
    config.command = Command::simulate;
  } else if (command == "verify") {
    config.command = Command::verify;
  } else {
    throw ConfigError("command must be limits, sweep, simulate or verify, got '" + command + "'");
  }

  const auto block_allowed = [&](const char* key, Command owner) {
    if (r.has(key) && config.command != owner) {
      throw ConfigError(std::string("block '") + key + "' is not valid for command " + command);
    }
    return r.has(key);
  };

  if (config.command != Command::verify) {
    config.model = model_from_json(r.raw("model"));
  } else if (r.has("model")) {
    throw ConfigError("verify takes no model; its cases are embedded");
  }

  if (r.has("initial_state")) {
    if (config.command != Command::limits && config.command != Command::simulate) {
      throw ConfigError("initial_state is only valid for limits and simulate");
    }
    config.initial_state = to_vector(r.numbers("initial_state"));
    if (config.initial_state->size() != config.model->state_dim()) {
      throw ConfigError("initial_state needs " + std::to_string(config.model->state_dim()) +
                        " entries");
    }
    if ((config.initial_state->array() < 0.0).any()) {
      throw ConfigError("initial_state entries must be nonnegative");
    }
  }

  if (config.command == Command::sweep) {
    if (config.model->family() == Family::cyclic) {
      throw ConfigError("sweep needs a two_state or chain model as its base");
    }
    Reader s(r.raw("sweep"), "sweep");
    const Json& axes = s.raw("axes");
    if (!axes.is_array() || axes.empty()) throw ConfigError("sweep.axes must be a non-empty array");
    for (std::size_t i = 0; i < axes.size(); ++i) config.axes.push_back(axis_from_json(axes[i], i));
  } else {
    block_allowed("sweep", Command::sweep);
  }

  if (block_allowed("simulate", Command::simulate)) {
    Reader s(r.raw("simulate"), "simulate");
    if (s.has("controller")) config.simulate.controller = controller_from_json(s.raw("controller"));
    if (s.has("disturbance")) {
      config.simulate.disturbance = disturbance_from_json(s.raw("disturbance"));
    }
    config.simulate.t_end = s.number("t_end", config.simulate.t_end);
    config.simulate.dt = s.number("dt", config.simulate.dt);
    if (s.has("record_stride")) {
      const long long stride = s.integer("record_stride");
      if (stride < 1 || stride > 1000000000) {
        throw ConfigError("simulate.record_stride must be a positive integer");
      }
      config.simulate.record_stride = static_cast<int>(stride);
    }
    if (!(config.simulate.t_end > 0.0)) throw ConfigError("simulate.t_end must be positive");
    if (!(config.simulate.dt > 0.0 && config.simulate.dt <= config.simulate.t_end / 10.0)) {
      throw ConfigError("simulate.dt must be positive and at most t_end/10");
    }
    try {
      validate(config.simulate.controller, *config.model);
      validate(config.simulate.disturbance);
    } catch (const Error& e) {
      throw ConfigError(std::string("invalid simulate block: ") + e.what());
    }
  }

  if (block_allowed("verify", Command::verify)) {
    Reader v(r.raw("verify"), "verify");
    if (v.has("suites")) {
      const Json& suites = v.raw("suites");
      if (!suites.is_array()) throw ConfigError("verify.suites must be an array of strings");
      for (const auto& s : suites) {
        if (!s.is_string()) throw ConfigError("verify.suites must be an array of strings");
        config.verify.suites.push_back(s.get<std::string>());
      }
    }
    if (v.has("seed")) {
      const long long seed = v.integer("seed");
      if (seed < 0) throw ConfigError("verify.seed must be nonnegative");
      config.verify.seed = static_cast<unsigned long long>(seed);
    }
    if (v.has("inject_fault")) config.verify.inject_fault = v.string("inject_fault");
  }

  if (r.has("out")) config.out = r.string("out");
  return config;
}

RunConfig parse_config_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

Json serialize_config(const RunConfig& config) {
  Json doc{{"command", to_string(config.command)}};
  if (config.model) doc["model"] = model_to_json(*config.model);
  if (config.initial_state) doc["initial_state"] = vector_json(*config.initial_state);
  if (config.command == Command::sweep) {
    Json axes = Json::array();
    for (const auto& axis : config.axes) axes.push_back({{"name", axis.name}, {"values", axis.values}});
    doc["sweep"] = {{"axes", axes}};
  }
  if (config.command == Command::simulate) {
    doc["simulate"] = {{"controller", controller_to_json(config.simulate.controller)},
                       {"disturbance", disturbance_to_json(config.simulate.disturbance)},
                       {"t_end", config.simulate.t_end},
                       {"dt", config.simulate.dt},
                       {"record_stride", config.simulate.record_stride}};
  }
  if (config.command == Command::verify) {
    Json v = Json::object();
    if (!config.verify.suites.empty()) v["suites"] = config.verify.suites;
    if (config.verify.seed) v["seed"] = *config.verify.seed;
    if (config.verify.inject_fault) v["inject_fault"] = *config.verify.inject_fault;
    doc["verify"] = v;
  }
  if (config.out) doc["out"] = *config.out;
  return doc;
}

}  // namespace autolim::cli
