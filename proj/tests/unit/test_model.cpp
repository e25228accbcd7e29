#include <gtest/gtest.h>

#include <cmath>

#include "autolim/error.hpp"
#include "autolim/model.hpp"
#include "oracles.hpp"

namespace autolim {
namespace {

using testing::Sampler;

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::numeric;
}

PathwayModel two_state(double alpha, double k, double g, double h = 0.0, double a = 0.0) {
  return PathwayModel::two_state({alpha, k, g, h, a});
}

TEST(VectorField, TwoStateHandValue) {
  const Vector f = vector_field(two_state(1, 1, 0), Eigen::Vector2d(2, 1), 1.0, 0.0);
  EXPECT_DOUBLE_EQ(f[0], -1.0);
  EXPECT_DOUBLE_EQ(f[1], 2.0);
}

TEST(VectorField, TwoStateEquilibriumIsFixedPoint) {
  const Vector f = vector_field(two_state(1, 1, 1), Eigen::Vector2d(1, 1), 1.0, 0.0);
  EXPECT_EQ(f.lpNorm<Eigen::Infinity>(), 0.0);
}

TEST(VectorField, ChainEquilibriumIsFixedPoint) {
  const auto model = PathwayModel::chain({1.0, 2.0, 1.0, 0.0, 0.0, 3});
  const Vector f = vector_field(model, Eigen::Vector4d(0.5, 0.5, 0.5, 1.0), 1.0, 0.0);
  EXPECT_LE(f.lpNorm<Eigen::Infinity>(), 1e-15);
}

TEST(VectorField, RejectsWrongDimension) {
  EXPECT_EQ(kind_of([] { vector_field(two_state(1, 1, 1), Eigen::Vector3d(1, 1, 1), 1, 0); }),
            ErrorKind::contract_violation);
}

TEST(VectorField, NegativeComponentIsNamed) {
  try {
    vector_field(two_state(1, 1, 1), Eigen::Vector2d(1, -0.5), 1, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain);
    EXPECT_NE(std::string(e.what()).find('y'), std::string::npos);
  }
}

TEST(VectorField, ChainCascadeByHand) {
  // alpha=2, K=1, g=0, a=0, n=2 at x=(1,3), y=2, u=0.5.
  const auto model = PathwayModel::chain({2.0, 1.0, 0.0, 0.0, 0.0, 2});
  const Vector f = vector_field(model, Eigen::Vector3d(1, 3, 2), 0.5, 0.25);
  const double pk = 2.0 * 1.0 * 3.0 / 2.0;
  EXPECT_DOUBLE_EQ(f[0], 0.5 - 1.0);
  EXPECT_DOUBLE_EQ(f[1], 1.0 - pk);
  EXPECT_DOUBLE_EQ(f[2], 3.0 * pk - 2.0 * 0.5 - 1.25);
}

TEST(Equilibrium, TwoState) {
  const Equilibrium eq = equilibrium(two_state(1, 4, 0));
  EXPECT_DOUBLE_EQ(eq.x_star[0], 0.25);
  EXPECT_DOUBLE_EQ(eq.y_star, 1.0);
  EXPECT_DOUBLE_EQ(eq.u_star, 1.0);
}

TEST(Equilibrium, Chain) {
  const Equilibrium eq = equilibrium(PathwayModel::chain({1.0, 1.0, 0.0, 0.0, 0.0, 5}));
  ASSERT_EQ(eq.x_star.size(), 5);
  EXPECT_EQ(eq.x_star, Vector::Ones(5));
  EXPECT_EQ(eq.state().size(), 6);
}

TEST(Equilibrium, LinearConsumptionNetwork) {
  const auto model = PathwayModel::cyclic(linear_consumption_network(1, 1, 1));
  const Equilibrium eq = equilibrium(model);
  EXPECT_NEAR(eq.x_star[0], 1.0, 1e-15);
  EXPECT_NEAR(eq.y_star, 1.0, 1e-15);
  EXPECT_LE(vector_field(model, eq.state(), eq.u_star, 0).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(NaturalControl, Values) {
  EXPECT_DOUBLE_EQ(natural_control(two_state(1, 1, 1, 3.7), 1.0), 1.0);
  EXPECT_DOUBLE_EQ(natural_control(two_state(1, 1, 1, 0.0), 7.0), 1.0);
  EXPECT_DOUBLE_EQ(natural_control(two_state(1, 1, 1, 1.0), 3.0), 0.2);
}

TEST(NaturalControl, CyclicUnsupported) {
  const auto model = PathwayModel::cyclic(linear_consumption_network(1, 1, 1));
  EXPECT_EQ(kind_of([&] { natural_control(model, 1.0); }), ErrorKind::unsupported);
}

TEST(StabilityMargin, Examples) {
  const auto m1 = two_state_stability_margin({1, 1, 1, 3, 1});
  EXPECT_DOUBLE_EQ(m1.value, 2.0);
  EXPECT_DOUBLE_EQ(m1.upper, 3.0);
  EXPECT_TRUE(m1.stable);
  EXPECT_FALSE(two_state_stability_margin({1, 1, 1, 1, 1}).stable);
  const auto m3 = two_state_stability_margin({2, 1, 0, 2, 1});
  EXPECT_DOUBLE_EQ(m3.upper, 0.5);
  EXPECT_DOUBLE_EQ(m3.value, 1.0);
  EXPECT_FALSE(m3.stable);
}

TEST(Params, InvalidValuesRejected) {
  EXPECT_THROW(two_state(0, 1, 1), Error);
  EXPECT_THROW(two_state(1, -1, 1), Error);
  EXPECT_THROW(two_state(1, 1, -0.1), Error);
  EXPECT_THROW(two_state(1, 1, 1, std::nan("")), Error);
  EXPECT_THROW(PathwayModel::chain({1, 1, 0, 0, 0, 0}), Error);
}

TEST(RateFunction, DerivativesMatchCentralDifferences) {
  const RateFunction rates[] = {RateFunction::linear(1.7), RateFunction::saturating(2.5),
                                RateFunction::power(0.8, 1.6), RateFunction::power(3.0, 0.5)};
  for (const auto& f : rates) {
    for (double x : {0.3, 1.0, 2.2}) {
      const double h = 1e-6;
      EXPECT_NEAR(f.derivative(x), (f(x + h) - f(x - h)) / (2 * h), 1e-7 * (1 + f.derivative(x)));
    }
  }
}

TEST(CyclicNetwork, UnequalSlopesViolateAssumption) {
  // Two nodes at x* = 1 with decay slopes 1 and 2.
  std::vector<CyclicNode> nodes = {{RateFunction::linear(1.0), RateFunction::linear(2.0)},
                                   {RateFunction::linear(2.0), RateFunction::linear(3.0)}};
  const CyclicNetwork net(1.0, nodes, RateFunction::linear(2.0), Vector::Ones(3));
  EXPECT_FALSE(net.equal_slopes());
  EXPECT_EQ(kind_of([&] { net.a(); }), ErrorKind::assumption_violation);
}

TEST(CyclicNetwork, WrongEquilibriumRejected) {
  std::vector<CyclicNode> nodes = {{RateFunction::linear(1.0), RateFunction::linear(2.0)}};
  EXPECT_EQ(kind_of([&] {
              CyclicNetwork(1.0, nodes, RateFunction::linear(1.0), Eigen::Vector2d(1.0, 1.5));
            }),
            ErrorKind::invalid_model);
}

TEST(CyclicNetwork, DecreasingRateRejected) {
  std::vector<CyclicNode> nodes = {{RateFunction::linear(-1.0), RateFunction::linear(2.0)}};
  EXPECT_THROW(CyclicNetwork(1.0, nodes, RateFunction::linear(1.0), Eigen::Vector2d(1.0, 1.0)),
               Error);
}

TEST(CyclicView, TwoStateWithoutPkFeedback) {
  const auto model = two_state(2.0, 3.0, 0.0, 0.4, 0.7);
  const CyclicNetwork net = cyclic_view(model);
  ASSERT_EQ(net.n(), 1);
  EXPECT_NEAR(net.a(), 3.0, 1e-14);
  EXPECT_NEAR(net.r(), 3.0 * 3.0 / 2.0, 1e-14);
}

class ModelProperties : public ::testing::Test {
 protected:
  std::vector<PathwayModel> models() {
    Sampler s(2024);
    std::vector<PathwayModel> out;
    for (int i = 0; i < 25; ++i) out.push_back(PathwayModel::two_state(s.two_state()));
    for (int i = 0; i < 25; ++i) out.push_back(PathwayModel::chain(s.chain(25)));
    for (int i = 0; i < 25; ++i) out.push_back(PathwayModel::cyclic(s.cyclic(6)));
    return out;
  }
};

TEST_F(ModelProperties, EquilibriumResidual) {
  for (const auto& model : models()) {
    const Equilibrium eq = equilibrium(model);
    EXPECT_LE(vector_field(model, eq.state(), eq.u_star, 0).lpNorm<Eigen::Infinity>(), 1e-10);
  }
}

TEST_F(ModelProperties, AffineInControl) {
  Sampler s(5);
  for (const auto& model : models()) {
    Vector x = equilibrium(model).state();
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] *= s.uniform(0.5, 1.5);
    const double d = s.uniform(-0.5, 0.5);
    const Vector f0 = vector_field(model, x, 0, d);
    const Vector f1 = vector_field(model, x, 1, d);
    const Vector f2 = vector_field(model, x, 2, d);
    EXPECT_LE((f2 - f0 - 2.0 * (f1 - f0)).lpNorm<Eigen::Infinity>(),
              1e-12 * (1.0 + f2.lpNorm<Eigen::Infinity>()));
  }
}

TEST_F(ModelProperties, ZeroCoordinateDriftIgnoresControl) {
  Sampler s(6);
  for (const auto& model : models()) {
    if (model.family() == Family::cyclic) continue;
    Vector x = equilibrium(model).state();
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] *= s.uniform(0.3, 2.0);
    const Eigen::Index m = x.size() - 1;
    const auto drift = [&](double u) {
      const Vector f = vector_field(model, x, u, 0.1);
      return f[0] + f[m] / model.alpha();
    };
    EXPECT_NEAR(drift(0.0), drift(1.0), 1e-12 * (1.0 + std::abs(drift(0.0))));
  }
}

TEST_F(ModelProperties, DisturbanceEntersLastEquationOnly) {
  for (const auto& model : models()) {
    const Equilibrium eq = equilibrium(model);
    const Vector diff = vector_field(model, eq.state(), eq.u_star, 1.0) -
                        vector_field(model, eq.state(), eq.u_star, 0.0);
    const Eigen::Index m = diff.size() - 1;
    EXPECT_EQ(diff.head(m).lpNorm<Eigen::Infinity>(), 0.0);
    EXPECT_NEAR(diff[m], -1.0, 1e-12);
  }
}

}  // namespace
}  // namespace autolim
