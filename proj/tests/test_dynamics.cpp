#include <doctest.h>

#include "zubov/dynamics.hpp"
#include "zubov/errors.hpp"
#include "zubov/rng.hpp"

#include <cmath>

using namespace zubov;

namespace {

Vec vec2(double a, double b) { return (Vec(2) << a, b).finished(); }

Vec random_in(const Domain& omega, Xoshiro256PlusPlus& rng) {
  Vec x(omega.dim());
  for (int i = 0; i < omega.dim(); ++i) {
    x[i] = rng.uniform(omega.lower[i], omega.upper[i]);
  }
  return x;
}

Vec random_delta(const DisturbanceBox& box, Xoshiro256PlusPlus& rng) {
  Vec d(box.dim());
  for (int j = 0; j < box.dim(); ++j) {
    d[j] = rng.uniform(box.lower[j], box.upper[j]);
  }
  return d;
}

}  // namespace

TEST_CASE("van der pol benchmark matches hand-substituted values") {
  const PerturbedSystem s = make_van_der_pol();
  CHECK(s.state_dim == 2);
  CHECK(s.dist_dim == 2);
  CHECK(s.disturbance.lower[0] == -0.3);
  CHECK(s.disturbance.upper[0] == 0.3);
  CHECK(s.disturbance.lower[1] == -0.1);
  CHECK(s.disturbance.upper[1] == 0.1);

  const Vec d = vec2(0.3, 0.1);
  CHECK(s.rhs(vec2(0, 0), d).norm() == 0.0);

  const Vec f = s.rhs(vec2(1, 0), d);
  CHECK(f[0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(f[1] == doctest::Approx(1.0).epsilon(1e-15));

  const Vec drift = s.drift(vec2(1, 1));
  CHECK(drift[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(drift[1] == doctest::Approx(1.0).epsilon(1e-15));

  const Vec c0 = s.channels[0](vec2(2, 3));
  const Vec c1 = s.channels[1](vec2(2, 3));
  CHECK(c0[0] == 2.0);
  CHECK(c0[1] == 0.0);
  CHECK(c1[0] == 0.0);
  CHECK(c1[1] == 3.0);

  CHECK(s.default_domain.lower[0] == -3.0);
  CHECK(s.default_domain.upper[1] == 3.0);
}

TEST_CASE("inverted pendulum closed loop") {
  const PerturbedSystem s = make_inverted_pendulum();
  CHECK(s.disturbance.lower[0] == -0.3);
  CHECK(s.disturbance.upper[1] == 0.2);
  CHECK(s.default_domain.lower[0] == doctest::Approx(-M_PI));

  Xoshiro256PlusPlus rng(5);
  for (int i = 0; i < 20; ++i) {
    CHECK(s.rhs(Vec::Zero(2), random_delta(s.disturbance, rng)).norm() == 0.0);
  }

  const Vec drift = s.drift(vec2(1, 0));
  CHECK(drift[0] == 0.0);
  CHECK(drift[1] == doctest::Approx(9.81 * std::sin(1.0) - 10.2).epsilon(1e-14));
}

TEST_CASE("product system family") {
  CHECK_THROWS_AS(make_product_system(0), ArgumentError);

  const PerturbedSystem p10 = make_product_system(10);
  CHECK(p10.state_dim == 10);
  CHECK(p10.dist_dim == 1);
  CHECK(p10.default_domain.lower[9] == -1.5);
  CHECK(p10.default_domain.upper[0] == 1.5);

  const Vec x = Vec::Constant(10, 0.5);
  const Vec f = p10.rhs(x, Vec::Constant(1, 1.0));
  for (int i = 0; i < 10; ++i) CHECK(f[i] == doctest::Approx(-0.25).epsilon(1e-15));

  const PerturbedSystem p1 = make_product_system(1);
  CHECK(p1.rhs(Vec::Constant(1, 0.5), Vec::Constant(1, 1.0))[0] ==
        doctest::Approx(-0.25).epsilon(1e-15));

  const PerturbedSystem p2 = make_product_system(2);
  CHECK(p2.rhs(vec2(1, 1), Vec::Constant(1, 1.0)).norm() == 0.0);
}

TEST_CASE("equilibrium invariance over random disturbances") {
  Xoshiro256PlusPlus rng(99);
  for (const auto& s : {make_van_der_pol(), make_inverted_pendulum(),
                        make_product_system(3), make_linear_2d()}) {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      worst = std::max(worst,
                       s.rhs(Vec::Zero(s.state_dim), random_delta(s.disturbance, rng))
                           .norm());
    }
    CHECK(worst == 0.0);
  }
}

TEST_CASE("affine decomposition agrees with the direct rhs") {
  Xoshiro256PlusPlus rng(123);
  for (const auto& s : {make_van_der_pol(), make_inverted_pendulum(),
                        make_product_system(4), make_linear_2d()}) {
    for (int i = 0; i < 1000; ++i) {
      const Vec x = random_in(s.default_domain, rng);
      const Vec d = random_delta(s.disturbance, rng);
      Vec recomposed = s.drift(x);
      for (int j = 0; j < s.dist_dim; ++j) recomposed += d[j] * s.channels[j](x);
      const Vec direct = s.rhs(x, d);
      CHECK((direct - recomposed).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("cost is positive away from the origin and zero at it") {
  Xoshiro256PlusPlus rng(7);
  const PerturbedSystem s = make_van_der_pol();
  CHECK(s.running_cost(Vec::Zero(2), vec2(0.1, 0.05)) == 0.0);
  for (int i = 0; i < 100; ++i) {
    Vec x = random_in(s.default_domain, rng);
    if (x.norm() == 0.0) continue;
    CHECK(s.running_cost(x, random_delta(s.disturbance, rng)) > 0.0);
  }
}

TEST_CASE("rhs rejects dimension mismatches") {
  const PerturbedSystem s = make_van_der_pol();
  CHECK_THROWS_AS(s.rhs(Vec::Zero(3), Vec::Zero(2)), ArgumentError);
  CHECK_THROWS_AS(s.rhs(Vec::Zero(2), Vec::Zero(1)), ArgumentError);
}

TEST_CASE("system names parse") {
  CHECK(make_system("vdp").name == "vdp");
  CHECK(make_system("pendulum").name == "pendulum");
  CHECK(make_system("product10").state_dim == 10);
  CHECK_THROWS_AS(make_system("nope"), ArgumentError);
  CHECK_THROWS_AS(make_system("product"), ArgumentError);
  CHECK_THROWS_AS(make_system("productx"), ArgumentError);
}
