#include <doctest.h>

#include <cmath>

#include "zigzag/linalg.hpp"
#include "zigzag/potential.hpp"
#include "zigzag/rng.hpp"

using zigzag::Dual;
using zigzag::Potential;

namespace {

// Central finite differences of the double-valued path: the independent
// oracle for every AD check in this file.
zigzag::Vector fd_gradient(const Potential& p, const zigzag::Vector& x,
                           double h = 1e-5) {
  zigzag::Vector g(x.size());
  zigzag::Vector lo = x, hi = x;
  for (size_t i = 0; i < x.size(); ++i) {
    hi[i] = x[i] + h;
    lo[i] = x[i] - h;
    g[i] = (p.value(hi) - p.value(lo)) / (2.0 * h);
    hi[i] = x[i];
    lo[i] = x[i];
  }
  return g;
}

}  // namespace

TEST_CASE("dual arithmetic follows the chain rule exactly") {
  Dual x = Dual::seeded(1.5, 1, 0);

  SUBCASE("product rule") {
    Dual y = x * x;
    CHECK(y.value() == doctest::Approx(2.25));
    CHECK(y.tangent(0) == doctest::Approx(3.0));
  }
  SUBCASE("quotient rule") {
    Dual y = 1.0 / (x + 1.0);
    CHECK(y.tangent(0) == doctest::Approx(-1.0 / 6.25));
  }
  SUBCASE("exp and log invert") {
    Dual y = log(exp(x));
    CHECK(y.value() == doctest::Approx(1.5));
    CHECK(y.tangent(0) == doctest::Approx(1.0));
  }
  SUBCASE("sqrt") {
    Dual y = sqrt(x);
    CHECK(y.tangent(0) == doctest::Approx(0.5 / std::sqrt(1.5)));
  }
  SUBCASE("pow") {
    Dual y = pow(x, 3.5);
    CHECK(y.tangent(0) == doctest::Approx(3.5 * std::pow(1.5, 2.5)));
  }
  SUBCASE("logistic") {
    Dual y = logistic(x);
    double s = 1.0 / (1.0 + std::exp(-1.5));
    CHECK(y.value() == doctest::Approx(s));
    CHECK(y.tangent(0) == doctest::Approx(s * (1.0 - s)));
  }
  SUBCASE("constants carry zero tangents") {
    Dual y = x * 2.0 + Dual(7.0);
    CHECK(y.tangent(0) == doctest::Approx(2.0));
  }
}

TEST_CASE("gradient of x^2/2 in one dimension") {
  auto p = zigzag::make_potential(1, [](auto x) { return x[0] * x[0] * 0.5; });
  auto g = zigzag::gradient(p, zigzag::Vector{1.5});
  CHECK(g[0] == doctest::Approx(1.5));
}

TEST_CASE("gradient of the isotropic quadratic is the identity map") {
  auto p = zigzag::make_potential(2, [](auto x) {
    return (x[0] * x[0] + x[1] * x[1]) * 0.5;
  });
  auto g = zigzag::gradient(p, zigzag::Vector{0.5, 1.1});
  CHECK(g[0] == doctest::Approx(0.5));
  CHECK(g[1] == doctest::Approx(1.1));
}

TEST_CASE("gradient of x^4/4 at x=2 agrees with finite differences") {
  auto p = zigzag::make_potential(1, [](auto x) {
    auto x2 = x[0] * x[0];
    return x2 * x2 * 0.25;
  });
  auto g = zigzag::gradient(p, zigzag::Vector{2.0});
  auto fd = fd_gradient(p, {2.0});
  CHECK(g[0] == doctest::Approx(8.0));
  CHECK(std::abs(g[0] - fd[0]) / (1.0 + std::abs(g[0])) < 1e-6);
}

TEST_CASE("gradient uses exactly one evaluation pass") {
  int evals = 0;
  Potential p;
  p.dim = 3;
  p.value_dual = [&evals](std::span<const Dual> x) {
    ++evals;
    return x[0] * x[1] + x[2];
  };
  (void)zigzag::gradient(p, zigzag::Vector{1.0, 2.0, 3.0});
  CHECK(evals == 1);
}

TEST_CASE("directional derivative at a displaced point") {
  auto iso = zigzag::make_potential(2, [](auto x) {
    return (x[0] * x[0] + x[1] * x[1]) * 0.5;
  });
  zigzag::Vector x{0.0, 0.0};
  zigzag::Vector v{1.0, 1.0};
  CHECK(zigzag::directional_derivative(iso, x, v, 0, 2.0) == doctest::Approx(2.0));

  zigzag::Vector x2{0.5, 1.1};
  zigzag::Vector v2{1.0, -1.0};
  CHECK(zigzag::directional_derivative(iso, x2, v2, 1, 0.0) == doctest::Approx(1.1));

  auto quartic = zigzag::make_potential(1, [](auto x) {
    auto x2 = x[0] * x[0];
    return x2 * x2 * 0.25;
  });
  zigzag::Vector x3{1.0};
  zigzag::Vector v3{1.0};
  CHECK(zigzag::directional_derivative(quartic, x3, v3, 0, 1.0) ==
        doctest::Approx(8.0));
}

TEST_CASE("identity-seeded single passes reproduce the gradient column by column") {
  auto p = zigzag::make_potential(3, [](auto x) {
    using std::exp;
    return x[0] * x[1] + exp(x[2]) * x[0];
  });
  zigzag::Vector x{0.3, -1.2, 0.7};
  auto g = zigzag::gradient(p, x);
  zigzag::Vector zero_v{1.0, 1.0, 1.0};
  for (int i = 0; i < 3; ++i) {
    CHECK(zigzag::directional_derivative(p, x, zero_v, i, 0.0) ==
          doctest::Approx(g[static_cast<size_t>(i)]).epsilon(1e-12));
  }
}

TEST_CASE("gradients are invariant under additive constants in U") {
  auto base = zigzag::make_potential(2, [](auto x) {
    using std::log;
    return x[0] * x[0] * 0.5 + log(x[1] * x[1] + 1.0);
  });
  auto shifted = zigzag::make_potential(2, [](auto x) {
    using std::log;
    return x[0] * x[0] * 0.5 + log(x[1] * x[1] + 1.0) + 1234.5;
  });
  zigzag::Rng rng(9, 0);
  for (int rep = 0; rep < 50; ++rep) {
    zigzag::Vector x{4.0 * rng.uniform() - 2.0, 4.0 * rng.uniform() - 2.0};
    auto g0 = zigzag::gradient(base, x);
    auto g1 = zigzag::gradient(shifted, x);
    CHECK(g0[0] == g1[0]);
    CHECK(g0[1] == g1[1]);
  }
}

TEST_CASE("non-finite values raise NonFiniteGradient with the offending point") {
  auto p = zigzag::make_potential(1, [](auto x) {
    using std::log;
    return log(x[0]);  // NaN for negative input
  });
  try {
    (void)zigzag::gradient(p, zigzag::Vector{-1.0});
    FAIL("expected NonFiniteGradient");
  } catch (const zigzag::NonFiniteGradient& e) {
    REQUIRE(e.at.size() == 1);
    CHECK(e.at[0] == -1.0);
  }
}
