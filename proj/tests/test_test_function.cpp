#include "helpers.hpp"
#include "worldtube/invariants.hpp"
#include "worldtube/test_function.hpp"

#include <doctest.h>

#include <numbers>

using namespace worldtube;
using testing::max_diff;

TEST_CASE("bump values and support")
{
    const Event x0{1.0, 2.0, -1.0, 0.5};
    const BumpTestFunction phi(x0, 0.5, 2.0);
    CHECK(phi(x0) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-15));
    CHECK(phi(x0 + FourVector{0.25, 0, 0, 0}) == doctest::Approx(2.0 * std::exp(1.0 / (0.25 - 1.0))).epsilon(1e-14));
    CHECK(phi(x0 + FourVector{0, 0, 0.5, 0}) == 0.0);
    CHECK(phi(x0 + FourVector{0, 0.3, 0.3, 0.3}) == 0.0);
    CHECK(phi.in_support(x0 + FourVector{0, 0, 0.49, 0}));
    CHECK_FALSE(phi.in_support(x0 + FourVector{0.3, 0.3, 0.3, 0}));
    CHECK(max_abs(phi.gradient(x0 + FourVector{0, 0.6, 0, 0})) == 0.0);
    CHECK(phi.hessian(x0 + FourVector{0, 0.6, 0, 0}).max_abs() == 0.0);
    // stationary at the center
    CHECK(max_abs(phi.gradient(x0)) == 0.0);
}

TEST_CASE("euclidean frame norm")
{
    const AbsoluteVelocity u = AbsoluteVelocity::from_rapidity(0.8, 0.0, 1.0, 0.0);
    const BumpTestFunction phi(Event{}, 1.0, 1.0, u);
    CHECK(phi.euclidean_norm2(u.vector()) == doctest::Approx(1.0).epsilon(1e-14));
    const auto& t = phi.tetrad();
    const FourVector v = 2.0 * t[0] - 1.0 * t[2] + 0.5 * t[3];
    CHECK(phi.euclidean_norm2(v) == doctest::Approx(5.25).epsilon(1e-12));
    const auto c = phi.frame_components(v);
    CHECK(c[0] == doctest::Approx(2.0));
    CHECK(c[1] == doctest::Approx(0.0).scale(1.0));
    CHECK(c[2] == doctest::Approx(-1.0));
    CHECK(c[3] == doctest::Approx(0.5));
}

TEST_CASE("integral against a radial Simpson rule")
{
    // int Phi d^4x = 2 pi^2 A R^4 int_0^1 r^3 exp(1 / (r^2 - 1)) dr
    const int n = 200000;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i)
    {
        const double r = double(i) / n;
        const double f = r < 1.0 ? r * r * r * std::exp(1.0 / (r * r - 1.0)) : 0.0;
        sum += f * (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0));
    }
    const double radial = sum / (3.0 * n);
    const double pi = std::numbers::pi;
    const BumpTestFunction phi(Event{0.3, 0, 0, 0}, 0.7, 1.5, AbsoluteVelocity::from_rapidity(1.0, 1.0, 0.0, 0.0));
    CHECK(phi.integral() == doctest::Approx(2 * pi * pi * 1.5 * std::pow(0.7, 4) * radial).epsilon(1e-10));
}

TEST_CASE("derivatives against finite differences")
{
    const CheckResult r = check_test_function_derivatives(200, 3);
    CHECK(r.passed);

    // Hessian is symmetric under the Lorentz product
    std::mt19937_64 rng(4);
    const BumpTestFunction phi(Event{}, 1.0, 1.0, random_velocity(rng, 1.0));
    for (int i = 0; i < 50; ++i)
    {
        const Event x = Event{} + 0.4 * testing::random_vector(rng);
        if (!phi.in_support(x)) continue;
        const LinMap4 H = phi.hessian(x);
        const FourVector a = testing::random_vector(rng), b = testing::random_vector(rng);
        CHECK(lorentz_product(a, H * b) == doctest::Approx(lorentz_product(b, H * a)).epsilon(1e-10).scale(1.0));
    }
}
