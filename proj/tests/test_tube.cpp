#include "helpers.hpp"
#include "worldtube/errors.hpp"
#include "worldtube/invariants.hpp"
#include "worldtube/tube.hpp"

#include <doctest.h>

#include <numbers>

using namespace worldtube;
using testing::max_diff;

namespace {

constexpr double pi = std::numbers::pi;

ShellConfig make_shell(double eps, double a, const AbsoluteVelocity& u = AbsoluteVelocity::rest())
{
    const FourVector nc = spatial_frame(u)[0];
    return ShellConfig(UniformWorldline(Event{0.2, 0.1, -0.3, 0.0}, u, nc, a), eps, 1.0);
}

} // namespace

TEST_CASE("tube parametrization")
{
    const ShellConfig shell = make_shell(0.2, 1.0);
    const FourVector n{0.0, 0.0, 0.6, 0.8};
    CHECK(max_diff(tube_param(shell, 0.0, n) - shell.center().origin(), 0.2 * n) < 1e-15);
    for (double s : {-1.5, 0.3, 2.0})
        CHECK(max_diff(tube_param(shell, s, n) - shell.constituent(n).position(s), FourVector{}) == 0.0);

    const ShellConfig thin = make_shell(1e-12, 1.0);
    CHECK(max_diff(tube_param(thin, 0.7, n) - thin.center().position(0.7), FourVector{}) < 1e-11);
}

TEST_CASE("gram determinant and measure density")
{
    const ShellConfig flat = make_shell(0.1, 0.0);
    CHECK(std::abs(gram_determinant(flat, 0.4, FourVector{0, 0, 1, 0})) == doctest::Approx(1e-4).epsilon(1e-12));

    const ShellConfig shell = make_shell(0.1, 1.0);
    const FourVector nc = shell.center().n();
    CHECK(std::sqrt(std::abs(gram_determinant(shell, 0.0, nc))) == doctest::Approx(0.011).epsilon(1e-12));
    CHECK(measure_density(shell, 1.3, FourVector{0, 0, 0, 1}) == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(measure_density(shell, -0.2, -1.0 * nc) == doctest::Approx(0.009).epsilon(1e-14));

    for (double s : {-1.0, 0.5})
        for (const FourVector& n : {nc, FourVector{0, 0.6, 0.8, 0}, FourVector{0, -0.48, 0.6, 0.64}})
            CHECK(std::sqrt(std::abs(gram_determinant(shell, s, n))) ==
                  doctest::Approx(measure_density(shell, s, n)).epsilon(1e-10));
}

TEST_CASE("finite-difference Gram matrix of the (s, theta, phi) chart")
{
    const AbsoluteVelocity u = AbsoluteVelocity::from_rapidity(0.6, 0.0, 1.0, 0.0);
    const ShellConfig shell = make_shell(0.15, 1.3, u);
    const FourVector nc = shell.center().n();
    const auto [a, b] = complete_tetrad(u, nc);
    auto p = [&](double s, double th, double ph) { return tube_param(shell, s, sphere_point(nc, a, b, th, ph)); };

    const double h = 1e-4;
    for (double s : {-0.8, 0.0, 1.1})
        for (double th : {0.4, 1.5, 2.6})
            for (double ph : {0.3, 2.0, 4.5})
            {
                const std::array<FourVector, 3> cols{(p(s + h, th, ph) - p(s - h, th, ph)) / (2 * h),
                                                     (p(s, th + h, ph) - p(s, th - h, ph)) / (2 * h),
                                                     (p(s, th, ph + h) - p(s, th, ph - h)) / (2 * h)};
                double G[3][3];
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) G[i][j] = lorentz_product(cols[i], cols[j]);
                const double det = G[0][0] * (G[1][1] * G[2][2] - G[1][2] * G[2][1]) -
                                   G[0][1] * (G[1][0] * G[2][2] - G[1][2] * G[2][0]) +
                                   G[0][2] * (G[1][0] * G[2][1] - G[1][1] * G[2][0]);
                // the chart's area element carries sin(theta)
                const double sin2 = std::sin(th) * std::sin(th);
                const double expected = gram_determinant(shell, s, sphere_point(nc, a, b, th, ph)) * sin2;
                CHECK(det == doctest::Approx(expected).epsilon(1e-6));
            }
}

TEST_CASE("measure grid suite")
{
    const CheckResult r = check_measure();
    CHECK(r.passed);
    CHECK(r.metrics["grid_points"].get<int>() == 1872);
}

TEST_CASE("velocity field")
{
    const ShellConfig shell = make_shell(0.3, 1.0, AbsoluteVelocity::from_rapidity(1.0, 1.0, 1.0, 1.0));
    const ShellConfig thin = make_shell(1e-300, 1.0);
    CHECK(max_diff(velocity_field(thin, 0.6, FourVector{0, 0, 1, 0}), thin.center().velocity(0.6)) < 1e-15);

    const auto axes = spatial_frame(shell.center().u());
    for (double s : {-2.0, 0.0, 1.5})
        for (const FourVector& n : {axes[0], -1.0 * axes[0], (1 / std::sqrt(2.0)) * (axes[1] - axes[0])})
        {
            const FourVector v = velocity_field(shell, s, n);
            CHECK(std::abs(lorentz_product(v, v) + 1.0) < 1e-12 * max_abs(v) * max_abs(v));
            CHECK(v[0] > 0.0);
        }

    const ShellConfig flat = make_shell(0.3, 0.0);
    CHECK(max_diff(velocity_field(flat, 1.0, FourVector{0, 1, 0, 0}), velocity_field(flat, 1.0, FourVector{0, 0, 0, 1})) ==
          0.0);
}

TEST_CASE("sphere quadrature")
{
    const AbsoluteVelocity u = AbsoluteVelocity::from_rapidity(1.2, 0.3, 0.3, 1.0);
    const FourVector nc = spatial_frame(u)[1];
    const SphereQuadrature q = sphere_quadrature(u, nc, 4, 8);
    double total = 0.0;
    for (double w : q.weights)
    {
        CHECK(w > 0.0);
        total += w;
    }
    CHECK(total == doctest::Approx(4 * pi).epsilon(1e-14));
    for (const FourVector& n : q.nodes)
    {
        CHECK(std::abs(lorentz_product(n, u)) < 1e-12 * max_abs(n));
        CHECK(std::abs(lorentz_product(n, n) - 1.0) < 1e-12 * max_abs(n) * max_abs(n));
    }

    // degree-4 polynomial in n: int (n.e)^4 dn = 4 pi / 5 for a unit e orthogonal to u
    const FourVector e = (1 / std::sqrt(3.0)) * (spatial_frame(u)[0] + spatial_frame(u)[1] + spatial_frame(u)[2]);
    double quartic = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) quartic += q.weights[i] * std::pow(lorentz_product(q.nodes[i], e), 4);
    CHECK(quartic == doctest::Approx(4 * pi / 5).epsilon(1e-13));

    CHECK_THROWS_AS(sphere_quadrature(u, nc, 1, 8), PreconditionError);
    CHECK_THROWS_AS(sphere_quadrature(u, nc, 4, 3), PreconditionError);
    CHECK_THROWS_AS(sphere_quadrature(u, FourVector{0, 1, 0, 0}, 4, 8), PreconditionError);
}

TEST_CASE("moment identities")
{
    const CheckResult r = check_moments(8, 16);
    CHECK(r.passed);
    CHECK(r.metrics["first"].get<double>() < 1e-12);
    CHECK(r.metrics["third"].get<double>() < 1e-12);
    CHECK(r.metrics["second"].get<double>() < 1e-12);
}

TEST_CASE("tube integral")
{
    const double T = 3.0;
    for (double a : {0.0, 0.7})
    {
        const ShellConfig shell = make_shell(0.2, a);
        const SphereQuadrature q = sphere_quadrature(shell.center().u(), shell.center().n(), 6, 12);
        const double area = tube_integral(shell, [](const TubePoint&) { return 1.0; }, {-1.0, 2.0}, q);
        CHECK(area == doctest::Approx(4 * pi * 0.04 * T).epsilon(1e-13));

        // the measure density makes the first moment along n_c nonzero: eps^3 a (4 pi / 3) T
        const FourVector nc = shell.center().n();
        const double moment = tube_integral(
            shell, [&](const TubePoint& p) { return lorentz_product(nc, p.n); }, {-1.0, 2.0}, q);
        CHECK(moment == doctest::Approx(0.008 * a * 4 * pi / 3 * T).epsilon(1e-12).scale(1e-15));
    }

    const ShellConfig shell = make_shell(0.2, 1.0);
    const SphereQuadrature q = sphere_quadrature(shell.center().u(), shell.center().n(), 4, 8);
    CHECK_THROWS_AS(tube_integral(shell, [](const TubePoint&) { return std::nan(""); }, {0.0, 1.0}, q),
                    IntegrationError);
}

TEST_CASE("tube integral is invariant under rotations about u_c")
{
    const Event xc{0.2, 0.1, -0.3, 0.0};
    auto h = [&](const FourVector& y) {
        return std::exp(-0.1 * (y[0] * y[0] + y[1] * y[1] + 2 * y[2] * y[2] + 3 * y[3] * y[3])) + y[1] * y[2];
    };
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 5; ++trial)
    {
        // random rotation in the rest frame, as a product of boosts with no net velocity change
        const AbsoluteVelocity v1 = random_velocity(rng), v2 = random_velocity(rng);
        const AbsoluteVelocity rest = AbsoluteVelocity::rest();
        const AbsoluteVelocity mid(boost(rest, v1) * v2.vector());
        const LinMap4 R = boost(mid, rest) * boost(v1, mid) * boost(rest, v1);
        CHECK(max_diff(R * rest.vector(), rest.vector()) < 1e-12);

        const FourVector nc = FourVector::basis(1), a = FourVector::basis(2), b = FourVector::basis(3);
        const ShellConfig s1(UniformWorldline(xc, rest, nc, 0.9), 0.25, 1.0);
        const ShellConfig s2(UniformWorldline(xc, rest, R * nc, 0.9), 0.25, 1.0);
        const SphereQuadrature q1 = sphere_quadrature(rest, nc, a, b, 6, 12);
        const SphereQuadrature q2 = sphere_quadrature(rest, R * nc, R * a, R * b, 6, 12);
        const LinMap4 Rinv = adjoint(R);
        const double i1 = tube_integral(s1, [&](const TubePoint& p) { return h(p.position - xc); }, {-1.0, 1.5}, q1);
        const double i2 =
            tube_integral(s2, [&](const TubePoint& p) { return h(Rinv * (p.position - xc)); }, {-1.0, 1.5}, q2);
        CHECK(i1 == doctest::Approx(i2).epsilon(1e-10));
    }
}

TEST_CASE("inside tube")
{
    const ShellConfig shell = make_shell(0.2, 1.0);
    const UniformWorldline& c = shell.center();
    for (double s : {-2.0, 0.0, 1.0})
    {
        const LinMap4 L = c.center_boost(s);
        CHECK(inside_tube(shell, c.position(s) + 0.1 * (L * FourVector{0, 0, 1, 0})));
        CHECK(inside_tube(shell, c.position(s) + 0.199 * (L * c.n())));
        CHECK_FALSE(inside_tube(shell, c.position(s) + 0.21 * (L * FourVector{0, 0, 0, 1})));
    }
    // beyond the Rindler horizon
    CHECK_FALSE(inside_tube(shell, c.origin() + FourVector{0.0, -2.0, 0.0, 0.0}));
    CHECK_THROWS_AS(make_shell(1.0, 1.0), WedgeViolation);
    CHECK_THROWS_AS(make_shell(-0.1, 0.0), PreconditionError);
    CHECK(ShellConfig::with_charge(make_shell(0.5, 0.0).center(), 0.5, 2.0).charge() == doctest::Approx(2.0));
}
