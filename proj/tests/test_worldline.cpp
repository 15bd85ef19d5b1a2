#include "helpers.hpp"
#include "worldtube/errors.hpp"
#include "worldtube/invariants.hpp"
#include "worldtube/worldline.hpp"

#include <doctest.h>

using namespace worldtube;
using testing::max_diff;

namespace {

const Event xc{0.5, -1.0, 2.0, 0.25};

UniformWorldline standard(double a)
{
    return UniformWorldline(xc, AbsoluteVelocity::rest(), FourVector::basis(1), a);
}

} // namespace

TEST_CASE("position")
{
    const UniformWorldline w = standard(1.0);
    CHECK(max_diff(w.position(0.0) - xc, FourVector{}) == 0.0);
    CHECK(max_diff(w.position(1.0) - xc, FourVector{std::sinh(1.0), std::cosh(1.0) - 1.0, 0.0, 0.0}) < 1e-15);

    const UniformWorldline flat = standard(0.0);
    CHECK(max_diff(flat.position(2.0) - xc, FourVector{2.0, 0.0, 0.0, 0.0}) == 0.0);
    CHECK(flat.is_inertial());
}

TEST_CASE("velocity and acceleration")
{
    const AbsoluteVelocity u = AbsoluteVelocity::from_rapidity(0.7, 0.0, 1.0, 1.0);
    const FourVector n = spatial_frame(u)[0];
    const UniformWorldline w(xc, u, n, 1.5);
    CHECK(max_diff(w.velocity(0.0), u.vector()) < 1e-15);
    CHECK(max_diff(w.acceleration(0.0), 1.5 * n) < 1e-15);

    for (double s : {-2.0, -0.3, 0.0, 0.9, 2.5})
    {
        const FourVector v = w.velocity(s);
        const FourVector a = w.acceleration(s);
        CHECK(std::abs(lorentz_product(v, v) + 1.0) < 1e-12 * max_abs(v) * max_abs(v));
        CHECK(std::abs(lorentz_product(a, a) - 2.25) < 1e-12 * max_abs(a) * max_abs(a));
        CHECK(std::abs(lorentz_product(v, a)) < 1e-12 * max_abs(v) * max_abs(a));
        CHECK(max_diff(v, std::cosh(1.5 * s) * u.vector() + std::sinh(1.5 * s) * n) < 1e-12 * max_abs(v));
    }

    // central differences of the position converge to the velocity at second order
    const double s = 0.8;
    double previous = 0.0;
    for (double h : {1e-2, 5e-3, 2.5e-3})
    {
        const FourVector fd = (w.position(s + h) - w.position(s - h)) / (2 * h);
        const double err = max_diff(fd, w.velocity(s));
        if (previous > 0.0) CHECK(previous / err == doctest::Approx(4.0).epsilon(0.01));
        previous = err;
    }
}

TEST_CASE("constructor preconditions")
{
    const AbsoluteVelocity u = AbsoluteVelocity::rest();
    CHECK_THROWS_AS(UniformWorldline(xc, u, FourVector{0.0, 2.0, 0.0, 0.0}, 1.0), PreconditionError);
    CHECK_THROWS_AS(UniformWorldline(xc, u, FourVector{1.0, 1.0, 0.0, 0.0}, 1.0), PreconditionError);
    CHECK_THROWS_AS(UniformWorldline(xc, u, FourVector::basis(1), -1.0), PreconditionError);
}

TEST_CASE("center boost closed forms")
{
    const AbsoluteVelocity u = AbsoluteVelocity::from_rapidity(0.5, 1.0, 1.0, 0.0);
    const auto axes = spatial_frame(u);
    const FourVector nc = axes[2];
    const double a = 0.8;
    const UniformWorldline w(xc, u, nc, a);

    CHECK(max_diff(w.center_boost(0.0), LinMap4::identity()) < 1e-15);
    const FourVector n = (1.0 / std::sqrt(2.0)) * (axes[0] + axes[2]);
    const double nn = lorentz_product(nc, n);
    CHECK(max_diff(w.center_boost_dot(0.0) * n, nn * a * u.vector()) < 1e-14);

    for (double s : {-3.0, -1.0, 0.4, 2.0, 3.0})
    {
        const double ch = std::cosh(a * s), sh = std::sinh(a * s);
        const LinMap4 L = w.center_boost(s);
        const LinMap4 Ld = w.center_boost_dot(s);
        CHECK(max_diff(L * u.vector(), w.velocity(s)) < 1e-12 * ch);
        CHECK(max_diff(L * n, n + nn * (sh * u.vector() + (ch - 1.0) * nc)) < 1e-12 * ch);
        CHECK(max_diff(Ld * n, nn * a * (ch * u.vector() + sh * nc)) < 1e-12 * ch);
        const LinMap4 target = a * (tensor(u, nc) - tensor(nc, u));
        CHECK(max_diff(Ld * adjoint(L), target) < 1e-12 * ch * ch);

        const double h = 1e-3;
        LinMap4 fd = w.center_boost(s - 2 * h);
        fd -= 8.0 * w.center_boost(s - h);
        fd += 8.0 * w.center_boost(s + h);
        fd -= w.center_boost(s + 2 * h);
        fd *= 1.0 / (12 * h);
        CHECK(max_diff(fd, Ld) < 1e-8);
    }
}

TEST_CASE("boost derivative suite")
{
    const CheckResult r = check_boost_derivative();
    CHECK(r.passed);
    CHECK(r.metrics["max_fd_minus_closed_form"].get<double>() < 1e-8);
}

TEST_CASE("shell constituent")
{
    const UniformWorldline w = standard(1.0);
    const double eps = 0.1;

    SUBCASE("direction orthogonal to n_c keeps the acceleration")
    {
        const ShellConstituent c(w, eps, FourVector::basis(2));
        CHECK(c.own_acceleration() == doctest::Approx(1.0));
        CHECK(c.time_dilation() == doctest::Approx(1.0));
    }
    SUBCASE("inertial parent gives a rigid sphere")
    {
        const UniformWorldline flat = standard(0.0);
        const FourVector n{0.0, 0.6, 0.0, 0.8};
        const ShellConstituent c(flat, eps, n);
        for (double s : {-1.0, 0.0, 2.0}) CHECK(max_diff(c.position(s) - flat.position(s), eps * n) < 1e-15);
    }
    SUBCASE("range matches the constituent's own hyperbola")
    {
        for (const FourVector& n : {FourVector::basis(1), -1.0 * FourVector::basis(1), FourVector{0.0, 0.6, 0.8, 0.0}})
        {
            const ShellConstituent c(w, eps, n);
            const double g = 1.0 + eps * lorentz_product(w.n(), n);
            const double a2 = 1.0 / g;
            CHECK(c.own_acceleration() == doctest::Approx(a2).epsilon(1e-14));
            for (double s : {-2.0, -0.5, 0.0, 1.0, 2.5})
            {
                const double s2 = g * s;
                const Event expected = xc + eps * n + (std::sinh(a2 * s2) / a2) * FourVector::basis(0) +
                                       ((std::cosh(a2 * s2) - 1.0) / a2) * FourVector::basis(1);
                CHECK(max_diff(c.position(s) - expected, FourVector{}) < 1e-12 * std::cosh(s));
                CHECK(c.own_proper_time(s) == doctest::Approx(s2));
                const UniformWorldline own = c.as_worldline();
                CHECK(max_diff(own.position(s2) - c.position(s), FourVector{}) < 1e-12 * std::cosh(s));
            }
        }
    }
    SUBCASE("wedge and sphere preconditions")
    {
        CHECK_THROWS_AS(ShellConstituent(w, 1.0, FourVector::basis(1)), WedgeViolation);
        CHECK_THROWS_AS(ShellConstituent(w, 2.0, FourVector::basis(2)), WedgeViolation);
        CHECK_THROWS_AS(ShellConstituent(w, eps, FourVector{0.0, 1.0, 1.0, 0.0}), PreconditionError);
        CHECK_THROWS_AS(ShellConstituent(w, eps, FourVector{1.0, 0.0, 0.0, 0.0}), PreconditionError);
    }
}

TEST_CASE("z identities")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> S(-2.0, 2.0);
    for (int i = 0; i < 200; ++i)
    {
        const AbsoluteVelocity u = random_velocity(rng, 1.0);
        const auto axes = spatial_frame(u);
        const UniformWorldline w(xc, u, axes[i % 3], 1.2);
        const FourVector n = spatial_frame(u)[(i + 1) % 3];
        const FourVector m = (1.0 / std::sqrt(2.0)) * (n + w.n());
        const double eps = 0.3;
        const double s = S(rng);
        const ShellConstituent c(w, eps, m);
        const double g = 1.0 + eps * 1.2 * lorentz_product(w.n(), m);
        const FourVector z = c.z(s);
        const LinMap4 L = w.center_boost(s);
        const double scale = max_abs(z) * L.max_abs();
        CHECK(std::abs(lorentz_product(z, z) + g * g) < 1e-12 * scale * scale);
        CHECK(std::abs(lorentz_product(z, L * m)) < 1e-12 * scale);
        CHECK(std::abs(lorentz_product(z, L * u.vector()) + g) < 1e-12 * scale);
        CHECK(max_diff(z, g * c.velocity(s)) < 1e-12 * scale);
    }
    const UniformWorldline w = standard(1.0);
    CHECK(max_diff(ShellConstituent(w, 1e-300, FourVector::basis(3)).z(0.7), w.velocity(0.7)) < 1e-15);
}

TEST_CASE("acceleration to zero is continuous")
{
    const UniformWorldline tiny = standard(1e-8);
    const UniformWorldline flat = standard(0.0);
    for (double s : {-5.0, -1e-3, 0.0, 1e-5, 0.3, 5.0})
    {
        const double scale = std::max(1.0, max_abs(flat.position(s) - Event{}));
        CHECK(max_diff(tiny.position(s) - flat.position(s), FourVector{}) < 1e-7 * scale);
        CHECK(max_diff(tiny.velocity(s), flat.velocity(s)) < 1e-7);
        CHECK(max_diff(tiny.center_boost(s), flat.center_boost(s)) < 1e-7);
    }
    CHECK(sinh_over_a(1e-8, 2.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(cosh_m1_over_a(1e-8, 2.0) == doctest::Approx(2e-8).epsilon(1e-10));
    CHECK(check_worldline_identities(300, 5).passed);
}
