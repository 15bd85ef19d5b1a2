#include "helpers.hpp"
#include "worldtube/errors.hpp"
#include "worldtube/invariants.hpp"

#include <Eigen/Dense>
#include <doctest.h>

using namespace worldtube;
using testing::max_diff;

TEST_CASE("lorentz product")
{
    const FourVector e0 = FourVector::basis(0);
    CHECK(lorentz_product(e0, e0) == -1.0);
    for (double alpha : {0.0, 0.3, 1.7, 4.0})
    {
        const FourVector u{std::cosh(alpha), std::sinh(alpha), 0.0, 0.0};
        CHECK(lorentz_product(u, u) == doctest::Approx(-1.0).epsilon(1e-12));
    }
    const FourVector null{1.0, 1.0, 0.0, 0.0};
    CHECK(lorentz_product(null, null) == 0.0);

    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i)
    {
        const FourVector a = testing::random_vector(rng), b = testing::random_vector(rng), c = testing::random_vector(rng);
        CHECK(lorentz_product(a, b) == doctest::Approx(lorentz_product(b, a)));
        CHECK(lorentz_product(2.0 * a + c, b) ==
              doctest::Approx(2.0 * lorentz_product(a, b) + lorentz_product(c, b)).epsilon(1e-12));
    }
}

TEST_CASE("tensor product uses the Lorentz product")
{
    const AbsoluteVelocity u = AbsoluteVelocity::from_rapidity(0.8, 1.0, 2.0, -1.0);
    // (u (x) u).u = u (u.u) = -u
    CHECK(max_diff(tensor(u, u) * u.vector(), -u.vector()) < 1e-12);

    const FourVector a{0.3, 1.0, -2.0, 0.5};
    const FourVector b{0.0, 1.0, 0.0, 0.0};
    const FourVector x{5.0, 0.0, 2.0, -1.0};
    CHECK(max_abs(tensor(a, b) * x) == 0.0);

    std::mt19937_64 rng(4);
    for (int i = 0; i < 100; ++i)
    {
        const FourVector p = testing::random_vector(rng), q = testing::random_vector(rng);
        const FourVector y = testing::random_vector(rng), z = testing::random_vector(rng);
        CHECK(lorentz_product(y, tensor(p, q) * z) ==
              doctest::Approx(lorentz_product(y, p) * lorentz_product(q, z)).epsilon(1e-12));
    }
}

TEST_CASE("boost")
{
    const AbsoluteVelocity rest = AbsoluteVelocity::rest();
    const AbsoluteVelocity u = AbsoluteVelocity::from_rapidity(1.3, 0.2, -0.7, 0.4);
    CHECK(max_diff(boost(u, u), LinMap4::identity()) < 1e-12);

    const AbsoluteVelocity u2 = AbsoluteVelocity::from_rapidity(0.6, -1.0, 0.1, 0.9);
    CHECK(max_diff(boost(u, u2) * u.vector(), u2.vector()) < 1e-12);

    const AbsoluteVelocity x1(FourVector{std::cosh(1.0), std::sinh(1.0), 0.0, 0.0});
    CHECK(max_diff(boost(rest, x1), testing::x_boost(1.0)) < 1e-14);

    // rotation free: vectors orthogonal to both velocities are untouched
    const FourVector perp{0.0, 0.0, 0.0, 1.0};
    CHECK(max_diff(boost(rest, x1) * perp, perp) < 1e-15);

    // composition of collinear boosts adds rapidities
    const AbsoluteVelocity x2(FourVector{std::cosh(2.5), std::sinh(2.5), 0.0, 0.0});
    CHECK(max_diff(boost(x1, x2) * boost(rest, x1), testing::x_boost(2.5)) < 1e-12);
}

TEST_CASE("boost covariance under Lorentz maps")
{
    std::mt19937_64 rng(9);
    for (int i = 0; i < 50; ++i)
    {
        const LinMap4 lam = boost(random_velocity(rng), random_velocity(rng)) *
                            boost(random_velocity(rng, 1.0), random_velocity(rng, 1.0));
        const AbsoluteVelocity u = random_velocity(rng, 1.0);
        const AbsoluteVelocity u2 = random_velocity(rng, 1.0);
        const AbsoluteVelocity lu(lam * u.vector());
        const AbsoluteVelocity lu2(lam * u2.vector());
        const LinMap4 lhs = boost(lu, lu2) * lam;
        const LinMap4 rhs = lam * boost(u, u2);
        CHECK(max_diff(lhs, rhs) < 1e-10 * std::max(1.0, lhs.max_abs()));

        const FourVector a = testing::random_vector(rng), b = testing::random_vector(rng);
        const double scale = std::max(1.0, max_abs(lam * a) * max_abs(lam * b));
        CHECK(std::abs(lorentz_product(lam * a, lam * b) - lorentz_product(a, b)) < 1e-12 * scale);
    }
}

TEST_CASE("adjoint")
{
    CHECK(max_diff(adjoint(LinMap4::identity()), LinMap4::identity()) == 0.0);
    const AbsoluteVelocity u = AbsoluteVelocity::from_rapidity(1.1, 0.0, 1.0, 1.0);
    const AbsoluteVelocity u2 = AbsoluteVelocity::from_rapidity(0.4, 1.0, 0.0, 0.0);
    const LinMap4 L = boost(u, u2);
    CHECK(max_diff(adjoint(L) * L, LinMap4::identity()) < 1e-12);
    CHECK(max_diff(L * adjoint(L), LinMap4::identity()) < 1e-12);

    const FourVector a{1.0, 2.0, -0.5, 0.3}, b{-0.2, 0.0, 1.5, 2.0};
    CHECK(max_diff(adjoint(tensor(a, b)), tensor(b, a)) < 1e-15);

    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i)
    {
        LinMap4 M;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) M(r, c) = std::uniform_real_distribution<double>(-1, 1)(rng);
        const FourVector x = testing::random_vector(rng), y = testing::random_vector(rng);
        CHECK(std::abs(lorentz_product(adjoint(M) * x, y) - lorentz_product(x, M * y)) < 1e-12);
    }
}

TEST_CASE("projections")
{
    const AbsoluteVelocity u = AbsoluteVelocity::from_rapidity(0.9, 1.0, -1.0, 0.5);
    const auto axes = spatial_frame(u);
    const LinMap4 P = spatial_projection(u);
    CHECK(max_abs(P * u.vector()) < 1e-12);
    CHECK(max_diff(P * axes[1], axes[1]) < 1e-12);
    CHECK(max_diff(P * P, P) < 1e-12);
    CHECK(max_diff(adjoint(P), P) < 1e-12);

    const FourVector n = axes[0];
    const LinMap4 Q = plane_projection(u, n);
    CHECK(max_abs(Q * u.vector()) < 1e-12);
    CHECK(max_abs(Q * n) < 1e-12);
    CHECK(max_diff(Q * axes[2], axes[2]) < 1e-12);
    CHECK(max_diff(Q * Q, Q) < 1e-12);
    CHECK(max_diff(adjoint(Q), Q) < 1e-12);

    Eigen::Matrix4d m;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m(r, c) = Q(r, c);
    const Eigen::JacobiSVD<Eigen::Matrix4d> svd(m);
    const auto sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < 4; ++i)
        if (sv(i) > 1e-10 * sv(0)) ++rank;
    CHECK(rank == 2);

    CHECK_THROWS_AS(plane_projection(u, FourVector{0.0, 1.0, 0.0, 0.0}), PreconditionError);
    CHECK_THROWS_AS(plane_projection(u, 2.0 * n), PreconditionError);
}

TEST_CASE("absolute velocities are validated, not renormalized")
{
    CHECK_NOTHROW(AbsoluteVelocity(FourVector{1.0, 0.0, 0.0, 0.0}));
    CHECK_THROWS_AS(AbsoluteVelocity(FourVector{1.0, 0.1, 0.0, 0.0}), PreconditionError);
    CHECK_THROWS_AS(AbsoluteVelocity(FourVector{-1.0, 0.0, 0.0, 0.0}), PreconditionError);
    CHECK_THROWS_AS(AbsoluteVelocity(FourVector{1.0, 1.0, 0.0, 0.0}), PreconditionError);
    CHECK(is_absolute_velocity(AbsoluteVelocity::from_rapidity(2.0, 0.0, 0.0, 1.0)));
}

TEST_CASE("complete tetrad is orthonormal")
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i)
    {
        const AbsoluteVelocity u = random_velocity(rng);
        const FourVector n = spatial_frame(u)[i % 3];
        const auto [a, b] = complete_tetrad(u, n);
        CHECK(std::abs(lorentz_product(a, a) - 1.0) < 1e-12);
        CHECK(std::abs(lorentz_product(b, b) - 1.0) < 1e-12);
        CHECK(std::abs(lorentz_product(a, b)) < 1e-12);
        CHECK(std::abs(lorentz_product(a, u)) < 1e-12);
        CHECK(std::abs(lorentz_product(b, n)) < 1e-12);
    }
}

TEST_CASE("boost algebra suite")
{
    const CheckResult r = check_boost_algebra(1000, 1);
    CHECK(r.passed);
    CHECK(check_spacetime_identities(500, 2).passed);
}
