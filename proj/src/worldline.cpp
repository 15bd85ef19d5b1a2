#include "worldtube/worldline.hpp"
#include "worldtube/errors.hpp"

#include <sstream>

namespace worldtube {

namespace {

constexpr double series_threshold = 1e-4;

void require_unit_sphere(const AbsoluteVelocity& u, const FourVector& n, const char* what)
{
    if (std::abs(lorentz_product(n, n) - 1.0) > 1e-12 * std::max(1.0, max_abs(n) * max_abs(n))
        || std::abs(lorentz_product(u, n)) > 1e-12 * std::max(1.0, u[0] * max_abs(n)))
    {
        std::ostringstream msg;
        msg << what << ": direction " << n << " is not a unit vector orthogonal to " << u.vector();
        throw PreconditionError(msg.str());
    }
}

} // namespace

double sinh_over_a(double a, double s)
{
    const double x = a * s;
    if (a == 0.0) return s;
    if (std::abs(x) < series_threshold)
    {
        const double x2 = x * x;
        return s * (1.0 + x2 / 6.0 * (1.0 + x2 / 20.0));
    }
    return std::sinh(x) / a;
}

double cosh_m1_over_a(double a, double s)
{
    const double x = a * s;
    if (a == 0.0) return 0.0;
    if (std::abs(x) < series_threshold)
    {
        const double x2 = x * x;
        return 0.5 * x * s * (1.0 + x2 / 12.0 * (1.0 + x2 / 30.0));
    }
    const double h = std::sinh(0.5 * x);
    return 2.0 * h * h / a;
}

void require_inside_wedge(double eps, double a)
{
    if (!(eps * a < 1.0))
    {
        std::ostringstream msg;
        msg << "wedge violation: eps * a_c = " << eps * a << " must be < 1";
        throw WedgeViolation(msg.str());
    }
}

UniformWorldline::UniformWorldline(const Event& origin, const AbsoluteVelocity& u, const FourVector& n, double accel)
    : x_c(origin), u_c(u), n_c(n), a_c(accel)
{
    require_unit_sphere(u, n, "UniformWorldline");
    if (!(accel >= 0.0) || !std::isfinite(accel))
        throw PreconditionError("UniformWorldline: acceleration must be finite and >= 0");
}

UniformWorldline UniformWorldline::inertial(const Event& origin, const AbsoluteVelocity& u)
{
    return UniformWorldline(origin, u, spatial_frame(u)[0], 0.0);
}

Event UniformWorldline::position(double s) const
{
    return x_c + sinh_over_a(a_c, s) * u_c.vector() + cosh_m1_over_a(a_c, s) * n_c;
}

FourVector UniformWorldline::velocity(double s) const
{
    const double x = a_c * s;
    return std::cosh(x) * u_c.vector() + std::sinh(x) * n_c;
}

FourVector UniformWorldline::acceleration(double s) const
{
    const double x = a_c * s;
    return a_c * (std::sinh(x) * u_c.vector() + std::cosh(x) * n_c);
}

LinMap4 UniformWorldline::center_boost(double s) const
{
    return boost(u_c, AbsoluteVelocity(velocity(s)));
}

LinMap4 UniformWorldline::center_boost_dot(double s) const
{
    // L = 1 + w (x) w / d - 2 v (x) u  with  v = r', w = v + u, d = 1 - v.u = 1 + cosh(a s)
    const FourVector v = velocity(s);
    const FourVector dv = acceleration(s);
    const FourVector w = v + u_c.vector();
    const double d = 1.0 - lorentz_product(v, u_c);
    const double dd = -lorentz_product(dv, u_c);

    LinMap4 D = (1.0 / d) * (tensor(dv, w) + tensor(w, dv));
    D -= (dd / (d * d)) * tensor(w, w);
    D -= 2.0 * tensor(dv, u_c);
    return D;
}

ShellConstituent::ShellConstituent(const UniformWorldline& parent, double eps, const FourVector& n)
    : center(parent), radius(eps), dir(n)
{
    if (!(eps >= 0.0) || !std::isfinite(eps)) throw PreconditionError("ShellConstituent: eps must be finite and >= 0");
    require_inside_wedge(eps, parent.accel());
    require_unit_sphere(parent.u(), n, "ShellConstituent");
    gamma = 1.0 + eps * parent.accel() * lorentz_product(parent.n(), n);
}

double ShellConstituent::own_acceleration() const
{
    return center.accel() / gamma;
}

Event ShellConstituent::position(double s) const
{
    return center.position(s) + radius * (center.center_boost(s) * dir);
}

FourVector ShellConstituent::z(double s) const
{
    return center.velocity(s) + radius * (center.center_boost_dot(s) * dir);
}

UniformWorldline ShellConstituent::as_worldline() const
{
    return UniformWorldline(center.origin() + radius * dir, center.u(), center.n(), own_acceleration());
}

} // namespace worldtube
