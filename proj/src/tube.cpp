#include "worldtube/tube.hpp"
#include "worldtube/errors.hpp"

#include <numbers>

namespace worldtube {

ShellConfig::ShellConfig(const UniformWorldline& center, double eps, double sigma)
    : line(center), radius(eps), density(sigma)
{
    if (!(eps > 0.0) || !std::isfinite(eps)) throw PreconditionError("ShellConfig: eps must be finite and > 0");
    if (!std::isfinite(sigma)) throw PreconditionError("ShellConfig: sigma must be finite");
    require_inside_wedge(eps, center.accel());
}

ShellConfig ShellConfig::with_charge(const UniformWorldline& center, double eps, double charge)
{
    return ShellConfig(center, eps, charge / (4.0 * std::numbers::pi * eps * eps));
}

double ShellConfig::charge() const
{
    return 4.0 * std::numbers::pi * radius * radius * density;
}

FourVector sphere_point(const FourVector& n_c, const FourVector& a, const FourVector& b, double theta, double phi)
{
    const double st = std::sin(theta);
    return std::cos(theta) * n_c + (st * std::cos(phi)) * a + (st * std::sin(phi)) * b;
}

SphereQuadrature sphere_quadrature(const AbsoluteVelocity& u, const FourVector& n_c, const FourVector& a,
                                   const FourVector& b, int n_theta, int n_phi)
{
    if (n_theta < 2 || n_phi < 4)
        throw PreconditionError("sphere_quadrature requires n_theta >= 2 and n_phi >= 4");

    const std::array<FourVector, 3> axes{n_c, a, b};
    for (int i = 0; i < 3; ++i)
    {
        const double scale = std::max(1.0, max_abs(axes[i]) * max_abs(axes[i]));
        if (std::abs(lorentz_product(axes[i], u)) > 1e-12 * scale * u[0]
            || std::abs(lorentz_product(axes[i], axes[i]) - 1.0) > 1e-12 * scale)
            throw PreconditionError("sphere_quadrature: axes must be unit vectors orthogonal to u");
        for (int j = 0; j < i; ++j)
            if (std::abs(lorentz_product(axes[i], axes[j])) > 1e-12 * scale)
                throw PreconditionError("sphere_quadrature: axes must be mutually orthogonal");
    }

    SphereQuadrature q;
    q.n_theta = n_theta;
    q.n_phi = n_phi;
    const Rule1D& mu = gauss_legendre(n_theta);
    const double dphi = 2.0 * std::numbers::pi / n_phi;
    for (std::size_t i = 0; i < mu.size(); ++i)
    {
        const double ct = mu.nodes[i];
        const double st = std::sqrt((1.0 - ct) * (1.0 + ct));
        for (int k = 0; k < n_phi; ++k)
        {
            const double phi = (k + 0.5) * dphi;
            q.nodes.push_back(ct * n_c + (st * std::cos(phi)) * a + (st * std::sin(phi)) * b);
            q.weights.push_back(mu.weights[i] * dphi);
        }
    }
    return q;
}

SphereQuadrature sphere_quadrature(const AbsoluteVelocity& u, const FourVector& n_c, int n_theta, int n_phi)
{
    const auto ab = complete_tetrad(u, n_c);
    return sphere_quadrature(u, n_c, ab[0], ab[1], n_theta, n_phi);
}

Event tube_param(const ShellConfig& shell, double s, const FourVector& n)
{
    return shell.constituent(n).position(s);
}

double gram_determinant(const ShellConfig& shell, double s, const FourVector& n)
{
    const UniformWorldline& c = shell.center();
    const ShellConstituent point = shell.constituent(n);
    const auto t = complete_tetrad(c.u(), n);
    const LinMap4 L = c.center_boost(s);

    const std::array<FourVector, 3> cols{point.z(s), shell.eps() * (L * t[0]), shell.eps() * (L * t[1])};
    double G[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) G[i][j] = lorentz_product(cols[i], cols[j]);

    return G[0][0] * (G[1][1] * G[2][2] - G[1][2] * G[2][1])
         - G[0][1] * (G[1][0] * G[2][2] - G[1][2] * G[2][0])
         + G[0][2] * (G[1][0] * G[2][1] - G[1][1] * G[2][0]);
}

double measure_density(const ShellConfig& shell, double, const FourVector& n)
{
    const double e = shell.eps();
    return e * e * (1.0 + e * shell.center().accel() * lorentz_product(shell.center().n(), n));
}

FourVector velocity_field(const ShellConfig& shell, double s, const FourVector& n)
{
    return shell.constituent(n).velocity(s);
}

bool inside_tube(const ShellConfig& shell, const Event& x)
{
    const UniformWorldline& c = shell.center();
    const FourVector y = x - c.origin();
    const double a = c.accel();
    const double yt = -lorentz_product(y, c.u());
    const double yn = lorentz_product(y, c.n());

    double s = 0.0;
    if (a == 0.0)
    {
        s = yt;
    }
    else
    {
        // Simultaneity hyperplanes all pass through the Rindler origin x_c - n_c / a.
        const double xt = yt;
        const double xn = yn + 1.0 / a;
        if (!(xn > std::abs(xt))) return false;
        s = std::atanh(xt / xn) / a;
    }
    const FourVector d = x - c.position(s);
    return lorentz_product(d, d) <= shell.eps() * shell.eps();
}

} // namespace worldtube
