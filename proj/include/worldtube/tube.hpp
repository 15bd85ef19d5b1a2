#pragma once

#include "worldtube/errors.hpp"
#include "worldtube/quadrature.hpp"
#include "worldtube/spacetime.hpp"
#include "worldtube/worldline.hpp"

#include <utility>
#include <vector>

namespace worldtube {

/**
A rigid spherical shell of radius eps carried by a uniformly accelerated
center, with uniform surface charge density sigma. Q = 4 pi eps^2 sigma.
*/
class ShellConfig
{
public:
    /** Throws WedgeViolation if eps * a_c >= 1, PreconditionError for eps <= 0 or non-finite sigma. */
    ShellConfig(const UniformWorldline& center, double eps, double sigma);

    static ShellConfig with_charge(const UniformWorldline& center, double eps, double charge);

    const UniformWorldline& center() const { return line; }
    double eps() const { return radius; }
    double sigma() const { return density; }
    double charge() const;

    ShellConstituent constituent(const FourVector& n) const { return {line, radius, n}; }

private:
    UniformWorldline line;
    double radius;
    double density;
};

/**
Product rule on S_c(1): Gauss-Legendre in cos(theta), theta measured from
n_c, times a uniform rule in the azimuth of the (a, b) plane.
*/
struct SphereQuadrature
{
    std::vector<FourVector> nodes;
    std::vector<double> weights;
    int n_theta = 0;
    int n_phi = 0;

    std::size_t size() const { return nodes.size(); }
};

/** Requires n_theta >= 2, n_phi >= 4. The (a, b) axes come from complete_tetrad. */
SphereQuadrature sphere_quadrature(const AbsoluteVelocity& u, const FourVector& n_c, int n_theta, int n_phi);

/** Same, with the azimuthal axes supplied explicitly (a, b orthonormal, orthogonal to u and n_c). */
SphereQuadrature sphere_quadrature(const AbsoluteVelocity& u, const FourVector& n_c, const FourVector& a,
                                   const FourVector& b, int n_theta, int n_phi);

/** Unit vector n_c cos t + a sin t cos p + b sin t sin p of S_c(1). */
FourVector sphere_point(const FourVector& n_c, const FourVector& a, const FourVector& b, double theta, double phi);

/** p(s, n) = r_c(s) + eps L(s).n */
Event tube_param(const ShellConfig& shell, double s, const FourVector& n);

/**
Determinant of the Gram matrix (Dp)*.Dp built from the columns z(s, n)
and eps L(s).t_k for an orthonormal basis {t_1, t_2} of the tangent plane
of S_c(1) at n.
*/
double gram_determinant(const ShellConfig& shell, double s, const FourVector& n);

/** eps^2 (1 + eps a_c (n_c.n)) */
double measure_density(const ShellConfig& shell, double s, const FourVector& n);

/** Absolute velocity of the shell point p(s, n). */
FourVector velocity_field(const ShellConfig& shell, double s, const FourVector& n);

/**
Whether x lies inside or on the tube: at the center instant simultaneous
with x its spatial distance from r_c is <= eps. Points outside the Rindler
wedge of an accelerated center are never inside.
*/
bool inside_tube(const ShellConfig& shell, const Event& x);

inline bool all_finite(double x) { return std::isfinite(x); }
inline bool all_finite(const FourVector& v)
{
    return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]) && std::isfinite(v[3]);
}

/** Quadrature point on the tube handed to tube_integral integrands. */
struct TubePoint
{
    double s;
    FourVector n;
    Event position;
    FourVector velocity;
};

/** Composite Gauss-Legendre in s used by tube_integral. */
struct TubeRule
{
    int s_panels = 8;
    int s_order = 16;
};

/**
Integral of f over the tube measure restricted to center times in
s_range, as eps^2 int_s int_n f (1 + eps a_c n_c.n) dn ds.
*/
template <class F>
auto tube_integral(const ShellConfig& shell, F&& f, std::pair<double, double> s_range,
                   const SphereQuadrature& quad, TubeRule rule = {})
{
    using Value = std::decay_t<decltype(f(std::declval<const TubePoint&>()))>;
    const Rule1D srule = composite_gauss_legendre(s_range.first, s_range.second, rule.s_panels, rule.s_order);
    std::vector<Value> terms(srule.size() * quad.size());

    parallel_for(srule.size(), [&](std::size_t i) {
        const double s = srule.nodes[i];
        for (std::size_t j = 0; j < quad.size(); ++j)
        {
            const FourVector& n = quad.nodes[j];
            const TubePoint p{s, n, tube_param(shell, s, n), velocity_field(shell, s, n)};
            Value v = f(p);
            v *= srule.weights[i] * quad.weights[j] * measure_density(shell, s, n);
            terms[i * quad.size() + j] = v;
        }
    });
    Value total = pairwise_sum(terms);
    if (!all_finite(total)) throw IntegrationError("tube_integral: non-finite integrand value");
    return total;
}

} // namespace worldtube
