#pragma once

#include "worldtube/spacetime.hpp"

namespace worldtube {

/**
sinh(a s) / a and (cosh(a s) - 1) / a, continuous through a = 0. For
|a s| < 1e-4 a short series is used.
*/
double sinh_over_a(double a, double s);
double cosh_m1_over_a(double a, double s);

/**
Uniformly accelerated worldline

    r(s) = x_c + u_c sinh(a s)/a + n_c (cosh(a s) - 1)/a

parametrized by proper time s. An acceleration of zero is inertial
motion, r(s) = x_c + u_c s.
*/
class UniformWorldline
{
public:
    /** Throws PreconditionError unless n.n = 1, u.n = 0 and a >= 0. */
    UniformWorldline(const Event& origin, const AbsoluteVelocity& u, const FourVector& n, double accel);

    /** Inertial worldline; an acceleration direction orthogonal to u is chosen for you. */
    static UniformWorldline inertial(const Event& origin, const AbsoluteVelocity& u);

    Event position(double s) const;
    FourVector velocity(double s) const;
    FourVector acceleration(double s) const;

    /** L(s), the rotation-free boost from u_c to velocity(s). */
    LinMap4 center_boost(double s) const;

    /** dL/ds, differentiated from the boost formula. */
    LinMap4 center_boost_dot(double s) const;

    const Event& origin() const { return x_c; }
    const AbsoluteVelocity& u() const { return u_c; }
    const FourVector& n() const { return n_c; }
    double accel() const { return a_c; }
    bool is_inertial() const { return a_c == 0.0; }

private:
    Event x_c;
    AbsoluteVelocity u_c;
    FourVector n_c;
    double a_c;
};

/**
A point of the rigid sphere of radius eps around a UniformWorldline, in
direction n of the unit sphere S_c(1) = {n : u_c.n = 0, n.n = 1}. All
times are the center proper time s; the constituent's own proper time is
(1 + eps a_c (n_c.n)) s.
*/
class ShellConstituent
{
public:
    /** Throws WedgeViolation if eps * a_c >= 1, PreconditionError if n is not in S_c(1). */
    ShellConstituent(const UniformWorldline& parent, double eps, const FourVector& n);

    const UniformWorldline& parent() const { return center; }
    double eps() const { return radius; }
    const FourVector& direction() const { return dir; }

    /** 1 + eps a_c (n_c.n): ratio of own proper time to center time. */
    double time_dilation() const { return gamma; }

    /** a_c / (1 + eps a_c (n_c.n)) */
    double own_acceleration() const;

    double own_proper_time(double s) const { return gamma * s; }

    /** r_c(s) + eps L(s).n */
    Event position(double s) const;

    /** z(s, n) = dr_c/ds + eps dL/ds . n, the tangent in center time. */
    FourVector z(double s) const;

    /** Absolute velocity z / (1 + eps a_c n_c.n). */
    FourVector velocity(double s) const { return z(s) / gamma; }

    /**
    The same point set as an ordinary uniformly accelerated worldline in
    its own proper time: x_c + eps n, u_c, n_c, own_acceleration().
    */
    UniformWorldline as_worldline() const;

private:
    UniformWorldline center;
    double radius;
    FourVector dir;
    double gamma;
};

/** Throws WedgeViolation unless eps * a < 1. */
void require_inside_wedge(double eps, double a);

} // namespace worldtube
