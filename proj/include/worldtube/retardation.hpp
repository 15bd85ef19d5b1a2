#pragma once

#include "worldtube/spacetime.hpp"
#include "worldtube/worldline.hpp"

#include <optional>

namespace worldtube {

/**
The past light-cone intersection of a worldline with a field point x.
k = x - r(s_ret) is lightlike and future-pointing; rho = -k.v(s_ret) > 0
where v is the proper (absolute) velocity at s_ret.
*/
struct RetardedSolution
{
    double s_ret = 0.0;
    FourVector k;
    double rho = 0.0;
};

/** Starting point and scale for the bracket search. */
struct RetardationHint
{
    double s = 0.0;
    double width = 1.0;
};

/**
Retarded proper time on a uniformly accelerated or inertial worldline.

The squared separation g(s) = (x - r(s)).(x - r(s)) is evaluated in
light-cone components relative to (u_c, n_c), which keeps it free of
cancellation at large |a s|. A bracket [lo, hi] is grown geometrically
from the hint (default: the inertial estimate through x_c), with x - r(lo)
future timelike and hi lying between the retarded and advanced roots;
safeguarded Newton on g then converges inside it.

Throws HorizonError if x is outside the causal future of the worldline
(the downward search exhausts the admissible range) and OnWorldlineError
if x is on the worldline.
*/
RetardedSolution solve_retarded(const UniformWorldline& w, const Event& x,
                                std::optional<RetardationHint> hint = std::nullopt);

/**
Retarded solution on a shell constituent. s_ret is returned in center
proper time; rho uses the constituent's absolute velocity.
*/
RetardedSolution solve_retarded(const ShellConstituent& c, const Event& x,
                                std::optional<RetardationHint> hint = std::nullopt);

/** Largest |s| explored by the bracket search. */
double admissible_proper_time(double accel);

} // namespace worldtube
