#pragma once

#include "worldtube/spacetime.hpp"

#include <cmath>
#include <random>

namespace testing {

using namespace worldtube;

inline double max_diff(const FourVector& a, const FourVector& b)
{
    return max_abs(a - b);
}

inline double max_diff(const LinMap4& a, const LinMap4& b)
{
    return (a - b).max_abs();
}

/** Standard boost along x with rapidity alpha, written out by hand. */
inline LinMap4 x_boost(double alpha)
{
    LinMap4 L = LinMap4::identity();
    L(0, 0) = L(1, 1) = std::cosh(alpha);
    L(0, 1) = L(1, 0) = std::sinh(alpha);
    return L;
}

inline FourVector random_vector(std::mt19937_64& rng, double scale = 1.0)
{
    std::uniform_real_distribution<double> d(-scale, scale);
    return {d(rng), d(rng), d(rng), d(rng)};
}

} // namespace testing
