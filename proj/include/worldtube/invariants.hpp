#pragma once

#include "worldtube/compare.hpp"
#include "worldtube/config.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace worldtube {

/** Outcome of one invariant check; `criterion` is 0 for checks outside the numbered list. */
struct CheckResult
{
    CheckResult() = default;
    explicit CheckResult(std::string name, int criterion = 0) : name(std::move(name)), criterion(criterion) {}

    std::string name;
    int criterion = 0;
    bool passed = false;
    double seconds = 0.0;
    nlohmann::json metrics = nlohmann::json::object();
    std::string message;
};

/** Random absolute velocity: rapidity uniform in [0, 2], direction uniform on the sphere. */
template <class Rng>
AbsoluteVelocity random_velocity(Rng& rng, double max_rapidity = 2.0)
{
    std::uniform_real_distribution<double> rapidity(0.0, max_rapidity);
    std::normal_distribution<double> normal;
    double d[3];
    double n2 = 0.0;
    while (!(n2 > 1e-12))
    {
        n2 = 0.0;
        for (double& x : d)
        {
            x = normal(rng);
            n2 += x * x;
        }
    }
    return AbsoluteVelocity::from_rapidity(rapidity(rng), d[0], d[1], d[2]);
}

/** ||L* L - 1||, ||L u - u2|| over random velocity pairs. */
CheckResult check_boost_algebra(int cases, std::uint64_t seed);

/** Adjoint identity, projection idempotence/self-adjointness, scalar invariance under a random Lorentz map. */
CheckResult check_spacetime_identities(int cases, std::uint64_t seed);

/** dL/ds L* = a (u_c (x) n_c - n_c (x) u_c) against fourth-order differences of L, s in [-3, 3]. */
CheckResult check_boost_derivative();

/** Normalization of velocity/acceleration, z identities, a -> 0 continuity. */
CheckResult check_worldline_identities(int cases, std::uint64_t seed);

/** sqrt|gram_determinant| = eps^2 (1 + eps a (n_c.n)) on the 3 x 3 x 8 x 26 grid. */
CheckResult check_measure();

/** Sphere quadrature moments against (4 pi / 3)(1 + u (x) u). */
CheckResult check_moments(int n_theta = 8, int n_phi = 16);

/** Residuals, rho > 0, inertial closed form, horizon detection, retarded causality. */
CheckResult check_retardation(int cases, std::uint64_t seed);

/** Inertial shell equals the point charge at exterior points, rapidities {0, 1, 2}. */
CheckResult check_inertial_equivalence(int points, std::uint64_t seed, int n_theta = 16, int n_phi = 32);

/** Analytic test-function derivatives against central differences. */
CheckResult check_test_function_derivatives(int points, std::uint64_t seed);

/** |Delta| > significance x error at eps = eps_factor d0 for every test function (at least three). */
CheckResult check_accelerated_inequality(const UniformWorldline& center, const std::vector<BumpTestFunction>& tests,
                                         const VerdictOptions& options, double eps_factor = 0.05);

/** Fixed-charge sweep: slope and smallest-eps ratio against the prediction. */
CheckResult check_leading_order(const UniformWorldline& center, const std::vector<BumpTestFunction>& tests,
                                const VerdictOptions& options, const std::vector<double>& eps_factors,
                                const ToleranceParams& tol);

/** Discrete d'Alembertian of the point potential of a hyperbolic worldline. */
CheckResult check_wave_equation(int points, std::uint64_t seed);

/** The prediction vanishes for inertial motion. */
CheckResult check_inertial_prediction(const UniformWorldline& center, const std::vector<BumpTestFunction>& tests,
                                      const ConeRule& rule);

/** Direct (s, light cone) pairing against the 4D pairing, point and shell currents. */
CheckResult check_route_equivalence(int functions, std::uint64_t seed);

/** Ratios and verdicts do not depend on the kernel constant. */
CheckResult check_kernel_independence(const UniformWorldline& center, const BumpTestFunction& phi);

/** Everything `verify` runs, sized by the config. */
std::vector<CheckResult> run_invariant_suites(const ExperimentConfig& config);

nlohmann::json to_json(const CheckResult& r);

} // namespace worldtube
