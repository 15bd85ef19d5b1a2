#pragma once

#include "worldtube/retardation.hpp"
#include "worldtube/test_function.hpp"
#include "worldtube/tube.hpp"

#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace worldtube {

/** Kernel constant of the retarded potential: a static charge gives kappa q / d. */
inline constexpr double coulomb_kernel = 1.0 / (4.0 * std::numbers::pi);

/** kappa q v(s_ret) / rho at x. */
FourVector lw_point_potential(const UniformWorldline& w, double q, const Event& x, double kappa = coulomb_kernel);

/**
Retarded potential of a shell, superposed over its constituents at the
nodes of a sphere quadrature. The constituent worldlines are set up once,
so repeated evaluation is cheap.
*/
class ShellField
{
public:
    ShellField(const ShellConfig& shell, const SphereQuadrature& quad, double kappa = coulomb_kernel);

    /** kappa sigma eps^2 sum_i w_i z_i / (-k_i.z_i). Throws InteriorPointError inside the tube. */
    FourVector potential(const Event& x) const;

    /** potential(x) - lw_point_potential(center, q, x), sharing the center solve. */
    FourVector minus_point(const Event& x, double q) const;

    const ShellConfig& shell() const { return config; }
    double kernel() const { return kappa; }

private:
    FourVector sum_constituents(const Event& x, const RetardedSolution& center) const;

    ShellConfig config;
    double kappa;
    std::vector<UniformWorldline> own;
    std::vector<double> gamma;
    std::vector<double> weights;
};

/** One-shot shell potential; see ShellField. */
FourVector shell_potential(const ShellConfig& shell, const Event& x, const SphereQuadrature& quad,
                           double kappa = coulomb_kernel);

/** A vector-valued pairing (T | Phi) with an a posteriori error estimate (max-abs component). */
struct PairingResult
{
    FourVector value;
    double error = 0.0;
};

/** 4D integration over the support ball of a test function. */
struct FieldRule
{
    enum class Method { GaussLegendre, MonteCarlo };

    Method method = Method::GaussLegendre;
    /** Tensor Gauss-Legendre order per axis of the support bounding box. */
    int order = 24;
    std::size_t samples = std::size_t(1) << 20;
    std::uint64_t seed = 1;
};

using FieldFunction = std::function<FourVector(const Event&)>;

/**
int f(x) d^4x over the support ball of phi. Gauss-Legendre error is
estimated as the change when the order is halved; Monte Carlo error is
the standard error of the mean.
*/
PairingResult integrate_over_support(const BumpTestFunction& phi, const FieldFunction& f, const FieldRule& rule = {});

/** int A(x) Phi(x) d^4x */
PairingResult pair_potential_with_test(const FieldFunction& A, const BumpTestFunction& phi, const FieldRule& rule = {});

/**
Orders of the iterated (center time) x (light cone) integrals. The light
cone of each apex is parametrized as lambda (u + w), w a unit vector of the
test function's frame, with lambda d lambda d(cos theta) d phi measure and
the polar axis pointing at the support; only the rays that hit the support
are integrated.
*/
struct ConeRule
{
    int s_panels = 4;
    int s_order = 16;
    int mu_order = 24;
    int phi_order = 1;
    int lambda_order = 24;
};

/** kappa q int ds v(s) int dlambda_L Phi(r(s) + xi) for a point charge. */
PairingResult pair_current_direct(const UniformWorldline& w, double q, const BumpTestFunction& phi,
                                  const ConeRule& rule = {}, double kappa = coulomb_kernel);

/** The same iterated integral for the shell current, with a sphere quadrature in the middle. */
PairingResult pair_current_direct(const ShellConfig& shell, const SphereQuadrature& quad, const BumpTestFunction& phi,
                                  const ConeRule& rule = {}, double kappa = coulomb_kernel);

struct Prediction
{
    FourVector value;
    double error = 0.0;
    /** Every integrand value was a multiple of a futurelike unit vector. */
    bool integrand_timelike = true;
};

/**
Leading-order shell-minus-point difference

    kappa Q eps^2 / 3  int ds int dlambda_L
        ( a(s).DPhi[y] + 1/2 Tr((1 + v(s) (x) v(s)) . HPhi[y]) ) v(s),  y = r_c(s) + xi,

with v, a the center velocity and acceleration and HPhi the Hessian.
Requires the support of phi to clear the tube.
*/
Prediction predicted_difference(const ShellConfig& shell, const BumpTestFunction& phi,
                                ConeRule rule = {8, 16, 64, 4, 64}, double kappa = coulomb_kernel);

/** min_s |r_c(s) - x0|_E - R, the distance of the support from the center worldline. */
double support_distance(const UniformWorldline& w, const BumpTestFunction& phi);

/** Smallest sampled Euclidean distance between tube points and the support ball. */
double tube_clearance(const ShellConfig& shell, const BumpTestFunction& phi);

/** Throws PreconditionError unless tube_clearance >= 0.1 R. */
void require_exterior(const ShellConfig& shell, const BumpTestFunction& phi);

enum class Verdict { Equal, NotEqual };
enum class ChargeConvention { FixedCharge, FixedDensity };

std::string to_string(Verdict v);
std::string to_string(ChargeConvention c);

struct VerdictOptions
{
    ChargeConvention convention = ChargeConvention::FixedCharge;
    int n_theta = 8;
    int n_phi = 16;
    FieldRule field{};
    ConeRule cone{8, 16, 64, 4, 64};
    double kappa = coulomb_kernel;
    /** |Delta| below this fraction of |pairing of the point potential| counts as equal. */
    double equal_rel_tol = 1e-9;
    /** |Delta| must exceed this many error estimates to count as nonzero. */
    double significance = 10.0;
};

struct DifferenceRecord
{
    double eps = 0.0;
    double charge = 0.0;
    FourVector delta;
    double delta_error = 0.0;
    FourVector predicted;
    double predicted_error = 0.0;
    double point_norm = 0.0;
    /** <delta, predicted> / <predicted, predicted>, Euclidean components */
    double ratio = 0.0;
    /** |delta - predicted| / |predicted| */
    double mismatch = 0.0;
    Verdict verdict = Verdict::Equal;
    double seconds = 0.0;
};

struct TestFunctionVerdict
{
    std::vector<DifferenceRecord> records;
    double d0 = 0.0;
    /** least-squares slope of log|Delta| against log eps, in the run's convention and in the other */
    double slope = 0.0;
    double slope_other = 0.0;
    Verdict verdict = Verdict::Equal;
    bool integrand_timelike = true;
};

struct VerdictReport
{
    std::vector<TestFunctionVerdict> functions;
    Verdict overall = Verdict::Equal;
};

/**
Compares the shell pairing against the central point charge for each test
function and each eps. `charge` is Q for the fixed-charge convention;
for fixed density, sigma = charge / (4 pi eps_ref^2) is held constant.
*/
VerdictReport verdict(const UniformWorldline& center, double charge, double eps_ref,
                      const std::vector<BumpTestFunction>& tests, const std::vector<double>& eps_values,
                      const VerdictOptions& options = {});

/** Least-squares slope of log|y| against log x. */
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace worldtube
