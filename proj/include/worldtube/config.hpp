#pragma once

#include "worldtube/compare.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace worldtube {

/** Malformed, incomplete or physically invalid configuration. */
class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct WorldlineParams
{
    double acceleration = 1.0;
    double rapidity = 0.0;
    std::array<double, 3> boost_direction{1.0, 0.0, 0.0};
    /** Spatial direction of n_c in the rest frame of u_c. */
    std::array<double, 3> accel_direction{1.0, 0.0, 0.0};
    std::array<double, 4> origin{0.0, 0.0, 0.0, 0.0};
};

struct ShellParams
{
    double epsilon = 0.05;
    /** Exactly one of charge / sigma is set in a config file; the other is derived. */
    double charge = 1.0;
    bool sigma_given = false;
    double sigma = 0.0;
};

struct TestFunctionParams
{
    /** Offset of the center from x_c along (u_c, e1, e2, e3) of the u_c frame. */
    std::array<double, 4> offset{1.0, 0.0, 0.8, 0.0};
    double radius = 0.3;
    double amplitude = 1.0;
};

struct QuadratureParams
{
    int n_theta = 8;
    int n_phi = 16;
    FieldRule::Method field_method = FieldRule::Method::GaussLegendre;
    int field_order = 24;
    std::size_t mc_samples = std::size_t(1) << 20;
    ConeRule cone{8, 16, 64, 4, 64};
};

struct SweepParams
{
    std::vector<double> eps{0.2, 0.1, 0.05, 0.025};
    /** eps values are multiples of each test function's d0 */
    bool relative_to_d0 = true;
    ChargeConvention convention = ChargeConvention::FixedCharge;
};

struct ToleranceParams
{
    double equal_rel_tol = 1e-9;
    double significance = 10.0;
    double slope_min = 1.9;
    double slope_max = 2.1;
    double ratio_min = 0.9;
    double ratio_max = 1.1;
};

/** Sizes of the randomized invariant suites run by `verify`. */
struct VerifyParams
{
    int random_cases = 1000;
    int retardation_cases = 10000;
    int exterior_points = 20;
    bool include_sweep = true;
};

struct ExperimentConfig
{
    WorldlineParams worldline;
    ShellParams shell;
    std::vector<TestFunctionParams> test_functions;
    QuadratureParams quadrature;
    SweepParams sweep;
    ToleranceParams tolerances;
    VerifyParams verify;
    std::string output_dir = "out";
    std::uint64_t seed = 1;

    /** Default test functions are filled in when the list is empty. */
    static ExperimentConfig defaults();

    UniformWorldline center() const;
    ShellConfig shell_config() const;
    std::vector<BumpTestFunction> tests() const;
    VerdictOptions verdict_options() const;
    /** sigma if given, else charge / (4 pi eps^2) */
    double sigma() const;
};

/**
Strict JSON reader: every key is optional and defaults as above, unknown
keys are rejected, and the physical constraints of the library types are
checked. Any failure is reported as ConfigError.
*/
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/** The effective configuration, with every default spelled out. */
nlohmann::json to_json(const ExperimentConfig& c);

/** Checks everything parse_config checks, on an already built config. */
void validate(const ExperimentConfig& c);

} // namespace worldtube
