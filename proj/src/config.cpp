#include "worldtube/config.hpp"
#include "worldtube/errors.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace worldtube {

using nlohmann::json;

namespace {

// Reads the members of one JSON object, rejecting keys it was not asked about.
class ObjectReader
{
public:
    ObjectReader(const json& j, std::string path) : obj(j), where(std::move(path))
    {
        if (!obj.is_object()) fail("expected an object");
    }

    ~ObjectReader() noexcept(false)
    {
        if (std::uncaught_exceptions() > 0) return;
        for (const auto& item : obj.items())
            if (!seen.count(item.key())) throw ConfigError(where + "." + item.key() + ": unknown key");
    }

    const json* get(const std::string& key)
    {
        seen.insert(key);
        auto it = obj.find(key);
        return it == obj.end() ? nullptr : &*it;
    }

    void read(const std::string& key, double& out)
    {
        if (const json* v = get(key))
        {
            if (!v->is_number()) fail(key + ": expected a number");
            out = v->get<double>();
            if (!std::isfinite(out)) fail(key + ": must be finite");
        }
    }

    void read(const std::string& key, int& out)
    {
        if (const json* v = get(key))
        {
            if (!v->is_number_integer()) fail(key + ": expected an integer");
            out = v->get<int>();
        }
    }

    void read(const std::string& key, std::size_t& out)
    {
        if (const json* v = get(key))
        {
            if (!v->is_number_unsigned()) fail(key + ": expected a non-negative integer");
            out = v->get<std::size_t>();
        }
    }

    void read(const std::string& key, std::uint64_t& out, int)
    {
        if (const json* v = get(key))
        {
            if (!v->is_number_unsigned()) fail(key + ": expected a non-negative integer");
            out = v->get<std::uint64_t>();
        }
    }

    void read(const std::string& key, bool& out)
    {
        if (const json* v = get(key))
        {
            if (!v->is_boolean()) fail(key + ": expected true or false");
            out = v->get<bool>();
        }
    }

    void read(const std::string& key, std::string& out)
    {
        if (const json* v = get(key))
        {
            if (!v->is_string()) fail(key + ": expected a string");
            out = v->get<std::string>();
        }
    }

    template <std::size_t N>
    void read(const std::string& key, std::array<double, N>& out)
    {
        if (const json* v = get(key))
        {
            if (!v->is_array() || v->size() != N) fail(key + ": expected an array of " + std::to_string(N) + " numbers");
            for (std::size_t i = 0; i < N; ++i)
            {
                if (!(*v)[i].is_number()) fail(key + ": expected numbers");
                out[i] = (*v)[i].get<double>();
            }
        }
    }

    void read(const std::string& key, std::vector<double>& out)
    {
        if (const json* v = get(key))
        {
            if (!v->is_array()) fail(key + ": expected an array of numbers");
            out.clear();
            for (const json& x : *v)
            {
                if (!x.is_number()) fail(key + ": expected numbers");
                out.push_back(x.get<double>());
            }
        }
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(where + ": " + msg); }

    const std::string& path() const { return where; }

private:
    const json& obj;
    std::string where;
    std::set<std::string> seen;
};

std::string method_name(FieldRule::Method m)
{
    return m == FieldRule::Method::GaussLegendre ? "gauss_legendre" : "monte_carlo";
}

std::array<double, 3> unit3(std::array<double, 3> d, const std::string& what)
{
    const double n = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    if (!(n > 0.0)) throw ConfigError(what + ": direction must be nonzero");
    for (double& x : d) x /= n;
    return d;
}

void parse_cone(const json& j, ConeRule& cone, const std::string& path)
{
    ObjectReader r(j, path);
    r.read("s_panels", cone.s_panels);
    r.read("s_order", cone.s_order);
    r.read("mu_order", cone.mu_order);
    r.read("phi_order", cone.phi_order);
    r.read("lambda_order", cone.lambda_order);
}

} // namespace

ExperimentConfig ExperimentConfig::defaults()
{
    ExperimentConfig c;
    c.test_functions = {
        {{1.0, 0.0, 0.8, 0.0}, 0.3, 1.0},
        {{0.5, 1.2, 0.0, 0.0}, 0.3, 1.0},
        {{1.5, -0.3, 0.0, 0.9}, 0.35, 1.0},
    };
    return c;
}

UniformWorldline ExperimentConfig::center() const
{
    const auto& w = worldline;
    const auto b = unit3(w.boost_direction, "worldline.boost_direction");
    const auto d = unit3(w.accel_direction, "worldline.accel_direction");
    const AbsoluteVelocity u = AbsoluteVelocity::from_rapidity(w.rapidity, b[0], b[1], b[2]);
    const auto axes = spatial_frame(u);
    const FourVector n = d[0] * axes[0] + d[1] * axes[1] + d[2] * axes[2];
    const Event origin{w.origin[0], w.origin[1], w.origin[2], w.origin[3]};
    return UniformWorldline(origin, u, n, w.acceleration);
}

double ExperimentConfig::sigma() const
{
    if (shell.sigma_given) return shell.sigma;
    return shell.charge / (4.0 * std::numbers::pi * shell.epsilon * shell.epsilon);
}

ShellConfig ExperimentConfig::shell_config() const
{
    return ShellConfig(center(), shell.epsilon, sigma());
}

std::vector<BumpTestFunction> ExperimentConfig::tests() const
{
    const UniformWorldline w = center();
    const auto axes = spatial_frame(w.u());
    std::vector<BumpTestFunction> out;
    for (const auto& t : test_functions)
    {
        const FourVector d = t.offset[0] * w.u().vector() + t.offset[1] * axes[0] + t.offset[2] * axes[1] +
                             t.offset[3] * axes[2];
        out.emplace_back(w.origin() + d, t.radius, t.amplitude, w.u());
    }
    return out;
}

VerdictOptions ExperimentConfig::verdict_options() const
{
    VerdictOptions o;
    o.convention = sweep.convention;
    o.n_theta = quadrature.n_theta;
    o.n_phi = quadrature.n_phi;
    o.field.method = quadrature.field_method;
    o.field.order = quadrature.field_order;
    o.field.samples = quadrature.mc_samples;
    o.field.seed = seed;
    o.cone = quadrature.cone;
    o.equal_rel_tol = tolerances.equal_rel_tol;
    o.significance = tolerances.significance;
    return o;
}

void validate(const ExperimentConfig& c)
{
    try
    {
        const UniformWorldline w = c.center();
        if (!(c.shell.epsilon > 0.0)) throw ConfigError("shell.epsilon must be > 0");
        const ShellConfig shell = c.shell_config();
        if (c.test_functions.empty()) throw ConfigError("test_functions: at least one test function is required");
        for (const auto& t : c.test_functions)
            if (!(t.radius > 0.0)) throw ConfigError("test_functions: radius must be > 0");

        const auto& q = c.quadrature;
        if (q.n_theta < 2 || q.n_phi < 4) throw ConfigError("quadrature: need n_theta >= 2 and n_phi >= 4");
        if (q.field_order < 2) throw ConfigError("quadrature.field_order must be >= 2");
        if (q.mc_samples < 2) throw ConfigError("quadrature.mc_samples must be >= 2");
        const ConeRule& k = q.cone;
        if (k.s_panels < 1 || k.s_order < 2 || k.mu_order < 2 || k.phi_order < 1 || k.lambda_order < 2)
            throw ConfigError("quadrature.cone: orders must be >= 2 (panels and phi_order >= 1)");

        for (double e : c.sweep.eps)
            if (!(e > 0.0)) throw ConfigError("sweep.eps: values must be > 0");
        const auto& tol = c.tolerances;
        if (!(tol.equal_rel_tol >= 0.0) || !(tol.significance > 0.0) || tol.slope_min > tol.slope_max ||
            tol.ratio_min > tol.ratio_max)
            throw ConfigError("tolerances: inconsistent values");
        if (c.verify.random_cases < 1 || c.verify.retardation_cases < 1 || c.verify.exterior_points < 1)
            throw ConfigError("verify: case counts must be >= 1");
        if (c.output_dir.empty()) throw ConfigError("output.dir must not be empty");

        for (const BumpTestFunction& phi : c.tests())
        {
            require_exterior(shell, phi);
            const double d0 = support_distance(w, phi);
            for (double e : c.sweep.eps)
            {
                const double eps = c.sweep.relative_to_d0 ? e * d0 : e;
                const ShellConfig s = ShellConfig::with_charge(w, eps, 1.0);
                require_exterior(s, phi);
            }
        }
    }
    catch (const ConfigError&)
    {
        throw;
    }
    catch (const WedgeViolation& e)
    {
        throw ConfigError(std::string("wedge violation: ") + e.what());
    }
    catch (const std::exception& e)
    {
        throw ConfigError(e.what());
    }
}

ExperimentConfig parse_config(const json& j)
{
    ExperimentConfig c;
    {
        ObjectReader top(j, "config");
        if (const json* v = top.get("worldline"))
        {
            ObjectReader r(*v, "worldline");
            r.read("acceleration", c.worldline.acceleration);
            r.read("rapidity", c.worldline.rapidity);
            r.read("boost_direction", c.worldline.boost_direction);
            r.read("accel_direction", c.worldline.accel_direction);
            r.read("origin", c.worldline.origin);
        }
        if (const json* v = top.get("shell"))
        {
            ObjectReader r(*v, "shell");
            r.read("epsilon", c.shell.epsilon);
            const bool has_charge = r.get("charge") != nullptr;
            const bool has_sigma = r.get("sigma") != nullptr;
            if (has_charge && has_sigma) r.fail("give either charge or sigma, not both");
            r.read("charge", c.shell.charge);
            if (has_sigma)
            {
                r.read("sigma", c.shell.sigma);
                c.shell.sigma_given = true;
                c.shell.charge = 4.0 * std::numbers::pi * c.shell.epsilon * c.shell.epsilon * c.shell.sigma;
            }
        }
        if (const json* v = top.get("test_functions"))
        {
            if (!v->is_array()) top.fail("test_functions: expected an array");
            for (std::size_t i = 0; i < v->size(); ++i)
            {
                ObjectReader r((*v)[i], "test_functions[" + std::to_string(i) + "]");
                TestFunctionParams t;
                r.read("offset", t.offset);
                r.read("radius", t.radius);
                r.read("amplitude", t.amplitude);
                c.test_functions.push_back(t);
            }
        }
        else
        {
            c.test_functions = ExperimentConfig::defaults().test_functions;
        }
        if (const json* v = top.get("quadrature"))
        {
            ObjectReader r(*v, "quadrature");
            r.read("n_theta", c.quadrature.n_theta);
            r.read("n_phi", c.quadrature.n_phi);
            std::string method = method_name(c.quadrature.field_method);
            r.read("field_method", method);
            if (method == "gauss_legendre")
                c.quadrature.field_method = FieldRule::Method::GaussLegendre;
            else if (method == "monte_carlo")
                c.quadrature.field_method = FieldRule::Method::MonteCarlo;
            else
                r.fail("field_method: expected \"gauss_legendre\" or \"monte_carlo\"");
            r.read("field_order", c.quadrature.field_order);
            r.read("mc_samples", c.quadrature.mc_samples);
            if (const json* cone = r.get("cone")) parse_cone(*cone, c.quadrature.cone, "quadrature.cone");
        }
        if (const json* v = top.get("sweep"))
        {
            ObjectReader r(*v, "sweep");
            r.read("eps", c.sweep.eps);
            r.read("relative_to_d0", c.sweep.relative_to_d0);
            std::string conv = to_string(c.sweep.convention);
            r.read("convention", conv);
            if (conv == "fixed_charge")
                c.sweep.convention = ChargeConvention::FixedCharge;
            else if (conv == "fixed_density")
                c.sweep.convention = ChargeConvention::FixedDensity;
            else
                r.fail("convention: expected \"fixed_charge\" or \"fixed_density\"");
        }
        if (const json* v = top.get("tolerances"))
        {
            ObjectReader r(*v, "tolerances");
            r.read("equal_rel_tol", c.tolerances.equal_rel_tol);
            r.read("significance", c.tolerances.significance);
            r.read("slope_min", c.tolerances.slope_min);
            r.read("slope_max", c.tolerances.slope_max);
            r.read("ratio_min", c.tolerances.ratio_min);
            r.read("ratio_max", c.tolerances.ratio_max);
        }
        if (const json* v = top.get("verify"))
        {
            ObjectReader r(*v, "verify");
            r.read("random_cases", c.verify.random_cases);
            r.read("retardation_cases", c.verify.retardation_cases);
            r.read("exterior_points", c.verify.exterior_points);
            r.read("include_sweep", c.verify.include_sweep);
        }
        if (const json* v = top.get("output"))
        {
            ObjectReader r(*v, "output");
            r.read("dir", c.output_dir);
        }
        top.read("seed", c.seed, 0);
    }
    validate(c);
    return c;
}

ExperimentConfig parse_config_text(const std::string& text)
{
    json j;
    try
    {
        j = json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    return parse_config(j);
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str());
}

json to_json(const ExperimentConfig& c)
{
    json j;
    j["worldline"] = {{"acceleration", c.worldline.acceleration},
                      {"rapidity", c.worldline.rapidity},
                      {"boost_direction", c.worldline.boost_direction},
                      {"accel_direction", c.worldline.accel_direction},
                      {"origin", c.worldline.origin}};
    j["shell"] = {{"epsilon", c.shell.epsilon}};
    if (c.shell.sigma_given)
        j["shell"]["sigma"] = c.shell.sigma;
    else
        j["shell"]["charge"] = c.shell.charge;
    j["test_functions"] = json::array();
    for (const auto& t : c.test_functions)
        j["test_functions"].push_back({{"offset", t.offset}, {"radius", t.radius}, {"amplitude", t.amplitude}});
    const auto& q = c.quadrature;
    j["quadrature"] = {{"n_theta", q.n_theta},
                       {"n_phi", q.n_phi},
                       {"field_method", method_name(q.field_method)},
                       {"field_order", q.field_order},
                       {"mc_samples", q.mc_samples},
                       {"cone",
                        {{"s_panels", q.cone.s_panels},
                         {"s_order", q.cone.s_order},
                         {"mu_order", q.cone.mu_order},
                         {"phi_order", q.cone.phi_order},
                         {"lambda_order", q.cone.lambda_order}}}};
    j["sweep"] = {{"eps", c.sweep.eps},
                  {"relative_to_d0", c.sweep.relative_to_d0},
                  {"convention", to_string(c.sweep.convention)}};
    const auto& t = c.tolerances;
    j["tolerances"] = {{"equal_rel_tol", t.equal_rel_tol}, {"significance", t.significance},
                       {"slope_min", t.slope_min},         {"slope_max", t.slope_max},
                       {"ratio_min", t.ratio_min},         {"ratio_max", t.ratio_max}};
    j["verify"] = {{"random_cases", c.verify.random_cases},
                   {"retardation_cases", c.verify.retardation_cases},
                   {"exterior_points", c.verify.exterior_points},
                   {"include_sweep", c.verify.include_sweep}};
    j["output"] = {{"dir", c.output_dir}};
    j["seed"] = c.seed;
    return j;
}

} // namespace worldtube
