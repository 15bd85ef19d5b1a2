#include "worldtube/compare.hpp"
#include "worldtube/errors.hpp"
#include "worldtube/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace worldtube {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

bool finite(const FourVector& v)
{
    return all_finite(v);
}

double euclid_dot(const FourVector& a, const FourVector& b)
{
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

// Apex p relative to the support ball of phi: frame components of x0 - p.
struct ApexGeometry
{
    double y0;
    std::array<double, 3> dir; // unit spatial direction towards x0 (frame components)
    double r;
    double gap2; // |x0 - p|_E^2 - R^2
};

ApexGeometry apex_geometry(const BumpTestFunction& phi, const Event& p)
{
    const auto c = phi.frame_components(phi.center() - p);
    ApexGeometry g;
    g.y0 = c[0];
    g.r = std::sqrt(c[1] * c[1] + c[2] * c[2] + c[3] * c[3]);
    g.dir = {1.0, 0.0, 0.0};
    if (g.r > 0.0) g.dir = {c[1] / g.r, c[2] / g.r, c[3] / g.r};
    g.gap2 = c[0] * c[0] + g.r * g.r - phi.radius() * phi.radius();
    if (!(g.gap2 > 0.0)) throw PreconditionError("light-cone apex lies inside the test-function support");
    return g;
}

// Does the future light cone of p meet the open support ball?
bool cone_hits(const BumpTestFunction& phi, const Event& p)
{
    const ApexGeometry g = apex_geometry(phi, p);
    return g.y0 + g.r > std::sqrt(2.0 * g.gap2);
}

std::pair<double, double> hit_window(const std::function<Event(double)>& pos, double seed, const BumpTestFunction& phi)
{
    if (!cone_hits(phi, pos(seed)))
        throw IntegrationError("light-cone window: seed time does not reach the support");

    auto edge = [&](double direction) {
        double inside = seed;
        double step = phi.radius();
        double outside = seed + direction * step;
        int guard = 0;
        while (cone_hits(phi, pos(outside)))
        {
            inside = outside;
            step *= 2.0;
            outside = seed + direction * step;
            if (++guard > 60) throw IntegrationError("light-cone window: support reachable from unbounded times");
        }
        for (int i = 0; i < 200; ++i)
        {
            const double mid = 0.5 * (inside + outside);
            if (mid == inside || mid == outside) break;
            if (cone_hits(phi, pos(mid)))
                inside = mid;
            else
                outside = mid;
        }
        return outside;
    };
    return {edge(-1.0), edge(1.0)};
}

using ConeIntegrand = std::function<FourVector(double s, const Event& y)>;

// int dlambda_L f(s, p + xi) over the rays from apex p that meet the support.
FourVector light_cone_integral(const BumpTestFunction& phi, const Event& p, double s, const ConeIntegrand& f,
                               const ConeRule& rule)
{
    const ApexGeometry g = apex_geometry(phi, p);
    const double R = phi.radius();
    const auto& axes = phi.tetrad();

    double mu_lo = -1.0;
    if (g.r > 1e-12 * std::sqrt(g.gap2 + R * R))
        mu_lo = std::max(-1.0, (std::sqrt(2.0 * g.gap2) - g.y0) / g.r);
    else if (!(g.y0 > std::sqrt(2.0 * g.gap2)))
        return {};
    if (mu_lo >= 1.0) return {};

    // orthonormal (dir, ea, eb) in frame components
    const auto& d = g.dir;
    std::array<double, 3> helper{0.0, 0.0, 0.0};
    int smallest = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(d[i]) < std::abs(d[smallest])) smallest = i;
    helper[smallest] = 1.0;
    const double hd = helper[0] * d[0] + helper[1] * d[1] + helper[2] * d[2];
    std::array<double, 3> ea{helper[0] - hd * d[0], helper[1] - hd * d[1], helper[2] - hd * d[2]};
    const double na = std::sqrt(ea[0] * ea[0] + ea[1] * ea[1] + ea[2] * ea[2]);
    for (double& x : ea) x /= na;
    const std::array<double, 3> eb{d[1] * ea[2] - d[2] * ea[1], d[2] * ea[0] - d[0] * ea[2],
                                   d[0] * ea[1] - d[1] * ea[0]};

    const Rule1D mu_rule = gauss_legendre(rule.mu_order, mu_lo, 1.0);
    const Rule1D& lam_ref = gauss_legendre(rule.lambda_order);
    const double dphi = two_pi / rule.phi_order;

    FourVector total;
    for (std::size_t i = 0; i < mu_rule.size(); ++i)
    {
        const double mu = mu_rule.nodes[i];
        const double st = std::sqrt(std::max(0.0, (1.0 - mu) * (1.0 + mu)));
        const double b = g.y0 + g.r * mu;
        const double disc = b * b - 2.0 * g.gap2;
        if (!(disc > 0.0) || b <= 0.0) continue;
        const double root = std::sqrt(disc);
        const double lam_lo = 0.5 * (b - root);
        const double lam_hi = 0.5 * (b + root);
        const double half = 0.5 * (lam_hi - lam_lo);
        const double mid = 0.5 * (lam_hi + lam_lo);

        FourVector ring;
        for (int k = 0; k < rule.phi_order; ++k)
        {
            const double ph = rule.phi_order == 1 ? 0.0 : (k + 0.5) * dphi;
            const double cp = std::cos(ph) * st;
            const double sp = std::sin(ph) * st;
            FourVector ray = axes[0];
            for (int a = 0; a < 3; ++a) ray += (mu * d[a] + cp * ea[a] + sp * eb[a]) * axes[a + 1];

            FourVector line;
            for (std::size_t j = 0; j < lam_ref.size(); ++j)
            {
                const double lam = mid + half * lam_ref.nodes[j];
                line += (lam * half * lam_ref.weights[j]) * f(s, p + lam * ray);
            }
            ring += line;
        }
        total += (mu_rule.weights[i] * dphi) * ring;
    }
    return total;
}

// int ds int dlambda_L f(s, pos(s) + xi), exact window in s.
FourVector cone_integral(const std::function<Event(double)>& pos, double seed, const ConeIntegrand& f,
                         const BumpTestFunction& phi, const ConeRule& rule, bool parallel)
{
    const auto [lo, hi] = hit_window(pos, seed, phi);
    const Rule1D srule = composite_gauss_legendre(lo, hi, rule.s_panels, rule.s_order);
    std::vector<FourVector> terms(srule.size());
    auto body = [&](std::size_t i) {
        const double s = srule.nodes[i];
        terms[i] = srule.weights[i] * light_cone_integral(phi, pos(s), s, f, rule);
    };
    if (parallel)
        parallel_for(srule.size(), body);
    else
        for (std::size_t i = 0; i < srule.size(); ++i) body(i);
    return pairwise_sum(terms);
}

// three quarters of each order, for the a posteriori error estimate
ConeRule coarser(const ConeRule& r)
{
    auto h = [](int n) { return std::max(2, (3 * n) / 4); };
    // the azimuthal rule is already exact for the integrands in use
    return {r.s_panels, h(r.s_order), h(r.mu_order), r.phi_order, h(r.lambda_order)};
}

void require_causal_support(const UniformWorldline& w, const BumpTestFunction& phi)
{
    if (w.is_inertial()) return;
    // the causal future of the worldline is v = (x - O).(n_c - u_c) > 0, O = x_c - n_c / a
    const FourVector ell = w.n() - w.u().vector();
    const Event O = w.origin() - (1.0 / w.accel()) * w.n();
    const auto c = phi.frame_components(ell);
    const double dual = std::sqrt(c[1] * c[1] + c[2] * c[2] + c[3] * c[3] + c[0] * c[0]);
    const double v_min = lorentz_product(phi.center() - O, ell) - phi.radius() * dual;
    if (!(v_min > 0.0))
        throw HorizonError("test-function support reaches outside the causal future of the worldline");
}

double norm(const FourVector& v)
{
    return euclidean_norm(v);
}

} // namespace

FourVector lw_point_potential(const UniformWorldline& w, double q, const Event& x, double kappa)
{
    const RetardedSolution sol = solve_retarded(w, x);
    return (kappa * q / sol.rho) * w.velocity(sol.s_ret);
}

ShellField::ShellField(const ShellConfig& shell, const SphereQuadrature& quad, double kappa)
    : config(shell), kappa(kappa), weights(quad.weights)
{
    own.reserve(quad.size());
    for (const FourVector& n : quad.nodes)
    {
        const ShellConstituent c = shell.constituent(n);
        own.push_back(c.as_worldline());
        gamma.push_back(c.time_dilation());
    }
}

FourVector ShellField::sum_constituents(const Event& x, const RetardedSolution& center) const
{
    std::vector<FourVector> terms(own.size());
    for (std::size_t i = 0; i < own.size(); ++i)
    {
        // z / (-k.z) equals v / (-k.v) for the constituent's absolute velocity v
        const RetardationHint hint{gamma[i] * center.s_ret, 2.0 * config.eps() * gamma[i] + 1e-9};
        const RetardedSolution sol = solve_retarded(own[i], x, hint);
        terms[i] = (weights[i] / sol.rho) * own[i].velocity(sol.s_ret);
    }
    const double e = config.eps();
    return (kappa * config.sigma() * e * e) * pairwise_sum(terms);
}

FourVector ShellField::potential(const Event& x) const
{
    if (inside_tube(config, x))
    {
        std::ostringstream msg;
        msg << "field point " << x << " is inside the world tube";
        throw InteriorPointError(msg.str());
    }
    RetardedSolution center;
    try
    {
        center = solve_retarded(config.center(), x);
    }
    catch (const HorizonError&)
    {
        // constituents may still see x; fall back to unhinted solves
        std::vector<FourVector> terms(own.size());
        for (std::size_t i = 0; i < own.size(); ++i)
        {
            const RetardedSolution sol = solve_retarded(own[i], x);
            terms[i] = (weights[i] / sol.rho) * own[i].velocity(sol.s_ret);
        }
        const double e = config.eps();
        return (kappa * config.sigma() * e * e) * pairwise_sum(terms);
    }
    return sum_constituents(x, center);
}

FourVector ShellField::minus_point(const Event& x, double q) const
{
    if (inside_tube(config, x))
    {
        std::ostringstream msg;
        msg << "field point " << x << " is inside the world tube";
        throw InteriorPointError(msg.str());
    }
    const RetardedSolution center = solve_retarded(config.center(), x);
    const FourVector point = (kappa * q / center.rho) * config.center().velocity(center.s_ret);
    return sum_constituents(x, center) - point;
}

FourVector shell_potential(const ShellConfig& shell, const Event& x, const SphereQuadrature& quad, double kappa)
{
    return ShellField(shell, quad, kappa).potential(x);
}

PairingResult integrate_over_support(const BumpTestFunction& phi, const FieldFunction& f, const FieldRule& rule)
{
    const auto& axes = phi.tetrad();
    const double R = phi.radius();
    auto event_at = [&](const std::array<double, 4>& xi) {
        FourVector d;
        for (int a = 0; a < 4; ++a) d += (R * xi[a]) * axes[a];
        return phi.center() + d;
    };
    const double jacobian = R * R * R * R;

    if (rule.method == FieldRule::Method::MonteCarlo)
    {
        if (rule.samples < 2) throw PreconditionError("Monte Carlo pairing needs at least two samples");
        std::mt19937_64 rng(rule.seed);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        std::vector<std::array<double, 4>> pts(rule.samples);
        for (auto& p : pts)
            for (double& c : p) c = unit(rng);
        std::vector<FourVector> vals(pts.size());
        parallel_for(pts.size(), [&](std::size_t i) {
            const auto& p = pts[i];
            if (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3] < 1.0) vals[i] = f(event_at(p));
        });
        const double volume = 16.0 * jacobian;
        const double n = double(pts.size());
        const FourVector mean = pairwise_sum(vals) / n;
        std::vector<FourVector> sq(vals.size());
        for (std::size_t i = 0; i < vals.size(); ++i)
        {
            const FourVector d = vals[i] - mean;
            sq[i] = {d[0] * d[0], d[1] * d[1], d[2] * d[2], d[3] * d[3]};
        }
        const FourVector var = pairwise_sum(sq) / (n - 1.0);
        PairingResult out{volume * mean, 0.0};
        for (int a = 0; a < 4; ++a) out.error = std::max(out.error, volume * std::sqrt(var[a] / n));
        if (!finite(out.value)) throw IntegrationError("Monte Carlo pairing produced a non-finite value");
        return out;
    }

    auto gauss = [&](int order) {
        const Rule1D& r = gauss_legendre(order);
        std::vector<std::array<double, 4>> pts;
        std::vector<double> wts;
        for (std::size_t i = 0; i < r.size(); ++i)
            for (std::size_t j = 0; j < r.size(); ++j)
                for (std::size_t k = 0; k < r.size(); ++k)
                    for (std::size_t l = 0; l < r.size(); ++l)
                    {
                        const std::array<double, 4> p{r.nodes[i], r.nodes[j], r.nodes[k], r.nodes[l]};
                        if (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3] >= 1.0) continue;
                        pts.push_back(p);
                        wts.push_back(r.weights[i] * r.weights[j] * r.weights[k] * r.weights[l]);
                    }
        std::vector<FourVector> vals(pts.size());
        parallel_for(pts.size(), [&](std::size_t i) { vals[i] = (wts[i] * jacobian) * f(event_at(pts[i])); });
        return pairwise_sum(vals);
    };

    if (rule.order < 2) throw PreconditionError("Gauss-Legendre pairing order must be >= 2");
    PairingResult out;
    out.value = gauss(rule.order);
    const FourVector coarse = gauss(std::max(2, rule.order / 2));
    out.error = max_abs(out.value - coarse);
    if (!finite(out.value)) throw IntegrationError("pairing produced a non-finite value");
    return out;
}

PairingResult pair_potential_with_test(const FieldFunction& A, const BumpTestFunction& phi, const FieldRule& rule)
{
    return integrate_over_support(
        phi,
        [&](const Event& x) {
            const double v = phi(x);
            return v == 0.0 ? FourVector{} : v * A(x);
        },
        rule);
}

PairingResult pair_current_direct(const UniformWorldline& w, double q, const BumpTestFunction& phi,
                                  const ConeRule& rule, double kappa)
{
    require_causal_support(w, phi);
    const double seed = solve_retarded(w, phi.center()).s_ret;
    auto pos = [&](double s) { return w.position(s); };
    auto run = [&](const ConeRule& r) {
        return cone_integral(
            pos, seed, [&](double s, const Event& y) { return phi(y) * w.velocity(s); }, phi, r, true);
    };
    const FourVector fine = run(rule);
    PairingResult out;
    out.value = (kappa * q) * fine;
    out.error = std::abs(kappa * q) * max_abs(fine - run(coarser(rule)));
    if (!finite(out.value)) throw IntegrationError("direct pairing produced a non-finite value");
    return out;
}

PairingResult pair_current_direct(const ShellConfig& shell, const SphereQuadrature& quad, const BumpTestFunction& phi,
                                  const ConeRule& rule, double kappa)
{
    require_causal_support(shell.center(), phi);
    const ConeRule coarse = coarser(rule);
    std::vector<FourVector> fine_terms(quad.size());
    std::vector<FourVector> coarse_terms(quad.size());

    parallel_for(quad.size(), [&](std::size_t i) {
        const ShellConstituent c = shell.constituent(quad.nodes[i]);
        const UniformWorldline own = c.as_worldline();
        const double gamma = c.time_dilation();
        require_causal_support(own, phi);
        const double seed = solve_retarded(c, phi.center()).s_ret;
        auto pos = [&](double s) { return own.position(gamma * s); };
        auto f = [&](double s, const Event& y) { return (phi(y) * gamma) * own.velocity(gamma * s); };
        fine_terms[i] = quad.weights[i] * cone_integral(pos, seed, f, phi, rule, false);
        coarse_terms[i] = quad.weights[i] * cone_integral(pos, seed, f, phi, coarse, false);
    });

    const double e = shell.eps();
    const double scale = kappa * shell.sigma() * e * e;
    PairingResult out;
    out.value = scale * pairwise_sum(fine_terms);
    out.error = std::abs(scale) * max_abs(out.value / scale - pairwise_sum(coarse_terms));
    if (!finite(out.value)) throw IntegrationError("direct pairing produced a non-finite value");
    return out;
}

Prediction predicted_difference(const ShellConfig& shell, const BumpTestFunction& phi, ConeRule rule, double kappa)
{
    require_exterior(shell, phi);
    const UniformWorldline& w = shell.center();
    const double seed = solve_retarded(w, phi.center()).s_ret;
    auto pos = [&](double s) { return w.position(s); };

    std::atomic<bool> timelike{true};
    auto f = [&](double s, const Event& y) {
        const FourVector v = w.velocity(s);
        const FourVector acc = w.acceleration(s);
        if (!is_absolute_velocity(v)) timelike = false;
        const LinMap4 H = phi.hessian(y);
        const double laplacian = H.trace() + lorentz_product(v, H * v);
        return (lorentz_product(acc, phi.gradient(y)) + 0.5 * laplacian) * v;
    };

    const double e = shell.eps();
    const double prefactor = kappa * shell.charge() * e * e / 3.0;
    const FourVector fine = cone_integral(pos, seed, f, phi, rule, true);
    const FourVector coarse = cone_integral(pos, seed, f, phi, coarser(rule), true);

    Prediction out;
    out.value = prefactor * fine;
    out.error = std::abs(prefactor) * max_abs(fine - coarse);
    out.integrand_timelike = timelike;
    if (!finite(out.value)) throw IntegrationError("predicted difference is not finite");
    return out;
}

namespace {

// argmin over s of |r(s) - x0|_E by a coarse scan and golden-section refinement
double closest_approach(const std::function<Event(double)>& pos, const BumpTestFunction& phi, double s_mid, double span)
{
    auto dist2 = [&](double s) { return phi.euclidean_norm2(pos(s) - phi.center()); };
    constexpr int samples = 2001;
    const double lo = s_mid - span;
    const double h = 2.0 * span / (samples - 1);
    int best = 0;
    double best_d = dist2(lo);
    for (int i = 1; i < samples; ++i)
    {
        const double d = dist2(lo + i * h);
        if (d < best_d)
        {
            best_d = d;
            best = i;
        }
    }
    double a = lo + (best - 1) * h;
    double b = lo + (best + 1) * h;
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - golden * (b - a);
    double d = a + golden * (b - a);
    for (int i = 0; i < 100; ++i)
    {
        if (dist2(c) < dist2(d))
            b = d;
        else
            a = c;
        c = b - golden * (b - a);
        d = a + golden * (b - a);
    }
    return 0.5 * (a + b);
}

double frame_time(const UniformWorldline& w, const Event& x)
{
    return -lorentz_product(x - w.origin(), w.u());
}

} // namespace

double support_distance(const UniformWorldline& w, const BumpTestFunction& phi)
{
    const double reach = std::sqrt(phi.euclidean_norm2(phi.center() - w.origin())) + phi.radius() + 1.0;
    auto pos = [&](double s) { return w.position(s); };
    const double s = closest_approach(pos, phi, frame_time(w, phi.center()), 3.0 * reach);
    return std::sqrt(phi.euclidean_norm2(w.position(s) - phi.center())) - phi.radius();
}

double tube_clearance(const ShellConfig& shell, const BumpTestFunction& phi)
{
    const UniformWorldline& w = shell.center();
    const double reach = std::sqrt(phi.euclidean_norm2(phi.center() - w.origin())) + phi.radius() + 1.0;
    auto pos = [&](double s) { return w.position(s); };
    const double s_star = closest_approach(pos, phi, frame_time(w, phi.center()), 3.0 * reach);
    const double d_star = std::sqrt(phi.euclidean_norm2(w.position(s_star) - phi.center()));
    const double half = d_star + 2.0 * (phi.radius() + shell.eps());

    const SphereQuadrature dirs = sphere_quadrature(w.u(), w.n(), 6, 12);
    std::vector<UniformWorldline> own;
    std::vector<double> gamma;
    for (const FourVector& n : dirs.nodes)
    {
        const ShellConstituent c = shell.constituent(n);
        own.push_back(c.as_worldline());
        gamma.push_back(c.time_dilation());
    }

    constexpr int samples = 401;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i)
    {
        const double s = s_star - half + 2.0 * half * i / (samples - 1);
        for (std::size_t j = 0; j < own.size(); ++j)
            best = std::min(best, phi.euclidean_norm2(own[j].position(gamma[j] * s) - phi.center()));
    }
    return std::sqrt(best) - phi.radius();
}

void require_exterior(const ShellConfig& shell, const BumpTestFunction& phi)
{
    require_causal_support(shell.center(), phi);
    const double clearance = tube_clearance(shell, phi);
    if (clearance < 0.1 * phi.radius())
    {
        std::ostringstream msg;
        msg << "test-function support is not outside the world tube (clearance " << clearance << ", need "
            << 0.1 * phi.radius() << ")";
        throw PreconditionError(msg.str());
    }
}

std::string to_string(Verdict v)
{
    return v == Verdict::Equal ? "EQUAL" : "NOT_EQUAL";
}

std::string to_string(ChargeConvention c)
{
    return c == ChargeConvention::FixedCharge ? "fixed_charge" : "fixed_density";
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) throw PreconditionError("loglog_slope needs at least two points");
    double mx = 0.0, my = 0.0;
    const double n = double(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        mx += std::log(x[i]);
        my += std::log(std::abs(y[i]));
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(std::abs(y[i])) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

VerdictReport verdict(const UniformWorldline& center, double charge, double eps_ref,
                      const std::vector<BumpTestFunction>& tests, const std::vector<double>& eps_values,
                      const VerdictOptions& options)
{
    if (eps_values.empty()) throw PreconditionError("verdict needs at least one eps value");
    const double sigma_ref = charge / (4.0 * std::numbers::pi * eps_ref * eps_ref);

    VerdictReport report;
    for (const BumpTestFunction& phi : tests)
    {
        TestFunctionVerdict tf;
        tf.d0 = support_distance(center, phi);

        const PairingResult unit_point = pair_potential_with_test(
            [&](const Event& x) { return lw_point_potential(center, 1.0, x, options.kappa); }, phi, options.field);

        for (double eps : eps_values)
        {
            const auto start = std::chrono::steady_clock::now();
            const double q = options.convention == ChargeConvention::FixedCharge
                               ? charge
                               : 4.0 * std::numbers::pi * eps * eps * sigma_ref;
            const ShellConfig shell = ShellConfig::with_charge(center, eps, q);
            require_exterior(shell, phi);

            const SphereQuadrature quad = sphere_quadrature(center.u(), center.n(), options.n_theta, options.n_phi);
            const ShellField field(shell, quad, options.kappa);
            const PairingResult delta = pair_potential_with_test(
                [&](const Event& x) { return field.minus_point(x, q); }, phi, options.field);
            const Prediction pred = predicted_difference(shell, phi, options.cone, options.kappa);

            DifferenceRecord rec;
            rec.eps = eps;
            rec.charge = q;
            rec.delta = delta.value;
            rec.delta_error = delta.error;
            rec.predicted = pred.value;
            rec.predicted_error = pred.error;
            rec.point_norm = std::abs(q) * norm(unit_point.value);
            const double pp = euclid_dot(pred.value, pred.value);
            rec.ratio = pp > 0.0 ? euclid_dot(delta.value, pred.value) / pp : std::numeric_limits<double>::quiet_NaN();
            rec.mismatch = pp > 0.0 ? norm(delta.value - pred.value) / std::sqrt(pp)
                                    : std::numeric_limits<double>::quiet_NaN();
            const double dn = norm(delta.value);
            const bool significant = dn > options.significance * delta.error;
            const bool large = dn > options.equal_rel_tol * rec.point_norm;
            rec.verdict = significant && large ? Verdict::NotEqual : Verdict::Equal;
            rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

            tf.integrand_timelike = tf.integrand_timelike && pred.integrand_timelike;
            if (rec.verdict == Verdict::NotEqual) tf.verdict = Verdict::NotEqual;
            tf.records.push_back(rec);
        }

        if (tf.records.size() >= 2)
        {
            std::vector<double> xs, ys, ys_other;
            for (const auto& r : tf.records)
            {
                xs.push_back(r.eps);
                ys.push_back(norm(r.delta));
                // Delta is linear in the charge; the other convention rescales it exactly
                const double other_q = options.convention == ChargeConvention::FixedCharge
                                         ? 4.0 * std::numbers::pi * r.eps * r.eps * sigma_ref
                                         : charge;
                ys_other.push_back(norm(r.delta) * other_q / r.charge);
            }
            tf.slope = loglog_slope(xs, ys);
            tf.slope_other = loglog_slope(xs, ys_other);
        }
        if (tf.verdict == Verdict::NotEqual) report.overall = Verdict::NotEqual;
        report.functions.push_back(std::move(tf));
    }
    return report;
}

} // namespace worldtube
