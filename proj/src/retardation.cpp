#include "worldtube/retardation.hpp"
#include "worldtube/errors.hpp"

#include <limits>
#include <sstream>

namespace worldtube {

namespace {

// x - x_c split along the worldline plane: time along u_c, distance along
// n_c, and the squared transverse remainder.
struct Split
{
    double t;
    double n;
    double perp2;
};

// e^{a s} - 1 over a, continuous at a = 0
double expm1_over_a(double a, double s)
{
    if (a == 0.0) return s;
    return std::expm1(a * s) / a;
}

class Separation
{
public:
    Separation(const UniformWorldline& w, const Event& x) : a(w.accel())
    {
        const FourVector y = x - w.origin();
        split.t = -lorentz_product(y, w.u());
        split.n = lorentz_product(y, w.n());
        const FourVector perp = y - split.t * w.u().vector() - split.n * w.n();
        split.perp2 = std::max(0.0, lorentz_product(perp, perp));
        v0 = split.t + split.n;
        w0 = split.t - split.n;
    }

    // Light-cone components of k = x - r(s): dv = k_t + k_n, dw = k_t - k_n.
    double dv(double s) const { return v0 - expm1_over_a(a, s); }
    double dw(double s) const { return w0 + expm1_over_a(a, -s); }

    double g(double s) const { return -dv(s) * dw(s) + split.perp2; }

    // dg/ds = -2 k.r'(s)
    double dg(double s) const
    {
        const double ep = a == 0.0 ? 1.0 : std::exp(a * s);
        const double em = a == 0.0 ? 1.0 : std::exp(-a * s);
        return ep * dw(s) + em * dv(s);
    }

    // x - r(s) future timelike
    bool future_timelike(double s) const
    {
        const double v = dv(s);
        return v > 0.0 && g(s) < 0.0;
    }

    double spatial_scale(double s) const
    {
        const double kn = 0.5 * (dv(s) - dw(s));
        return kn * kn + split.perp2;
    }

    Split split;
    double a;
    double v0;
    double w0;
};

[[noreturn]] void horizon(const Event& x)
{
    std::ostringstream msg;
    msg << "field point " << x << " is outside the causal future of the worldline";
    throw HorizonError(msg.str());
}

} // namespace

double admissible_proper_time(double accel)
{
    // exp(a s) must stay finite, and its square representable
    const double spec_limit = 1e3 / std::max(accel, 1.0);
    return accel > 0.0 ? std::min(spec_limit, 300.0 / accel) : spec_limit;
}

RetardedSolution solve_retarded(const UniformWorldline& w, const Event& x, std::optional<RetardationHint> hint)
{
    const Separation sep(w, x);
    const double limit = admissible_proper_time(w.accel());

    double s0 = sep.split.t - std::sqrt(sep.split.n * sep.split.n + sep.split.perp2);
    double width = std::sqrt(sep.split.n * sep.split.n + sep.split.perp2);
    if (hint)
    {
        s0 = hint->s;
        width = hint->width;
    }
    s0 = std::clamp(s0, -limit, limit);
    width = std::max(width, 1e-6 * std::max(1.0, std::abs(s0)));
    if (!std::isfinite(s0) || !std::isfinite(width)) throw PreconditionError("solve_retarded: non-finite input");

    // lo: x - r(lo) future timelike
    double lo = s0;
    for (double step = width; !sep.future_timelike(lo); step *= 2.0)
    {
        if (lo <= -limit) horizon(x);
        lo = std::max(s0 - step, -limit);
    }
    // hi: x - r(hi) not future timelike
    double hi = s0;
    for (double step = width; sep.future_timelike(hi); step *= 2.0)
    {
        if (hi >= limit) throw IntegrationError("solve_retarded: no upper bracket within the admissible range");
        hi = std::min(s0 + step, limit);
    }
    // move hi below the advanced root so g(hi) >= 0
    while (sep.g(hi) < 0.0)
    {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sep.future_timelike(mid))
            lo = mid;
        else
            hi = mid;
    }

    double s = sep.g(hi) <= -sep.g(lo) ? hi : lo;
    for (int iter = 0; iter < 200; ++iter)
    {
        const double g = sep.g(s);
        if (g == 0.0) break;
        const double tol = 1e-13 * std::max(sep.spatial_scale(s), std::numeric_limits<double>::min());
        if (g < 0.0)
            lo = s;
        else
            hi = s;
        const double dg = sep.dg(s);
        double next = s - g / dg;
        const double prev = s;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        s = next;
        if (std::abs(g) <= tol && std::abs(s - prev) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(s)))
            break;
        if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(s))) break;
    }

    RetardedSolution sol;
    sol.s_ret = s;
    sol.k = x - w.position(s);
    sol.rho = 0.5 * sep.dg(s);
    const double scale = std::max({1.0, max_abs(x - w.origin()), std::abs(s)});
    if (!(sol.rho > 1e-13 * scale) || max_abs(sol.k) <= 1e-13 * scale)
    {
        std::ostringstream msg;
        msg << "field point " << x << " lies on the worldline";
        throw OnWorldlineError(msg.str());
    }
    return sol;
}

RetardedSolution solve_retarded(const ShellConstituent& c, const Event& x, std::optional<RetardationHint> hint)
{
    const UniformWorldline own = c.as_worldline();
    const double gamma = c.time_dilation();
    if (hint)
    {
        hint->s *= gamma;
        hint->width *= gamma;
    }
    RetardedSolution sol = solve_retarded(own, x, hint);
    sol.s_ret /= gamma;
    return sol;
}

} // namespace worldtube
