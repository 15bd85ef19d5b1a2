#include "worldtube/spacetime.hpp"
#include "worldtube/errors.hpp"

#include <iomanip>
#include <sstream>

namespace worldtube {

bool is_absolute_velocity(const FourVector& v, double tol)
{
    const double scale = std::max(1.0, v[0] * v[0]);
    return v[0] > 0.0 && std::abs(lorentz_product(v, v) + 1.0) <= tol * scale;
}

AbsoluteVelocity::AbsoluteVelocity(const FourVector& v) : v(v)
{
    if (!is_absolute_velocity(v))
    {
        std::ostringstream msg;
        msg << std::setprecision(17) << "not an absolute velocity: " << v
            << " (u.u = " << lorentz_product(v, v) << ")";
        throw PreconditionError(msg.str());
    }
}

AbsoluteVelocity AbsoluteVelocity::from_rapidity(double alpha, double dx, double dy, double dz)
{
    const double norm = std::sqrt(dx * dx + dy * dy + dz * dz);
    if (alpha == 0.0) return rest();
    if (!(norm > 0.0)) throw PreconditionError("boost direction must be nonzero");
    const double sh = std::sinh(alpha) / norm;
    return AbsoluteVelocity({std::cosh(alpha), sh * dx, sh * dy, sh * dz});
}

LinMap4 tensor(const FourVector& a, const FourVector& b)
{
    LinMap4 T;
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) T(i, k) = a[i] * b[k] * metric(k);
    return T;
}

LinMap4 adjoint(const LinMap4& L)
{
    LinMap4 A;
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) A(i, k) = metric(i) * L(k, i) * metric(k);
    return A;
}

LinMap4 boost(const AbsoluteVelocity& u, const AbsoluteVelocity& u2)
{
    const FourVector sum = u2.vector() + u.vector();
    // 1 - u2.u >= 2 for two futurelike unit vectors
    const double denom = 1.0 - lorentz_product(u2, u);
    LinMap4 L = LinMap4::identity();
    L += (1.0 / denom) * tensor(sum, sum);
    L -= 2.0 * tensor(u2, u);
    return L;
}

LinMap4 spatial_projection(const AbsoluteVelocity& u)
{
    return LinMap4::identity() + tensor(u, u);
}

LinMap4 plane_projection(const AbsoluteVelocity& u, const FourVector& n)
{
    const double scale = std::max(1.0, max_abs(n) * max_abs(n));
    if (std::abs(lorentz_product(n, n) - 1.0) > 1e-12 * scale
        || std::abs(lorentz_product(u, n)) > 1e-12 * scale * std::max(1.0, u[0]))
        throw PreconditionError("plane_projection requires n.n = 1 and u.n = 0");
    return LinMap4::identity() + tensor(u, u) - tensor(n, n);
}

std::array<FourVector, 3> spatial_frame(const AbsoluteVelocity& u)
{
    const LinMap4 L = boost(AbsoluteVelocity::rest(), u);
    return {L * FourVector::basis(1), L * FourVector::basis(2), L * FourVector::basis(3)};
}

std::array<FourVector, 2> complete_tetrad(const AbsoluteVelocity& u, const FourVector& n)
{
    const LinMap4 P = plane_projection(u, n);
    std::array<FourVector, 2> out;
    int found = 0;

    // Gram-Schmidt over the boosted spatial axes, keeping the two with the
    // largest surviving projection for conditioning.
    auto frame = spatial_frame(u);
    std::array<double, 3> size{};
    std::array<FourVector, 3> proj;
    for (int i = 0; i < 3; ++i)
    {
        proj[i] = P * frame[i];
        size[i] = lorentz_product(proj[i], proj[i]);
    }
    int skip = 0;
    for (int i = 1; i < 3; ++i)
        if (size[i] < size[skip]) skip = i;

    for (int i = 0; i < 3 && found < 2; ++i)
    {
        if (i == skip) continue;
        FourVector v = proj[i];
        for (int j = 0; j < found; ++j) v -= lorentz_product(out[j], v) * out[j];
        out[found++] = v / std::sqrt(lorentz_product(v, v));
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const FourVector& v)
{
    return os << "(" << v[0] << ", " << v[1] << ", " << v[2] << ", " << v[3] << ")";
}

std::ostream& operator<<(std::ostream& os, const Event& p)
{
    return os << "[" << p[0] << ", " << p[1] << ", " << p[2] << ", " << p[3] << "]";
}

} // namespace worldtube
