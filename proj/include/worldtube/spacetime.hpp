#pragma once

#include <array>
#include <cmath>
#include <ostream>

namespace worldtube {

/**
A spacetime vector in a fixed orthonormal basis, components (t, x, y, z),
with c = 1. The Lorentz product has signature (-,+,+,+).
*/
struct FourVector
{
    std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};

    constexpr FourVector() = default;
    constexpr FourVector(double t, double x, double y, double z) : c{t, x, y, z} {}

    constexpr double operator[](int i) const { return c[i]; }
    constexpr double& operator[](int i) { return c[i]; }

    constexpr FourVector& operator+=(const FourVector& o)
    {
        for (int i = 0; i < 4; ++i) c[i] += o.c[i];
        return *this;
    }
    constexpr FourVector& operator-=(const FourVector& o)
    {
        for (int i = 0; i < 4; ++i) c[i] -= o.c[i];
        return *this;
    }
    constexpr FourVector& operator*=(double s)
    {
        for (auto& x : c) x *= s;
        return *this;
    }

    static constexpr FourVector basis(int i)
    {
        FourVector e;
        e.c[i] = 1.0;
        return e;
    }

    friend constexpr bool operator==(const FourVector&, const FourVector&) = default;
};

constexpr FourVector operator+(FourVector a, const FourVector& b) { return a += b; }
constexpr FourVector operator-(FourVector a, const FourVector& b) { return a -= b; }
constexpr FourVector operator-(FourVector a) { return a *= -1.0; }
constexpr FourVector operator*(double s, FourVector a) { return a *= s; }
constexpr FourVector operator*(FourVector a, double s) { return a *= s; }
constexpr FourVector operator/(FourVector a, double s) { return a *= 1.0 / s; }

/** Metric diagonal: eta = diag(-1, 1, 1, 1). */
constexpr double metric(int i) { return i == 0 ? -1.0 : 1.0; }

constexpr double lorentz_product(const FourVector& v, const FourVector& w)
{
    return -v[0] * w[0] + v[1] * w[1] + v[2] * w[2] + v[3] * w[3];
}

/** Largest absolute component; the coordinate norm used for tolerances. */
inline double max_abs(const FourVector& v)
{
    double m = 0.0;
    for (double x : v.c) m = std::max(m, std::abs(x));
    return m;
}

/** Euclidean norm of the components in the global basis. */
inline double euclidean_norm(const FourVector& v)
{
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
}

/** An affine point of spacetime. Differences of events are vectors. */
struct Event
{
    std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};

    constexpr Event() = default;
    constexpr Event(double t, double x, double y, double z) : c{t, x, y, z} {}

    constexpr double operator[](int i) const { return c[i]; }

    static constexpr Event origin() { return {}; }

    friend constexpr bool operator==(const Event&, const Event&) = default;
};

constexpr Event operator+(Event p, const FourVector& v)
{
    for (int i = 0; i < 4; ++i) p.c[i] += v[i];
    return p;
}
constexpr Event operator-(Event p, const FourVector& v)
{
    for (int i = 0; i < 4; ++i) p.c[i] -= v[i];
    return p;
}
constexpr FourVector operator-(const Event& p, const Event& q)
{
    return {p[0] - q[0], p[1] - q[1], p[2] - q[2], p[3] - q[3]};
}

/**
A linear map on spacetime vectors, stored as the component matrix m[i][k]
so that (L.x)^i = sum_k m[i][k] x^k.
*/
class LinMap4
{
public:
    using Matrix = std::array<std::array<double, 4>, 4>;

    constexpr LinMap4() = default;
    constexpr explicit LinMap4(const Matrix& m) : m(m) {}

    static constexpr LinMap4 identity()
    {
        LinMap4 L;
        for (int i = 0; i < 4; ++i) L.m[i][i] = 1.0;
        return L;
    }

    constexpr double operator()(int i, int k) const { return m[i][k]; }
    constexpr double& operator()(int i, int k) { return m[i][k]; }

    constexpr FourVector operator*(const FourVector& x) const
    {
        FourVector y;
        for (int i = 0; i < 4; ++i)
            y[i] = m[i][0] * x[0] + m[i][1] * x[1] + m[i][2] * x[2] + m[i][3] * x[3];
        return y;
    }

    constexpr LinMap4 operator*(const LinMap4& o) const
    {
        LinMap4 r;
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k)
                for (int j = 0; j < 4; ++j) r.m[i][k] += m[i][j] * o.m[j][k];
        return r;
    }

    constexpr LinMap4& operator+=(const LinMap4& o)
    {
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k) m[i][k] += o.m[i][k];
        return *this;
    }
    constexpr LinMap4& operator-=(const LinMap4& o)
    {
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k) m[i][k] -= o.m[i][k];
        return *this;
    }
    constexpr LinMap4& operator*=(double s)
    {
        for (auto& row : m)
            for (auto& x : row) x *= s;
        return *this;
    }

    constexpr double trace() const { return m[0][0] + m[1][1] + m[2][2] + m[3][3]; }

    double max_abs() const
    {
        double r = 0.0;
        for (const auto& row : m)
            for (double x : row) r = std::max(r, std::abs(x));
        return r;
    }

    const Matrix& matrix() const { return m; }

private:
    Matrix m{};
};

constexpr LinMap4 operator+(LinMap4 a, const LinMap4& b) { return a += b; }
constexpr LinMap4 operator-(LinMap4 a, const LinMap4& b) { return a -= b; }
constexpr LinMap4 operator*(double s, LinMap4 a) { return a *= s; }

/**
A futurelike unit timelike vector (u.u = -1, u^0 > 0). Validated on
construction; never renormalized.
*/
class AbsoluteVelocity
{
public:
    /** Throws PreconditionError unless v is an absolute velocity. */
    explicit AbsoluteVelocity(const FourVector& v);

    static AbsoluteVelocity rest() { return AbsoluteVelocity(FourVector::basis(0)); }

    /** Velocity with rapidity alpha along the spatial direction (dx, dy, dz). */
    static AbsoluteVelocity from_rapidity(double alpha, double dx, double dy, double dz);

    const FourVector& vector() const { return v; }
    operator const FourVector&() const { return v; }
    double operator[](int i) const { return v[i]; }

private:
    FourVector v;
};

/** True when v.v = -1 and v^0 > 0 to relative tolerance tol * max(1, (v^0)^2). */
bool is_absolute_velocity(const FourVector& v, double tol = 1e-12);

/** (a (x) b).x = a (b.x) */
LinMap4 tensor(const FourVector& a, const FourVector& b);

/** L* with (L*.x).y = x.(L.y), i.e. eta^-1 L^T eta in components. */
LinMap4 adjoint(const LinMap4& L);

/** Rotation-free Lorentz boost carrying u to u2. */
LinMap4 boost(const AbsoluteVelocity& u, const AbsoluteVelocity& u2);

/** 1 + u (x) u : projection onto the u-spacelike vectors. */
LinMap4 spatial_projection(const AbsoluteVelocity& u);

/**
1 + u (x) u - n (x) n : projection onto the plane orthogonal to u and n.
Requires n.n = 1 and u.n = 0.
*/
LinMap4 plane_projection(const AbsoluteVelocity& u, const FourVector& n);

/**
Orthonormal basis {e1, e2, e3} of the u-spacelike subspace, obtained by
boosting the global spatial axes from rest to u. Deterministic.
*/
std::array<FourVector, 3> spatial_frame(const AbsoluteVelocity& u);

/**
Unit vectors a, b completing (u, n) to an orthonormal tetrad. Requires
u.n = 0 and n.n = 1.
*/
std::array<FourVector, 2> complete_tetrad(const AbsoluteVelocity& u, const FourVector& n);

std::ostream& operator<<(std::ostream& os, const FourVector& v);
std::ostream& operator<<(std::ostream& os, const Event& p);

} // namespace worldtube
