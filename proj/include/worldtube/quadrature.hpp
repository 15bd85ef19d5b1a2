#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace worldtube {

/** Nodes and weights of a one-dimensional quadrature rule. */
struct Rule1D
{
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

/** n-point Gauss-Legendre rule on [-1, 1]; n >= 1. Results are cached. */
const Rule1D& gauss_legendre(int n);

/** n-point Gauss-Legendre rule mapped to [a, b]. */
Rule1D gauss_legendre(int n, double a, double b);

/** panels x order composite Gauss-Legendre rule on [a, b]. */
Rule1D composite_gauss_legendre(double a, double b, int panels, int order);

/**
Pairwise (cascade) summation in fixed order. The result depends only on
the input sequence, so reductions are reproducible.
*/
template <class T>
T pairwise_sum(std::span<const T> xs)
{
    if (xs.empty()) return T{};
    if (xs.size() <= 8)
    {
        T acc = xs[0];
        for (std::size_t i = 1; i < xs.size(); ++i) acc += xs[i];
        return acc;
    }
    const std::size_t half = xs.size() / 2;
    T left = pairwise_sum(xs.first(half));
    left += pairwise_sum(xs.subspan(half));
    return left;
}

template <class T>
T pairwise_sum(const std::vector<T>& xs)
{
    return pairwise_sum(std::span<const T>(xs));
}

/** Worker count used by parallel_for; 0 selects hardware concurrency. */
void set_thread_count(int n);
int thread_count();

/**
Calls body(i) for i in [0, n) on the configured number of threads. The
first exception thrown by any call is rethrown after all workers join.
*/
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace worldtube
