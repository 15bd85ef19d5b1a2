#include "worldtube/quadrature.hpp"
#include "worldtube/errors.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

namespace worldtube {

namespace {

Rule1D build_gauss_legendre(int n)
{
    Rule1D rule;
    // legendre_p_zeros returns the nonnegative roots in increasing order
    const auto positive = boost::math::legendre_p_zeros<double>(n);
    std::vector<double> roots;
    for (auto it = positive.rbegin(); it != positive.rend(); ++it)
        if (*it != 0.0) roots.push_back(-*it);
    for (double x : positive) roots.push_back(x);

    for (double x : roots)
    {
        const double dp = boost::math::legendre_p_prime<double>(n, x);
        rule.nodes.push_back(x);
        rule.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
    }
    return rule;
}

std::atomic<int> configured_threads{0};

} // namespace

const Rule1D& gauss_legendre(int n)
{
    if (n < 1) throw PreconditionError("Gauss-Legendre order must be >= 1");
    static std::mutex lock;
    static std::map<int, Rule1D> cache;
    std::lock_guard guard(lock);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_gauss_legendre(n)).first;
    return it->second;
}

Rule1D gauss_legendre(int n, double a, double b)
{
    const Rule1D& ref = gauss_legendre(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    Rule1D r;
    r.nodes.reserve(ref.size());
    r.weights.reserve(ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i)
    {
        r.nodes.push_back(mid + half * ref.nodes[i]);
        r.weights.push_back(half * ref.weights[i]);
    }
    return r;
}

Rule1D composite_gauss_legendre(double a, double b, int panels, int order)
{
    if (panels < 1) throw PreconditionError("composite rule needs at least one panel");
    Rule1D r;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p)
    {
        const Rule1D piece = gauss_legendre(order, a + p * h, a + (p + 1) * h);
        r.nodes.insert(r.nodes.end(), piece.nodes.begin(), piece.nodes.end());
        r.weights.insert(r.weights.end(), piece.weights.begin(), piece.weights.end());
    }
    return r;
}

void set_thread_count(int n)
{
    configured_threads = std::max(0, n);
}

int thread_count()
{
    const int n = configured_threads;
    if (n > 0) return n;
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body)
{
    const std::size_t workers = std::min<std::size_t>(thread_count(), n);
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    constexpr std::size_t chunk = 64;

    auto work = [&] {
        for (;;)
        {
            const std::size_t start = next.fetch_add(chunk);
            if (start >= n) return;
            const std::size_t stop = std::min(n, start + chunk);
            try
            {
                for (std::size_t i = start; i < stop; ++i) body(i);
            }
            catch (...)
            {
                std::lock_guard guard(failure_lock);
                if (!failure) failure = std::current_exception();
                next = n;
                return;
            }
        }
    };

    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w + 1 < workers; ++w) pool.emplace_back(work);
    work();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

} // namespace worldtube
