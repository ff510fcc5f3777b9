#include "quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "errors.hpp"

namespace abe {

namespace {

// Newton iteration on P_n with cosine initial guesses; nodes symmetric.
GaussLegendre compute_gl(int n) {
    GaussLegendre gl;
    gl.nodes.resize(n);
    gl.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        gl.nodes[i] = -z;
        gl.nodes[n - 1 - i] = z;
        gl.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        gl.weights[n - 1 - i] = gl.weights[i];
    }
    return gl;
}

} // namespace

const GaussLegendre& GaussLegendre::order(int n) {
    require(n >= 1, ErrorCode::invalid_argument, "quadrature order must be >= 1");
    static std::map<int, GaussLegendre> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gl(n)).first;
    return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 int panels, int order) {
    const GaussLegendre& gl = GaussLegendre::order(order);
    const double h = (b - a) / panels;
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i)
            acc += gl.weights[i] * f(mid + 0.5 * h * gl.nodes[i]);
    }
    return acc * 0.5 * h;
}

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, int initial_panels,
                          int order, int max_doublings) {
    int panels = initial_panels;
    double prev = integrate(f, a, b, panels, order);
    require(std::isfinite(prev), ErrorCode::nonfinite,
            "integrand non-finite at a quadrature node");
    for (int k = 0; k < max_doublings; ++k) {
        panels *= 2;
        const double cur = integrate(f, a, b, panels, order);
        require(std::isfinite(cur), ErrorCode::nonfinite,
                "integrand non-finite at a quadrature node");
        if (std::abs(cur - prev) <= rel_tol * std::abs(cur) + 1e-300)
            return cur;
        prev = cur;
    }
    return prev;
}

double integrate2d(const std::function<double(double, double)>& f, double ax,
                   double bx, double ay, double by, int panels, int order) {
    return integrate(
        [&](double x) {
            return integrate([&](double y) { return f(x, y); }, ay, by, panels,
                             order);
        },
        ax, bx, panels, order);
}

double trapezoid(const std::function<double(double)>& f, double a, double b,
                 long npoints) {
    require(npoints >= 2, ErrorCode::invalid_argument,
            "trapezoid needs >= 2 points");
    const double h = (b - a) / (npoints - 1);
    double acc = 0.5 * (f(a) + f(b));
    for (long i = 1; i + 1 < npoints; ++i) acc += f(a + i * h);
    return acc * h;
}

} // namespace abe
