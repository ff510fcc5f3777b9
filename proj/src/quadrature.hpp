#ifndef ABE_QUADRATURE_HPP
#define ABE_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace abe {

// Gauss-Legendre nodes/weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    static const GaussLegendre& order(int n); // cached per order
};

// Composite Gauss-Legendre over [a, b] split into `panels` equal panels.
double integrate(const std::function<double(double)>& f, double a, double b,
                 int panels = 8, int order = 32);

// Panel-doubling until successive values agree to rel_tol (with a small
// absolute floor). Errors if a node value is non-finite.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol = 1e-7,
                          int initial_panels = 4, int order = 32,
                          int max_doublings = 12);

// Tensorized 2D version over [ax,bx] x [ay,by].
double integrate2d(const std::function<double(double, double)>& f, double ax,
                   double bx, double ay, double by, int panels = 8,
                   int order = 32);

// Plain trapezoid rule with npoints points (oracle-style cross checks).
double trapezoid(const std::function<double(double)>& f, double a, double b,
                 long npoints);

} // namespace abe

#endif
