#ifndef ABE_THEORY_HPP
#define ABE_THEORY_HPP

#include <utility>

#include "bregman.hpp"
#include "density.hpp"
#include "paths.hpp"

namespace abe {

// A theory quantity that can be a number, provably infinite, or not
// computable in this configuration (e.g. quadrature above two dimensions).
// Infinite divergences are a distinct state, never a large float.
struct TheoryValue {
    enum class State { ok, infinite, unavailable };
    double value = 0.0;
    State state = State::ok;

    static TheoryValue of(double v) { return {v, State::ok}; }
    static TheoryValue infinite() { return {0.0, State::infinite}; }
    static TheoryValue unavailable() { return {0.0, State::unavailable}; }
    bool ok() const { return state == State::ok; }
    bool is_infinite() const { return state == State::infinite; }
};

// D_chi2(p, q) = int p^2 / q - 1. Closed form between Gaussians through the
// log-partition; quadrature for mixtures in one or two dimensions. Returns the
// infinite signal when the tail condition fails.
TheoryValue chi2(const Density& p, const Density& q);

// Squared Hellinger distance between diagonal Gaussians, closed form, in [0,1].
double hellinger2(const GaussianDiag& p, const GaussianDiag& q);

// Quadrature fallback for mixtures (2 dims max); dispatches to the closed form
// for plain Gaussians.
TheoryValue hellinger2_density(const Density& p, const Density& q);

// Harmonic divergence with weight pi: 1 - int (pi/p + (1-pi)/q)^{-1}.
// Quadrature only (2 dims max).
TheoryValue harmonic(const Density& p, const Density& q, double pi_weight);

// Leading-order MSE of the binary estimators (IS, RevIS, NCE, IS-RevIS) for a
// total budget N split nu:1 between lower and upper class.
TheoryValue mse_pred_binary(Loss loss, const Density& p0, const Density& p1,
                            double n_total, double nu);

// Time-parameterized Fisher information I(t) of the normalized path.
// Geometric: exact via natural/mean parameters; arithmetic and optimal: x-space
// quadrature with analytic time derivatives (2 dims max).
double fisher_info_time(const PathSpec& spec, double t);

// int_0^1 I(t) dt by panel-doubling composite Gauss-Legendre.
double fisher_rao_length(const PathSpec& spec, int order = 24,
                         double rel_tol = 3e-5);

// Finite-K prediction: sum over steps of mse_pred_binary on consecutive
// normalized grid points with per-step budget N/K.
TheoryValue mse_pred_annealed(const PathSpec& spec, int K, double n_total,
                              Loss loss, double nu = 1.0);

struct TheoremBounds {
    double m_const = 0.0; // strong convexity over the parameter segment
    double l_const = 0.0; // smoothness over the parameter segment
    double param_distance = 0.0;
    double binary_lower_bound = 0.0;          // (4/N)(exp(M d^2/8) - 1)
    double geometric_upper_bound = 0.0;          // L^2 d^2 / (M N)
    TheoryValue vanilla_lower_bound;           // (1/3N)(1/Z1 + 1 + Z1) D_phi(p1,p0)
    double oracle_upper_bound = 0.0;          // (2 + L d^2) / N
};

TheoremBounds theorem_bounds(const GaussianDiag& p0, const UnnormalizedModel& f1,
                             double n_total);

// Both sides of the mixture chi-square lemma: lhs = D_chi2(p, w p + (1-w) q),
// rhs = D_chi2(p, q) + 1.
std::pair<double, double> chi2_mixture_bound_check(const Density& p,
                                                   const Density& q, double w);

struct TheoryReport {
    int k = 1;
    double n_total = 0.0;
    double nu = 1.0;
    PathKind path = PathKind::geometric;
    ScheduleKind schedule = ScheduleKind::vanilla;

    TheoryValue d_chi2_fwd; // D_chi2(p1, p0)
    TheoryValue d_chi2_rev; // D_chi2(p0, p1)
    double d_hellinger2 = 0.0;
    TheoryValue d_harmonic;
    double epsilon = 0.0; // Bhattacharyya overlap, 1 - DH2

    TheoryValue mse_binary_is;
    TheoryValue mse_binary_revis;
    TheoryValue mse_binary_nce;
    TheoryValue mse_binary_is_revis;

    TheoryValue fisher_rao_len; // of the requested path
    TheoryValue mse_annealed;   // requested path, K steps, NCE loss

    double alpha_h_value = 0.0;
    double optimal_fisher_rao = 0.0; // 16 alpha_H^2
    double optimal_mse = 0.0;        // 16 alpha_H^2 / N

    TheoremBounds bounds;
};

TheoryReport make_theory_report(const GaussianDiag& p0,
                                const UnnormalizedModel& f1,
                                const PathSpec& path, int K, double n_total,
                                double nu = 1.0);

} // namespace abe

#endif
