#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "hopset/costs.hpp"

namespace hopset {

/// Per-scale derived quantities. Distance thresholds shrink geometrically from
/// the scale's window top 2^(k+1); radius_bound[i] caps the i-hop radius every
/// phase-i cluster is guaranteed to respect.
struct ScaleParams {
    int k = 0;
    double eps_prev = 0.0;  // stretch slack already accumulated below this scale
    double alpha = 0.0;     // phase-0 distance threshold
    std::vector<double> delta;      // delta[i], i in [0, ell]
    std::vector<double> delta_hat;  // (1+eps_prev) * delta[i]
    std::vector<double> radius_bound;  // R[i], i in [0, ell]
};

/// Every derived constant of one hopset build.
struct ParameterSchedule {
    int n = 1;
    int padded_n = 1;
    int log_n = 0;  // log2 of the padded power-of-two vertex count
    double eps_user = 0.0;
    double eps_internal = 0.0;
    double eps_prime = 0.0;   // single-scale slack after one rescaling step
    double eps_dprime = 0.0;  // slack accumulated over all scales
    bool rescaled = false;
    bool eps_assumption_ok = false;  // eps_internal < 1/(2(4 log n + 1))
    int kappa = 2;
    double rho = 0.25;
    double aspect = 1.0;  // Lambda
    int lambda = -1;      // top scale index, ceil(log2 aspect) - 1
    int i0 = 0;           // last phase of the exponential growth stage (may be -1)
    int ell = 2;          // index of the final phase
    std::vector<long long> deg;  // deg[i], i in [0, ell]
    std::vector<double> h;       // hop budget recursion, h[i]
    double beta = 1.0;           // h[ell]
    std::uint64_t beta_hops = 1; // beta clamped for use as a hop bound
    int k0 = 0;                  // floor(log2 beta); layers below are empty
    std::vector<double> sigma;   // memory-path hop budgets, sigma[i]
    double sigma_cap = 0.0;      // 2*sigma[ell] + 2*beta + 1
    bool vacuous = false;        // k0 > lambda: every layer is empty
    bool beta_exceeds_n = false; // hopset vacuous at this scale: plain search is cheaper

    /// Cumulative stretch slack of the graph used to explore for layer k+1,
    /// i.e. the slack after layer k. Zero below k0.
    double eps_after(int k) const {
        if (k < k0) return 0.0;
        return std::pow(1.0 + eps_prime, k - k0 + 1) - 1.0;
    }

    ScaleParams scale(int k) const {
        ScaleParams sp;
        sp.k = k;
        sp.eps_prev = eps_after(k - 1);
        sp.alpha = std::ldexp(1.0, k + 1) * std::pow(eps_internal, ell);
        sp.delta.resize(static_cast<size_t>(ell) + 1);
        sp.delta_hat.resize(static_cast<size_t>(ell) + 1);
        for (int i = 0; i <= ell; ++i) {
            // delta[ell] lands exactly on the window top 2^(k+1)
            sp.delta[static_cast<size_t>(i)] =
                std::ldexp(1.0, k + 1) * std::pow(eps_internal, ell - i);
            sp.delta_hat[static_cast<size_t>(i)] =
                (1.0 + sp.eps_prev) * sp.delta[static_cast<size_t>(i)];
        }
        sp.radius_bound.resize(static_cast<size_t>(ell) + 1);
        sp.radius_bound[0] = 0.0;
        for (int i = 0; i < ell; ++i)
            sp.radius_bound[static_cast<size_t>(i) + 1] =
                (2.0 * sp.delta_hat[static_cast<size_t>(i)] + 4.0 * sp.radius_bound[static_cast<size_t>(i)]) *
                    log_n +
                sp.radius_bound[static_cast<size_t>(i)];
        return sp;
    }
};

namespace detail {

inline int ceil_log2_double(double x) {  // smallest c with 2^c >= x, x >= 1
    int c = 0;
    while (std::ldexp(1.0, c) < x) ++c;
    return c;
}

inline ParameterSchedule schedule_common(int n, double eps_internal, int kappa, double rho,
                                         double aspect) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (kappa < 2) throw std::invalid_argument("kappa must be an integer >= 2");
    if (!(rho > 0.0) || !(rho < 0.5)) throw std::invalid_argument("rho must lie in (0, 1/2)");
    if (!(aspect >= 1.0)) throw std::invalid_argument("aspect ratio must be >= 1");
    if (!(eps_internal > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (eps_internal < 1e-14)
        throw std::domain_error("internal epsilon collapsed below machine precision");

    ParameterSchedule s;
    s.n = n;
    s.log_n = ceil_log2(static_cast<std::uint64_t>(n));
    s.padded_n = 1 << s.log_n;
    s.eps_internal = eps_internal;
    s.kappa = kappa;
    s.rho = rho;
    s.aspect = aspect;
    s.lambda = ceil_log2_double(aspect) - 1;

    const double kr = static_cast<double>(kappa) * rho;
    s.i0 = static_cast<int>(std::floor(std::log2(kr)));
    s.ell = s.i0 + static_cast<int>(std::ceil((kappa + 1) / kr)) - 1;

    s.deg.resize(static_cast<size_t>(s.ell) + 1);
    for (int i = 0; i <= s.ell; ++i) {
        const double expo = i <= s.i0 ? std::ldexp(1.0, i) / kappa : rho;
        s.deg[static_cast<size_t>(i)] =
            static_cast<long long>(std::ceil(std::pow(static_cast<double>(n), expo)));
    }

    s.h.resize(static_cast<size_t>(s.ell) + 1);
    s.h[0] = 1.0;
    for (int i = 1; i <= s.ell; ++i)
        s.h[static_cast<size_t>(i)] =
            (1.0 / eps_internal + 2.0) * (s.h[static_cast<size_t>(i) - 1] + 1.0) + 2.0 * i + 1.0;
    s.beta = s.h[static_cast<size_t>(s.ell)];
    s.beta_hops = s.beta < 9.0e18 ? static_cast<std::uint64_t>(s.beta)
                                  : std::numeric_limits<std::uint64_t>::max() / 4;
    s.k0 = std::ilogb(s.beta);

    const int L = s.log_n;
    s.sigma.resize(static_cast<size_t>(s.ell) + 1);
    s.sigma[0] = 0.0;
    for (int i = 0; i < s.ell; ++i)
        s.sigma[static_cast<size_t>(i) + 1] =
            (4.0 * L + 1.0) * s.sigma[static_cast<size_t>(i)] + 2.0 * (2.0 * s.beta + 1.0) * L;
    s.sigma_cap = 2.0 * s.sigma[static_cast<size_t>(s.ell)] + 2.0 * s.beta + 1.0;

    s.eps_assumption_ok = eps_internal < 1.0 / (2.0 * (4.0 * L + 1.0));
    s.vacuous = s.k0 > s.lambda;
    s.beta_exceeds_n = s.beta >= static_cast<double>(n);
    return s;
}

}  // namespace detail

/// Schedule with the construction epsilon chosen so the user-facing stretch
/// after accumulating every scale is 1 + eps_user.
inline ParameterSchedule compute_schedule(int n, double eps_user, int kappa, double rho,
                                          double aspect) {
    if (!(eps_user > 0.0) || !(eps_user <= 1.0))
        throw std::invalid_argument("epsilon must lie in (0, 1]");
    // derive ell and log n first; they feed the rescaling denominator
    ParameterSchedule probe = detail::schedule_common(n, 0.5, kappa, rho, aspect);
    const int lam = std::max(probe.lambda, 1);
    const int L = std::max(probe.log_n, 1);
    const double eps_prime = eps_user / (2.0 * lam);
    const double eps_internal = eps_prime / (20.0 * L * (probe.ell + 1));
    ParameterSchedule s = detail::schedule_common(n, eps_internal, kappa, rho, aspect);
    s.rescaled = true;
    s.eps_user = eps_user;
    s.eps_prime = 20.0 * L * eps_internal * (s.ell + 1);
    s.eps_dprime = 2.0 * lam * s.eps_prime;
    return s;
}

/// Schedule driven directly by the construction epsilon (no rescaling); the
/// implied user-facing slack is reported in eps_dprime.
inline ParameterSchedule compute_schedule_raw(int n, double eps_internal, int kappa, double rho,
                                              double aspect) {
    ParameterSchedule s = detail::schedule_common(n, eps_internal, kappa, rho, aspect);
    s.rescaled = false;
    const int lam = std::max(s.lambda, 1);
    const int L = std::max(s.log_n, 1);
    s.eps_prime = 20.0 * L * eps_internal * (s.ell + 1);
    s.eps_dprime = 2.0 * lam * s.eps_prime;
    s.eps_user = s.eps_dprime;
    return s;
}

}  // namespace hopset
