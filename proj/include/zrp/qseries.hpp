/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <cmath>
#include <limits>

#include "zrp/params.hpp"

/* Scalar q-series building blocks: finite and infinite q-Pochhammer symbols,
 * q-binomials, the q-digamma function f and its derivative h governing the
 * density and the currents, the normalization Lambda(y), the decay modes
 * eta_m, the spectral-parameter weight phi(l|m), and the bijection between
 * the fugacity y in (0,1) and the average density rho in (0,infinity).
 *
 * Everything is templated on the scalar type; double is the working
 * precision and a wider type (long double, software quad) can be substituted
 * for cancellation-sensitive cross checks. All functions are pure. */

namespace zrp::qseries {

inline constexpr double default_tol = 1e-14;

template <class Real>
Real pow_int(Real x, long long n) {
    Real r = 1;
    for (; n > 0; n >>= 1, x *= x)
        if (n & 1) r *= x;
    return r;
}

/* Finite q-shifted factorial (z;q)_m = prod_{j=0}^{m-1} (1 - z q^j).
 * Total in z and q; (z;q)_0 = 1. Factors use the same q^j as pow_int so
 * that (z)_{m+1} = (z)_m (1 - z q^m) holds bit-exactly. */
template <class Real>
Real q_pochhammer(Real z, Real q, int m) {
    if (m < 0) throw std::invalid_argument("q_pochhammer: m must be >= 0");
    Real prod = 1;
    for (int j = 0; j < m; ++j) prod *= Real(1) - z * pow_int(q, j);
    return prod;
}

/* 1 - q^i evaluated as -expm1(i log q), which stays accurate for q near 1. */
template <class Real>
Real one_minus_qpow(Real q, long long i) {
    using std::expm1;
    using std::log;
    if (i == 0) return Real(0);
    return -expm1(Real(i) * log(q));
}

/* Infinite product (z;q)_inf for |z| < 1, 0 < q < 1, with relative error
 * <= tol. Two exact routes: the direct product truncated once the factor
 * deviation |z q^j| drops below tol*(1-q) (geometric tail bound), and the
 * logarithmic series log (z;q)_inf = -sum_{k>=1} z^k / (k (1-q^k)) whose
 * terms decay like z^k. The faster base min(|z|, q) decides the route, so
 * small-z evaluations stay cheap even for q extremely close to 1. */
template <class Real>
Real q_pochhammer_inf(Real z, Real q, Real tol = Real(default_tol)) {
    using std::abs;
    using std::exp;
    if (!(q > Real(0) && q < Real(1)))
        throw zrp::domain_error("q_pochhammer_inf: q must lie in (0,1)");
    if (!(tol > Real(0))) throw std::invalid_argument("q_pochhammer_inf: tol must be > 0");
    if (z == Real(0)) return Real(1);
    if (abs(z) >= Real(1))
        throw zrp::domain_error("q_pochhammer_inf: |z| >= 1 lies outside the convergence domain");

    if (abs(z) < q) {
        Real sum = 0, zk = z;
        for (long long k = 1;; ++k) {
            Real term = zk / (Real(k) * one_minus_qpow(q, k));
            sum += term;
            /* remaining tail < |term| * |z| / (1-|z|) */
            if (abs(term) * abs(z) <= tol * (Real(1) - abs(z))) break;
            zk *= z;
        }
        return exp(-sum);
    }

    Real prod = 1, zq = z;
    while (abs(zq) >= tol * (Real(1) - q)) {
        prod *= Real(1) - zq;
        zq *= q;
    }
    return prod;
}

/* q-binomial coefficient; zero unless 0 <= k <= m. */
template <class Real>
Real q_binomial(int m, int k, Real q) {
    if (m < 0) throw std::invalid_argument("q_binomial: m must be >= 0");
    if (k < 0 || k > m) return Real(0);
    if (2 * k > m) k = m - k;
    /* (q^{m-k+1};q)_k / (q;q)_k, products of equal length */
    Real num = 1, den = 1;
    for (int j = 1; j <= k; ++j) {
        num *= Real(1) - pow_int(q, m - k + j);
        den *= Real(1) - pow_int(q, j);
    }
    return num / den;
}

/* g_m = (mu;q)_m / (q;q)_m, the ubiquitous expansion weight of the
 * operator-valued infinite product. */
template <class Real>
Real g_factor(int m, Real q, Real mu) {
    if (m < 0) throw std::invalid_argument("g_factor: m must be >= 0");
    Real g = 1, mup = mu, qp = q;
    for (int j = 0; j < m; ++j) {
        g *= (Real(1) - mup) / (Real(1) - qp);
        mup *= q;
        qp *= q;
    }
    return g;
}
inline double g_factor(int m, const ModelParams& p) { return g_factor<double>(m, p.q, p.mu); }

/* q-digamma function f(zeta) = sum_{i>=1} zeta^i / (1-q^i)
 *                            = sum_{i>=0} zeta q^i / (1 - zeta q^i),
 * strictly increasing from 0 to infinity on [0,1). The first series decays
 * like zeta, the second like q; the cheaper one is used. */
template <class Real>
Real f_digamma(Real zeta, Real q, Real tol = Real(default_tol)) {
    using std::abs;
    if (!(zeta >= Real(0) && zeta < Real(1)))
        throw zrp::domain_error("f_digamma: zeta must lie in [0,1)");
    if (zeta == Real(0)) return Real(0);

    if (zeta < q) {
        Real sum = 0, zi = zeta;
        for (long long i = 1;; ++i) {
            Real term = zi / one_minus_qpow(q, i);
            sum += term;
            if (term * zeta <= tol * sum * (Real(1) - zeta)) break;
            zi *= zeta;
        }
        return sum;
    }

    Real sum = 0, zq = zeta;
    for (;;) {
        Real term = zq / (Real(1) - zq);
        sum += term;
        if (term * q <= tol * sum * (Real(1) - q)) break;
        zq *= q;
    }
    return sum;
}

/* h(zeta) = zeta f'(zeta) = sum_{i>=1} i zeta^i / (1-q^i)
 *                         = sum_{i>=0} zeta q^i / (1 - zeta q^i)^2.
 * Satisfies the shift identity
 *   h(q^i zeta) = h(zeta) - sum_{k<i} zeta q^k / (1 - zeta q^k)^2. */
template <class Real>
Real h_deriv(Real zeta, Real q, Real tol = Real(default_tol)) {
    if (!(zeta >= Real(0) && zeta < Real(1)))
        throw zrp::domain_error("h_deriv: zeta must lie in [0,1)");
    if (zeta == Real(0)) return Real(0);

    if (zeta < q && zeta < Real(0.45)) {
        /* term ratio <= 2 zeta < 1, so tail_i < term_i * 2 zeta / (1 - 2 zeta) */
        Real sum = 0, zi = zeta;
        for (long long i = 1;; ++i) {
            Real term = Real(i) * zi / one_minus_qpow(q, i);
            sum += term;
            if (term * Real(2) * zeta <= tol * sum * (Real(1) - Real(2) * zeta)) break;
            zi *= zeta;
        }
        return sum;
    }

    Real sum = 0, zq = zeta;
    for (;;) {
        Real d = Real(1) - zq;
        Real term = zq / (d * d);
        sum += term;
        if (term * q <= tol * sum * (Real(1) - q)) break;
        zq *= q;
    }
    return sum;
}

/* Lambda(y) = (mu y;q)_inf / (y;q)_inf >= 1, the one-site normalization of
 * the grand canonical weight. */
template <class Real>
Real lambda_y(Real y, Real q, Real mu, Real tol = Real(default_tol)) {
    if (!(y >= Real(0) && y < Real(1)))
        throw zrp::domain_error("lambda_y: y must lie in [0,1)");
    if (y == Real(0)) return Real(1);
    return q_pochhammer_inf(mu * y, q, tol) / q_pochhammer_inf(y, q, tol);
}
inline double lambda_y(double y, const ModelParams& p) { return lambda_y<double>(y, p.q, p.mu); }

/* eta_m(y) = Lambda(q^m y)/Lambda(y) = (y;q)_m / (mu y;q)_m. Strictly
 * decreasing in m from eta_0 = 1; controls the exponential decay of the
 * defect influence. Satisfies the cocycle eta_{i+j}(y) = eta_i(y) eta_j(q^i y). */
template <class Real>
Real eta(int m, Real y, Real q, Real mu) {
    return q_pochhammer(y, q, m) / q_pochhammer(mu * y, q, m);
}
inline double eta(int m, double y, const ModelParams& p) { return eta<double>(m, y, p.q, p.mu); }

/* eta_infinity = (y;q)_inf / (mu y;q)_inf = 1/Lambda(y), the limit of the
 * decreasing mode sequence, evaluated as a converged infinite product. */
template <class Real>
Real eta_inf(Real y, Real q, Real mu, Real tol = Real(default_tol)) {
    return q_pochhammer_inf(y, q, tol) / q_pochhammer_inf(mu * y, q, tol);
}

/* eta_j(y)^r in log space; exact 0 below 1e-300 (optionally reported
 * through *underflowed, for long-distance tails). */
template <class Real>
Real eta_pow(int j, long long r, Real y, Real q, Real mu, bool* underflowed = nullptr) {
    using std::exp;
    using std::log;
    if (r == 0 || j == 0) return Real(1);
    Real e = eta(j, y, q, mu);
    if (e <= Real(0)) return Real(0);
    Real lg = Real(r) * log(e);
    if (lg < Real(-690.0)) { /* exp(-690) < 1e-299 */
        if (underflowed) *underflowed = true;
        return Real(0);
    }
    return exp(lg);
}

/* Average density of second-class particles at fugacity y:
 * rho(y) = f(y) - f(mu y), strictly increasing from 0 to infinity. */
inline double density(double y, const ModelParams& p, double tol = default_tol) {
    if (!(y >= 0.0 && y < 1.0)) throw zrp::domain_error("density: y must lie in [0,1)");
    return f_digamma<double>(y, p.q, tol) - f_digamma<double>(p.mu * y, p.q, tol);
}

/* Inverts rho(y) = f(y) - f(mu y) on y in (0,1): bracketing bisection to a
 * width of 1e-8 followed by two Newton polish steps, safe because the target
 * is smooth and strictly increasing. |rho(y) - rho| <= tol*max(1,rho). */
inline double solve_fugacity(double rho, const ModelParams& p, double tol = 1e-12) {
    if (!(rho > 0.0)) throw std::invalid_argument("solve_fugacity: rho must be > 0");

    double lo = 0.0, hi = 1.0 - 1e-16;
    /* make sure the upper end actually brackets rho (it does: density
     * diverges as y->1, but stay clear of the pole when rho is modest) */
    while (hi - lo > 1e-8) {
        double mid = 0.5 * (lo + hi);
        if (density(mid, p) < rho)
            lo = mid;
        else
            hi = mid;
    }
    double y = 0.5 * (lo + hi);
    for (int it = 0; it < 2; ++it) {
        double r = density(y, p) - rho;
        /* d rho / dy = (h(y) - h(mu y)) / y */
        double dr = (h_deriv<double>(y, p.q) - h_deriv<double>(p.mu * y, p.q)) / y;
        double step = r / dr;
        double yn = y - step;
        if (yn > lo && yn < hi) y = yn;
    }
    /* fall back to more bisection in the (unobserved) case Newton stalls */
    if (std::abs(density(y, p) - rho) > tol * std::max(1.0, rho)) {
        while (hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi) {
            double mid = 0.5 * (lo + hi);
            if (density(mid, p) < rho)
                lo = mid;
            else
                hi = mid;
        }
        y = 0.5 * (lo + hi);
    }
    return y;
}

/* phi(l|m) = y^l (mu;q)_l (y;q)_{m-l} / (mu y;q)_m * binom_q(m,l), the
 * single-species vertex weight with the fugacity y as spectral parameter;
 * zero outside 0 <= l <= m, and sum_l phi(l|m) = 1. */
template <class Real>
Real phi(int l, int m, Real y, Real q, Real mu) {
    if (l < 0 || m < 0 || l > m) return Real(0);
    return pow_int(y, l) * q_pochhammer(mu, q, l) * q_pochhammer(y, q, m - l) /
           q_pochhammer(mu * y, q, m) * q_binomial(m, l, q);
}
inline double phi(int l, int m, double y, const ModelParams& p) {
    return phi<double>(l, m, y, p.q, p.mu);
}

}  // namespace zrp::qseries

namespace zrp {

/* A grand canonical ensemble point: the fugacity y in (0,1) and the average
 * density rho in (0,inf), one derived from the other through
 * rho = f(y) - f(mu y). */
struct EnsembleParams {
    double y;
    double rho;

    static EnsembleParams from_fugacity(double y, const ModelParams& p) {
        if (!(y > 0.0 && y < 1.0))
            throw zrp::domain_error("EnsembleParams: y must lie in (0,1)");
        return {y, qseries::density(y, p)};
    }
    static EnsembleParams from_density(double rho, const ModelParams& p) {
        double y = qseries::solve_fugacity(rho, p);
        return {y, rho};
    }
};

}  // namespace zrp
