/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <utility>
#include <vector>

#include "zrp/qseries.hpp"

/* Truncated Fock-space realization of the q-boson algebra
 *   k b = q b k,  k c = q^{-1} c k,  b c = 1 - k,  c b = 1 - q k,
 * acting on |0>,...,|N> by b|m> = |m+1>, c|m> = (1-q^m)|m-1>, k|m> = q^m|m>.
 *
 * Operators are stored as raw |m>-coefficient matrices: entry(i,j) is the
 * coefficient of |i> in Q|j>. The non-orthonormal pairing <m|m'> =
 * delta_{m,m'} (q)_m is folded into the trace and bracket routines instead
 * of the matrices, which keeps entries rational in (q, mu, y):
 *   Tr Q = sum_m <m|Q|m>/(q)_m = sum_m entry(m,m),
 *   <m|Q|l> = (q)_m entry(m,l).
 * A word with unbalanced creation/annihilation counts has an identically
 * zero diagonal, so such traces vanish exactly. Restricting to a sector with
 * at least one second-class particle keeps every trace finite; no explicit
 * projection is ever needed. */

namespace zrp::qboson {

template <class Real = double>
struct FockOperator {
    int cutoff = 0;                /* highest retained level N */
    std::vector<Real> a;           /* (N+1)x(N+1), row-major */

    FockOperator() = default;
    explicit FockOperator(int n) : cutoff(n), a(static_cast<size_t>(n + 1) * (n + 1), Real(0)) {
        if (n < 0) throw std::invalid_argument("FockOperator: cutoff must be >= 0");
    }

    int dim() const { return cutoff + 1; }
    Real& operator()(int i, int j) { return a[static_cast<size_t>(i) * dim() + j]; }
    Real operator()(int i, int j) const { return a[static_cast<size_t>(i) * dim() + j]; }

    static FockOperator identity(int n) {
        FockOperator id(n);
        for (int i = 0; i <= n; ++i) id(i, i) = Real(1);
        return id;
    }

    FockOperator operator*(const FockOperator& o) const {
        if (cutoff != o.cutoff) throw std::invalid_argument("FockOperator: cutoff mismatch");
        FockOperator r(cutoff);
        int n = dim();
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                Real aik = (*this)(i, k);
                if (aik == Real(0)) continue;
                for (int j = 0; j < n; ++j) r(i, j) += aik * o(k, j);
            }
        return r;
    }

    FockOperator& operator+=(const FockOperator& o) {
        if (cutoff != o.cutoff) throw std::invalid_argument("FockOperator: cutoff mismatch");
        for (size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
        return *this;
    }

    FockOperator& operator*=(Real s) {
        for (auto& v : a) v *= s;
        return *this;
    }
};

template <class Real = double>
FockOperator<Real> build_b(int n) {
    FockOperator<Real> op(n);
    for (int m = 0; m < n; ++m) op(m + 1, m) = Real(1);
    return op;
}

template <class Real = double>
FockOperator<Real> build_c(int n, Real q) {
    FockOperator<Real> op(n);
    for (int m = 1; m <= n; ++m) op(m - 1, m) = Real(1) - qseries::pow_int(q, m);
    return op;
}

template <class Real = double>
FockOperator<Real> build_k(int n, Real q) {
    FockOperator<Real> op(n);
    for (int m = 0; m <= n; ++m) op(m, m) = qseries::pow_int(q, m);
    return op;
}

/* Plain matrix trace = sum_m <m|Q|m>/(q)_m under the raw-coefficient
 * convention (truncated at the cutoff). */
template <class Real>
Real fock_trace(const FockOperator<Real>& op) {
    Real t = 0;
    for (int m = 0; m <= op.cutoff; ++m) t += op(m, m);
    return t;
}

/* <0|Q|0> with <0|0> = 1. */
template <class Real>
Real vacuum_expect(const FockOperator<Real>& op) {
    return op(0, 0);
}

/* <m|Q|l> including the pairing weight (q)_m. */
template <class Real>
Real bracket(const FockOperator<Real>& op, int m, int l, Real q) {
    if (m < 0 || l < 0 || m > op.cutoff || l > op.cutoff) return Real(0);
    return qseries::q_pochhammer(q, q, m) * op(m, l);
}

/* Matrix product operator for the local state (a1, a2): a1 first-class and
 * a2 second-class particles,
 *   X_{a1,a2} = (mu)_{a1+a2}/((q)_{a1}(q)_{a2}) sum_j g_j b^j k^{a2} c^{a1}.
 * On the truncated space the b-expansion terminates at b^N exactly. */
template <class Real = double>
FockOperator<Real> build_x(int a1, int a2, int n, Real q, Real mu) {
    if (a1 < 0 || a2 < 0) throw std::invalid_argument("build_x: occupancies must be >= 0");
    if (a1 > n)
        throw insufficient_cutoff("build_x: first-class occupancy exceeds the Fock cutoff");
    Real pref = qseries::q_pochhammer(mu, q, a1 + a2) /
                (qseries::q_pochhammer(q, q, a1) * qseries::q_pochhammer(q, q, a2));
    FockOperator<Real> op(n);
    for (int m = a1; m <= n; ++m) {
        /* c^{a1}|m> = (q)_m/(q)_{m-a1} |m-a1>, then k^{a2}, then sum_j g_j b^j */
        Real cfac = qseries::q_pochhammer(q, q, m) / qseries::q_pochhammer(q, q, m - a1);
        Real kfac = qseries::pow_int(q, static_cast<long long>(a2) * (m - a1));
        for (int j = 0; m - a1 + j <= n; ++j)
            op(m - a1 + j, m) = pref * cfac * kfac * qseries::g_factor(j, q, mu);
    }
    return op;
}
inline FockOperator<double> build_x(int a1, int a2, int n, const ModelParams& p) {
    return build_x<double>(a1, a2, n, p.q, p.mu);
}

/* Fugacity generating series over the second-class occupancy,
 *   A_d = sum_n y^n X_{d,n}
 *       = g_d sum_j g_j b^j diag((q^d mu y q^m)_inf/(y q^m)_inf) c^d. */
template <class Real = double>
FockOperator<Real> build_a(int d, Real y, int n, Real q, Real mu) {
    if (d < 0) throw std::invalid_argument("build_a: occupancy must be >= 0");
    if (d > n) throw insufficient_cutoff("build_a: occupancy exceeds the Fock cutoff");
    if (!(y >= Real(0) && y < Real(1))) throw zrp::domain_error("build_a: y must lie in [0,1)");
    Real gd = qseries::g_factor(d, q, mu);
    FockOperator<Real> op(n);
    for (int m = d; m <= n; ++m) {
        Real cfac = qseries::q_pochhammer(q, q, m) / qseries::q_pochhammer(q, q, m - d);
        Real qm = qseries::pow_int(q, m - d);
        Real diag = qseries::q_pochhammer_inf(qseries::pow_int(q, d) * mu * y * qm, q) /
                    qseries::q_pochhammer_inf(y * qm, q);
        for (int j = 0; m - d + j <= n; ++j)
            op(m - d + j, m) = gd * cfac * diag * qseries::g_factor(j, q, mu);
    }
    return op;
}
inline FockOperator<double> build_a(int d, double y, int n, const ModelParams& p) {
    return build_a<double>(d, y, n, p.q, p.mu);
}

/* Trace of the matrix product word X_{sigma_1}...X_{sigma_L} at a fixed
 * cutoff; sigma_i = (first-class, second-class) occupancies. */
template <class Real = double>
Real word_trace(const std::vector<std::pair<int, int>>& config, int n, Real q, Real mu) {
    if (config.empty()) throw std::invalid_argument("word_trace: empty configuration");
    FockOperator<Real> prod = build_x(config[0].first, config[0].second, n, q, mu);
    for (size_t i = 1; i < config.size(); ++i)
        prod = prod * build_x(config[i].first, config[i].second, n, q, mu);
    return fock_trace(prod);
}

/* Unnormalized stationary weight Tr(X_{sigma_1}...X_{sigma_L}) with the
 * cutoff N = m1 + m2 + t grown adaptively (t = 2, 4, 8, ...) until the
 * relative change drops below rel_tol. Requires at least one second-class
 * particle in the sector, otherwise the trace diverges. */
template <class Real = double>
Real stationary_probability(const std::vector<std::pair<int, int>>& config, Real q, Real mu,
                            Real rel_tol = Real(1e-10), int t_max = 512, int* t_used = nullptr) {
    int m1 = 0, m2 = 0;
    for (auto& [a1, a2] : config) {
        if (a1 < 0 || a2 < 0)
            throw std::invalid_argument("stationary_probability: occupancies must be >= 0");
        m1 += a1;
        m2 += a2;
    }
    if (m2 < 1)
        throw std::invalid_argument(
            "stationary_probability: sector needs at least one second-class particle");
    using std::abs;
    Real prev = word_trace(config, m1 + m2 + 2, q, mu);
    for (int t = 4; t <= t_max; t *= 2) {
        Real cur = word_trace(config, m1 + m2 + t, q, mu);
        if (abs(cur - prev) <= rel_tol * abs(cur)) {
            if (t_used) *t_used = t;
            return cur;
        }
        prev = cur;
    }
    throw insufficient_cutoff("stationary_probability: trace did not converge within t_max");
}
inline double stationary_probability(const std::vector<std::pair<int, int>>& config,
                                     const ModelParams& p) {
    return stationary_probability<double>(config, p.q, p.mu);
}

}  // namespace zrp::qboson
