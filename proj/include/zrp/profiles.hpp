/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <cmath>
#include <vector>

#include "zrp/defect_kernel.hpp"
#include "zrp/qseries.hpp"

/* Closed-form stationary observables of the second-class particles in the
 * infinite volume limit, conditioned on the defect cluster (d_1,...,d_s) at
 * sites 1..s: the occupancy law P(r,n), the local density rho(r) and the
 * local currents J(r)_+/-, in the three regions
 *   I: 1 <= r <= s (inside),  II: r > s (right),  III: r <= 0 (left).
 * Region III coincides with the defect-free baseline exactly; region II
 * relaxes to it exponentially in the decay modes eta_j. The formulas are the
 * vacuum-expectation reductions of the ring traces, so every sum below is
 * finite apart from the occupancy sums, which converge geometrically in y. */

namespace zrp::profiles {

using defect_kernel::GKernel;
using qseries::eta;
using qseries::eta_pow;
using qseries::h_deriv;
using qseries::pow_int;
using qseries::q_pochhammer;

enum class Region { I, II, III };

inline Region region_of(int r, int s) {
    if (r <= 0) return Region::III;
    return r <= s ? Region::I : Region::II;
}

/* ----- defect-free baseline ----- */

/* P(n) = y^n (mu)_n/(q)_n (y)_inf/(mu y)_inf */
inline double baseline_p(int n, double y, const ModelParams& p) {
    if (n < 0) return 0.0;
    if (!(y > 0.0 && y < 1.0)) throw zrp::domain_error("baseline_p: y must lie in (0,1)");
    return pow_int(y, n) * qseries::g_factor(n, p) / qseries::lambda_y(y, p);
}

/* J_+ = mu^{-1} h(mu y), J_- = h(y) */
struct CurrentPair {
    double plus;
    double minus;
};

inline CurrentPair baseline_currents(double y, const ModelParams& p) {
    if (!(y > 0.0 && y < 1.0)) throw zrp::domain_error("baseline_currents: y must lie in (0,1)");
    return {h_deriv<double>(p.mu * y, p.q) / p.mu, h_deriv<double>(y, p.q)};
}

/* ----- region I (inside the defect cluster) ----- */

/* The region-I formulas at site r depend only on the prefix (d_1,...,d_r);
 * they accept a raw prefix vector so that zero-extended patterns (used to
 * reach region II) are expressible. */

inline GKernel<double> prefix_kernel(const std::vector<int>& d, int r, double y,
                                     const ModelParams& p) {
    if (r < 1 || r > static_cast<int>(d.size()))
        throw std::invalid_argument("profiles: site r must lie inside the pattern prefix");
    return GKernel<double>(std::vector<int>(d.begin(), d.begin() + r), y, p.q, p.mu);
}

namespace detail {

/* P(r,n) from a vacuum kernel row and the occupancy d_r at the observed
 * site:
 *   y^n (q^{d_r} mu)_n (y)_inf / ((q)_n (mu y)_inf)
 *     * sum_m q^{n(m-d_r)} (mu y)_m/(y)_{m-d_r} row[m] */
inline double p_from_row(int n, int dr, const std::vector<double>& row, double y,
                         const ModelParams& p) {
    if (n < 0) return 0.0;
    double msum = 0.0;
    for (int m = dr; m < static_cast<int>(row.size()); ++m) {
        if (row[static_cast<size_t>(m)] == 0.0) continue;
        msum += pow_int(p.q, static_cast<long long>(n) * (m - dr)) *
                q_pochhammer(p.mu * y, p.q, m) / q_pochhammer(y, p.q, m - dr) *
                row[static_cast<size_t>(m)];
    }
    return pow_int(y, n) * q_pochhammer(pow_int(p.q, dr) * p.mu, p.q, n) /
           q_pochhammer(p.q, p.q, n) / qseries::lambda_y(y, p) * msum;
}

/* rho(r) - rho = sum_m row[m] [ sum_{k<m} mu y q^k/(1-mu y q^k)
 *                              - sum_{k<m-d_r} y q^k/(1-y q^k) ] */
inline double rho_excess_from_row(int dr, const std::vector<double>& row, double y,
                                  const ModelParams& p) {
    double excess = 0.0;
    for (int m = dr; m < static_cast<int>(row.size()); ++m) {
        if (row[static_cast<size_t>(m)] == 0.0) continue;
        double inner = 0.0, muyq = p.mu * y, yq = y;
        for (int k = 0; k < m; ++k) {
            inner += muyq / (1.0 - muyq);
            muyq *= p.q;
        }
        for (int k = 0; k < m - dr; ++k) {
            inner -= yq / (1.0 - yq);
            yq *= p.q;
        }
        excess += row[static_cast<size_t>(m)] * inner;
    }
    return excess;
}

/* J(r)_+ = J_+ - sum_m row[m] sum_{k<m}     y q^k/(1-mu y q^k)^2
 * J(r)_- = J_- - sum_m row[m] sum_{k<m-d_r} y q^k/(1-y q^k)^2 */
inline CurrentPair j_from_row(int dr, const std::vector<double>& row, double y,
                              const ModelParams& p, const CurrentPair& baseline) {
    CurrentPair j = baseline;
    for (int m = dr; m < static_cast<int>(row.size()); ++m) {
        if (row[static_cast<size_t>(m)] == 0.0) continue;
        double dplus = 0.0, dminus = 0.0, muyq = p.mu * y, yq = y, qk = 1.0;
        for (int k = 0; k < m; ++k) {
            dplus += y * qk / ((1.0 - muyq) * (1.0 - muyq));
            muyq *= p.q;
            qk *= p.q;
        }
        qk = 1.0;
        for (int k = 0; k < m - dr; ++k) {
            dminus += y * qk / ((1.0 - yq) * (1.0 - yq));
            yq *= p.q;
            qk *= p.q;
        }
        j.plus -= row[static_cast<size_t>(m)] * dplus;
        j.minus -= row[static_cast<size_t>(m)] * dminus;
    }
    return j;
}

}  // namespace detail

inline double p_region1(int r, int n, const std::vector<int>& d, double y, const ModelParams& p) {
    GKernel<double> ker = prefix_kernel(d, r, y, p);
    return detail::p_from_row(n, d[static_cast<size_t>(r - 1)], ker.row(0), y, p);
}

inline double rho_region1(int r, const std::vector<int>& d, double y, const ModelParams& p) {
    GKernel<double> ker = prefix_kernel(d, r, y, p);
    return qseries::density(y, p) +
           detail::rho_excess_from_row(d[static_cast<size_t>(r - 1)], ker.row(0), y, p);
}

inline CurrentPair j_region1(int r, const std::vector<int>& d, double y, const ModelParams& p) {
    GKernel<double> ker = prefix_kernel(d, r, y, p);
    return detail::j_from_row(d[static_cast<size_t>(r - 1)], ker.row(0), y, p,
                              baseline_currents(y, p));
}

/* Same currents through the shifted q-digamma derivative,
 * J_I(r)_+/- = sum_m G_{0,m}(d_1..d_r) { mu^{-1} h(q^m mu y), h(q^{m-d_r} y) };
 * equal to the difference form via the shift identity of h. */
inline CurrentPair j_region1_hform(int r, const std::vector<int>& d, double y,
                                   const ModelParams& p) {
    GKernel<double> ker = prefix_kernel(d, r, y, p);
    int dr = d[static_cast<size_t>(r - 1)];
    const auto& row = ker.row(0);
    CurrentPair j{0.0, 0.0};
    for (int m = dr; m < static_cast<int>(row.size()); ++m) {
        if (row[static_cast<size_t>(m)] == 0.0) continue;
        j.plus += row[static_cast<size_t>(m)] * h_deriv<double>(pow_int(p.q, m) * p.mu * y, p.q) / p.mu;
        j.minus += row[static_cast<size_t>(m)] * h_deriv<double>(pow_int(p.q, m - dr) * y, p.q);
    }
    return j;
}

/* ----- region II (right of the cluster) ----- */

/* The region-II closed forms are alternating sums whose terms reach
 * O(q^{-m(m-1)/2}); like the zero-run kernel they are accumulated in
 * extended precision and guarded by a condition number, with the positive
 * fallback route: the region-I formulas on the zero-extended pattern
 * (d_1,...,d_s,0^{r-s}), whose kernel row comes from composing the defect
 * core with the guarded zero run. */

namespace detail {

/* G_{0,m}(d_1..d_s, 0^u) over the support window */
inline std::vector<double> extended_row(const DefectPattern& pattern, int u, double y,
                                        const ModelParams& p) {
    GKernel<double> core(pattern.d, y, p.q, p.mu);
    const auto& row0 = core.row(0);
    std::vector<double> out(row0.size(), 0.0);
    for (int i = 0; i < static_cast<int>(out.size()); ++i)
        out[static_cast<size_t>(i)] = defect_kernel::G_with_zero_tail(core, u, 0, i, y, p.q, p.mu);
    return out;
}

inline bool region2_sum_ok(double q, double cond) { return q >= 0.2 && cond < 1e8; }

}  // namespace detail

/* P_II(r,n) = P(n) sum_{0<=i<=j<=m} G_{0,m}(d_1..d_s) (-1)^i
 *             q^{i(i-1+2n)/2 + j} (q^{-m})_j/((q)_i (q)_{j-i})
 *             eta_i^{-1} eta_j^{r-s} */
inline double p_region2_modes(int r, int n, const DefectPattern& pattern, double y,
                                const ModelParams& p, double* condition = nullptr) {
    int s = pattern.size();
    if (r <= s) throw std::invalid_argument("p_region2: requires r > s");
    if (n < 0) return 0.0;
    GKernel<double> ker(pattern.d, y, p.q, p.mu);
    const auto& row = ker.row(0);
    long double q = p.q, mu = p.mu, yl = y;
    long double sum = 0, amax = 0;
    for (int m = 0; m < static_cast<int>(row.size()); ++m) {
        if (row[static_cast<size_t>(m)] == 0.0) continue;
        long double qinvm = pow_int(1.0L / q, m);
        for (int j = 0; j <= m; ++j) {
            long double pj =
                q_pochhammer(qinvm, q, j) * eta_pow(j, r - s, yl, q, mu) * pow_int(q, j);
            if (pj == 0.0L) continue;
            for (int i = 0; i <= j; ++i) {
                long double term = static_cast<long double>(row[static_cast<size_t>(m)]) * pj *
                                   pow_int(q, static_cast<long long>(i) * (i - 1 + 2 * n) / 2) /
                                   (q_pochhammer(q, q, i) * q_pochhammer(q, q, j - i)) /
                                   eta(i, yl, q, mu);
                if (i % 2 != 0) term = -term;
                sum += term;
                amax = std::max(amax, std::abs(term));
            }
        }
    }
    if (condition)
        *condition = sum != 0.0L ? static_cast<double>(amax / std::abs(sum)) : 1e300;
    return baseline_p(n, y, p) * static_cast<double>(sum);
}

/* rho_II(r) - rho = sum_{1<=j<=m} G_{0,m}(d_1..d_s)
 *   q^j (q^{-m})_j eta_j^{r-s} / (1-q^j) * (1/(y)_j - 1/(mu y)_j) */
inline double rho_region2_modes(int r, const DefectPattern& pattern, double y,
                                  const ModelParams& p, double* condition = nullptr) {
    int s = pattern.size();
    if (r <= s) throw std::invalid_argument("rho_region2: requires r > s");
    GKernel<double> ker(pattern.d, y, p.q, p.mu);
    const auto& row = ker.row(0);
    long double q = p.q, mu = p.mu, yl = y;
    long double sum = 0, amax = 0;
    for (int m = 1; m < static_cast<int>(row.size()); ++m) {
        if (row[static_cast<size_t>(m)] == 0.0) continue;
        long double qinvm = pow_int(1.0L / q, m);
        for (int j = 1; j <= m; ++j) {
            long double term = static_cast<long double>(row[static_cast<size_t>(m)]) *
                               pow_int(q, j) * q_pochhammer(qinvm, q, j) *
                               eta_pow(j, r - s, yl, q, mu) / (1.0L - pow_int(q, j)) *
                               (1.0L / q_pochhammer(yl, q, j) - 1.0L / q_pochhammer(mu * yl, q, j));
            sum += term;
            amax = std::max(amax, std::abs(term));
        }
    }
    if (condition)
        *condition = sum != 0.0L ? static_cast<double>(amax / std::abs(sum)) : 1e300;
    return static_cast<double>(sum);
}

/* J_II(r)_+/- - J_+/- = sum_{1<=j<=m} G_{0,m}(d_1..d_s)
 *   q^j (q^{-m})_j eta_j^{r-s} / ((1-q^j)(w y)_j) sum_{k<j} y q^k/(1-w y q^k),
 * with w = mu for the + current and w = 1 for the - current. */
inline CurrentPair j_region2_modes(int r, const DefectPattern& pattern, double y,
                                     const ModelParams& p, double* condition = nullptr) {
    int s = pattern.size();
    if (r <= s) throw std::invalid_argument("j_region2: requires r > s");
    GKernel<double> ker(pattern.d, y, p.q, p.mu);
    const auto& row = ker.row(0);
    long double q = p.q, mu = p.mu, yl = y;
    long double sp = 0, sm = 0, amax = 0;
    for (int m = 1; m < static_cast<int>(row.size()); ++m) {
        if (row[static_cast<size_t>(m)] == 0.0) continue;
        long double qinvm = pow_int(1.0L / q, m);
        for (int jj = 1; jj <= m; ++jj) {
            long double base = static_cast<long double>(row[static_cast<size_t>(m)]) *
                               pow_int(q, jj) * q_pochhammer(qinvm, q, jj) *
                               eta_pow(jj, r - s, yl, q, mu) / (1.0L - pow_int(q, jj));
            if (base == 0.0L) continue;
            long double splus = 0, sminus = 0, muyq = mu * yl, yq = yl, qk = 1;
            for (int k = 0; k < jj; ++k) {
                splus += yl * qk / (1.0L - muyq);
                sminus += yl * qk / (1.0L - yq);
                muyq *= q;
                yq *= q;
                qk *= q;
            }
            long double tp = base / q_pochhammer(mu * yl, q, jj) * splus;
            long double tm = base / q_pochhammer(yl, q, jj) * sminus;
            sp += tp;
            sm += tm;
            amax = std::max({amax, std::abs(tp), std::abs(tm)});
        }
    }
    if (condition) {
        long double scale = std::max(std::abs(sp), std::abs(sm));
        *condition = scale != 0.0L ? static_cast<double>(amax / scale) : 1e300;
    }
    CurrentPair j = baseline_currents(y, p);
    j.plus += static_cast<double>(sp);
    j.minus += static_cast<double>(sm);
    return j;
}

/* guarded dispatchers */

inline double p_region2(int r, int n, const DefectPattern& pattern, double y,
                        const ModelParams& p) {
    double cond = 0.0;
    double v = p_region2_modes(r, n, pattern, y, p, &cond);
    if (detail::region2_sum_ok(p.q, cond)) return v;
    std::vector<double> row = detail::extended_row(pattern, r - pattern.size(), y, p);
    return detail::p_from_row(n, 0, row, y, p);
}

inline double rho_region2_excess(int r, const DefectPattern& pattern, double y,
                                 const ModelParams& p) {
    double cond = 0.0;
    double v = rho_region2_modes(r, pattern, y, p, &cond);
    if (detail::region2_sum_ok(p.q, cond)) return v;
    std::vector<double> row = detail::extended_row(pattern, r - pattern.size(), y, p);
    return detail::rho_excess_from_row(0, row, y, p);
}

inline double rho_region2(int r, const DefectPattern& pattern, double y, const ModelParams& p) {
    return qseries::density(y, p) + rho_region2_excess(r, pattern, y, p);
}

inline CurrentPair j_region2(int r, const DefectPattern& pattern, double y,
                             const ModelParams& p) {
    double cond = 0.0;
    CurrentPair v = j_region2_modes(r, pattern, y, p, &cond);
    if (detail::region2_sum_ok(p.q, cond)) return v;
    std::vector<double> row = detail::extended_row(pattern, r - pattern.size(), y, p);
    return detail::j_from_row(0, row, y, p, baseline_currents(y, p));
}

/* ----- region III (left of the cluster): the baseline, identically ----- */

inline double p_region3(int n, double y, const ModelParams& p) { return baseline_p(n, y, p); }
inline double rho_region3(double y, const ModelParams& p) { return qseries::density(y, p); }
inline CurrentPair j_region3(double y, const ModelParams& p) { return baseline_currents(y, p); }

/* ----- total excess ----- */

/* sum_r (rho(r) - rho) over the whole lattice, equal to -(d_1+...+d_s).
 * The region-II tail is summed in closed form through
 * sum_{r>s} eta_j^{r-s} = eta_j/(1-eta_j); when that alternating sum is ill
 * conditioned the per-site excesses from the stable route are accumulated
 * instead, with a geometric bound certifying the truncation. */
inline double total_excess(const DefectPattern& pattern, double y, const ModelParams& p) {
    int s = pattern.size();
    if (s == 0) return 0.0;
    double sum = 0.0;
    double rho = qseries::density(y, p);
    for (int r = 1; r <= s; ++r) sum += rho_region1(r, pattern.d, y, p) - rho;

    GKernel<double> ker(pattern.d, y, p.q, p.mu);
    const auto& row = ker.row(0);
    long double q = p.q, mu = p.mu, yl = y;
    long double tail = 0, amax = 0;
    for (int m = 1; m < static_cast<int>(row.size()); ++m) {
        if (row[static_cast<size_t>(m)] == 0.0) continue;
        long double qinvm = pow_int(1.0L / q, m);
        for (int j = 1; j <= m; ++j) {
            long double ej = eta(j, yl, q, mu);
            long double term = static_cast<long double>(row[static_cast<size_t>(m)]) *
                               pow_int(q, j) * q_pochhammer(qinvm, q, j) / (1.0L - pow_int(q, j)) *
                               (1.0L / q_pochhammer(yl, q, j) - 1.0L / q_pochhammer(mu * yl, q, j)) *
                               ej / (1.0L - ej);
            tail += term;
            amax = std::max(amax, std::abs(term));
        }
    }
    double cond = tail != 0.0L ? static_cast<double>(amax / std::abs(tail)) : 1e300;
    if (detail::region2_sum_ok(p.q, cond)) return sum + static_cast<double>(tail);

    /* stable route: per-site excesses decay like eta_1^{r-s} */
    double eta1 = eta(1, y, p);
    double acc = 0.0;
    for (int r = s + 1;; ++r) {
        std::vector<double> wrow = detail::extended_row(pattern, r - s, y, p);
        double ex = detail::rho_excess_from_row(0, wrow, y, p);
        acc += ex;
        double bound = std::abs(ex) * eta1 / (1.0 - eta1);
        if (bound < 1e-14 * std::max(1.0, std::abs(acc)) || r - s > 100000) break;
    }
    return sum + acc;
}

/* ----- closed-form low/high density limits ----- */

/* lim_{rho->0} rho_I(r)/rho = (1-mu q^{d_r})/(1-mu) q^{d_1+...+d_{r-1}} */
inline double limit_rho0_region1_ratio(int r, const DefectPattern& pattern, const ModelParams& p) {
    int prefix = 0;
    for (int i = 0; i < r - 1; ++i) prefix += pattern.d[static_cast<size_t>(i)];
    int dr = pattern.d[static_cast<size_t>(r - 1)];
    return (1.0 - p.mu * pow_int(p.q, dr)) / (1.0 - p.mu) * pow_int(p.q, prefix);
}

/* lim_{rho->inf} (rho_I(r) - rho)
 *   = sum_{k<d_r} mu q^k/(1-mu q^k) - sum_{k<d_{r-1}} 1/(1-mu q^k),
 * the second sum empty at the left boundary r = 1. */
inline double limit_rhoinf_region1_excess(int r, const DefectPattern& pattern,
                                          const ModelParams& p) {
    int dr = pattern.d[static_cast<size_t>(r - 1)];
    int dprev = r >= 2 ? pattern.d[static_cast<size_t>(r - 2)] : 0;
    double v = 0.0, muq = p.mu;
    for (int k = 0; k < dr; ++k) {
        v += muq / (1.0 - muq);
        muq *= p.q;
    }
    muq = p.mu;
    for (int k = 0; k < dprev; ++k) {
        v -= 1.0 / (1.0 - muq);
        muq *= p.q;
    }
    return v;
}

/* lim_{rho->0} J_I(r)_+/J_+ = q^{d_1+...+d_r},
 * lim_{rho->0} J_I(r)_-/J_- = q^{d_1+...+d_{r-1}} */
inline CurrentPair limit_rho0_region1_current_ratio(int r, const DefectPattern& pattern,
                                                    const ModelParams& p) {
    int upto_r = 0;
    for (int i = 0; i < r; ++i) upto_r += pattern.d[static_cast<size_t>(i)];
    int upto_prev = upto_r - pattern.d[static_cast<size_t>(r - 1)];
    return {pow_int(p.q, upto_r), pow_int(p.q, upto_prev)};
}

/* lim_{rho->inf} (J_I(r)_+ - J_+) = -sum_{k<d_r} q^k/(1-mu q^k)^2
 *   (= mu^{-1}[h(q^{d_r} mu) - h(mu)], from the h-form of the current),
 * lim_{rho->inf} (J_I(r)_- - J_-)/rho = -sum_{k<d_{r-1}} 1/(1-mu q^k) */
inline CurrentPair limit_rhoinf_region1_current(int r, const DefectPattern& pattern,
                                                const ModelParams& p) {
    int dr = pattern.d[static_cast<size_t>(r - 1)];
    int dprev = r >= 2 ? pattern.d[static_cast<size_t>(r - 2)] : 0;
    double vp = 0.0, vm = 0.0, qk = 1.0, muq = p.mu;
    for (int k = 0; k < dr; ++k) {
        vp -= qk / ((1.0 - muq) * (1.0 - muq));
        qk *= p.q;
        muq *= p.q;
    }
    muq = p.mu;
    for (int k = 0; k < dprev; ++k) {
        vm -= 1.0 / (1.0 - muq);
        muq *= p.q;
    }
    return {vp, vm};
}

/* lim_{rho->0} rho_II(r)/rho = lim_{rho->0} J_II(r)_+/-/J_+/- = q^{d_1+...+d_s} */
inline double limit_rho0_region2_ratio(const DefectPattern& pattern, const ModelParams& p) {
    return pow_int(p.q, pattern.total());
}

/* lim_{rho->inf} (rho_II(r) - rho) = -theta(r = s+1) sum_{k<d_s} 1/(1-mu q^k);
 * the same sum gives lim (J_II(r)_- - J_-)/rho, while J_II(r)_+ - J_+ -> 0. */
inline double limit_rhoinf_region2_excess(int r, const DefectPattern& pattern,
                                          const ModelParams& p) {
    if (r != pattern.size() + 1) return 0.0;
    int ds = pattern.d.back();
    double v = 0.0, muq = p.mu;
    for (int k = 0; k < ds; ++k) {
        v -= 1.0 / (1.0 - muq);
        muq *= p.q;
    }
    return v;
}

/* ----- assembled per-site profile ----- */

struct Profile {
    int lo = 0, hi = 0;                 /* inclusive site window */
    std::vector<Region> region;
    std::vector<double> rho;
    std::vector<double> j_plus;
    std::vector<double> j_minus;
    std::vector<double> j_mixed;        /* a J(r)_+ - b J(r+1)_- */
    double baseline_rho = 0.0;
    CurrentPair baseline_j{0.0, 0.0};

    int size() const { return hi - lo + 1; }
    int index(int r) const { return r - lo; }
};

/* Per-site density and currents over the window [lo,hi]; region III sites
 * carry the baseline exactly. The mixed current at r needs J(r+1)_-, so the
 * current columns are assembled from a window extended one site right. */
inline Profile profile(int lo, int hi, const DefectPattern& pattern, const EnsembleParams& ens,
                       const ModelParams& p, const CurrentMix& mix = CurrentMix()) {
    if (lo > hi) throw std::invalid_argument("profile: empty window");
    int s = pattern.size();
    double y = ens.y;
    Profile out;
    out.lo = lo;
    out.hi = hi;
    out.baseline_rho = qseries::density(y, p);
    out.baseline_j = baseline_currents(y, p);

    auto rho_at = [&](int r) -> double {
        switch (region_of(r, s)) {
            case Region::III: return out.baseline_rho;
            case Region::I: return rho_region1(r, pattern.d, y, p);
            default: return rho_region2(r, pattern, y, p);
        }
    };
    auto j_at = [&](int r) -> CurrentPair {
        switch (region_of(r, s)) {
            case Region::III: return out.baseline_j;
            case Region::I: return j_region1(r, pattern.d, y, p);
            default: return j_region2(r, pattern, y, p);
        }
    };

    for (int r = lo; r <= hi + 1; ++r) {
        CurrentPair j = j_at(r);
        if (r <= hi) {
            out.region.push_back(region_of(r, s));
            out.rho.push_back(rho_at(r));
            out.j_plus.push_back(j.plus);
            out.j_minus.push_back(j.minus);
        }
        if (r > lo) {
            int idx = r - 1 - lo;
            out.j_mixed.push_back(mix.a * out.j_plus[static_cast<size_t>(idx)] - mix.b * j.minus);
        }
    }
    return out;
}

}  // namespace zrp::profiles
