/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <type_traits>
#include <vector>

#include "zrp/qseries.hpp"

/* The scalar defect machinery: chains of the vertex weight phi(l|m) composed
 * over a defect pattern (d_1,...,d_s) form the kernel G_{m,l}(d_1,...,d_s),
 * a column monodromy matrix of the single-species process with the fugacity
 * y as spectral parameter. Zero runs admit an alternating closed form in the
 * decay modes eta_j, tied to the convolution function F_{m,r}. The kernel
 * also gives the matrix elements <m|A_{d_1}...A_{d_s}|l> in closed form. */

namespace zrp::defect_kernel {

using qseries::eta;
using qseries::eta_pow;
using qseries::g_factor;
using qseries::phi;
using qseries::pow_int;
using qseries::q_binomial;
using qseries::q_pochhammer;

/* G_{m,l}(d_1,...,d_s) evaluated by the positive column recursion: carry the
 * distribution over the intermediate occupancy c, starting at c = m, through
 * the vertices (left input d_i, right output l_i, weight phi(l_i|c)); the
 * occupancy becomes c + d_i - l_i and the final value is read at c = l.
 *
 * Rows are memoized per m; entries vanish structurally outside
 * d_s <= l <= d_1+...+d_s+m and each row sums to 1.
 *
 * A row is immutable once built. Distinct kernels may be used from distinct
 * threads freely; to share one instance across threads, warm the rows first
 * (the lazy build is not synchronized), after which readers never block. */
template <class Real>
class GKernel {
public:
    GKernel(std::vector<int> pattern, Real y, Real q, Real mu)
        : pattern_(std::move(pattern)), y_(y), q_(q), mu_(mu) {
        for (int d : pattern_)
            if (d < 0) throw std::invalid_argument("GKernel: occupancies must be >= 0");
        total_ = std::accumulate(pattern_.begin(), pattern_.end(), 0);
    }

    /* full row {G_{m,l}}_{l=0..total+m} */
    const std::vector<Real>& row(int m) const {
        if (m < 0) throw std::invalid_argument("GKernel: m must be >= 0");
        auto it = rows_.find(m);
        if (it != rows_.end()) return it->second;

        std::vector<Real> w(static_cast<size_t>(total_ + m + 1), Real(0));
        w[static_cast<size_t>(m)] = Real(1);
        for (int d : pattern_) {
            std::vector<Real> next(w.size(), Real(0));
            for (int c = 0; c < static_cast<int>(w.size()); ++c) {
                if (w[c] == Real(0)) continue;
                for (int l = 0; l <= c; ++l)
                    next[static_cast<size_t>(c + d - l)] += w[c] * phi(l, c, y_, q_, mu_);
            }
            w.swap(next);
        }
        return rows_.emplace(m, std::move(w)).first->second;
    }

    Real operator()(int m, int l) const {
        if (l < 0) return Real(0);
        const auto& r = row(m);
        return l < static_cast<int>(r.size()) ? r[static_cast<size_t>(l)] : Real(0);
    }

    const std::vector<int>& pattern() const { return pattern_; }
    int total() const { return total_; }
    Real fugacity() const { return y_; }

private:
    std::vector<int> pattern_;
    Real y_, q_, mu_;
    int total_;
    mutable std::map<int, std::vector<Real>> rows_;
};

/* One-shot kernel value. */
template <class Real>
Real G(int m, int l, const std::vector<int>& pattern, Real y, Real q, Real mu) {
    return GKernel<Real>(pattern, y, q, mu)(m, l);
}
inline double G(int m, int l, const std::vector<int>& pattern, double y, const ModelParams& p) {
    return G<double>(m, l, pattern, y, p.q, p.mu);
}

/* Kernel composition over a pattern split,
 *   G_{m,l}(d_1..d_s) = sum_k G_{m,k}(d_1..d_t) G_{k,l}(d_{t+1}..d_s),
 * exposed for cross checks and for appending zero runs to a defect core. */
template <class Real>
Real G_compose(const std::vector<int>& left, const std::vector<int>& right, int m, int l, Real y,
               Real q, Real mu) {
    GKernel<Real> gl(left, y, q, mu), gr(right, y, q, mu);
    const auto& lrow = gl.row(m);
    Real sum = 0;
    for (int k = 0; k < static_cast<int>(lrow.size()); ++k)
        if (lrow[k] != Real(0)) sum += lrow[k] * gr(k, l);
    return sum;
}

/* Zero-run kernel by the recursion (always positive, regular at small q). */
template <class Real>
Real G_zero_run_recursive(int m, int i, int run, Real y, Real q, Real mu) {
    if (run < 1) throw std::invalid_argument("G_zero_run: run length must be >= 1");
    /* occupancy can only shrink along a zero run, so the window stays m+1 wide */
    std::vector<Real> w(static_cast<size_t>(m + 1), Real(0));
    w[static_cast<size_t>(m)] = Real(1);
    for (int step = 0; step < run; ++step) {
        std::vector<Real> next(w.size(), Real(0));
        for (int c = 0; c <= m; ++c) {
            if (w[c] == Real(0)) continue;
            for (int l = 0; l <= c; ++l) next[static_cast<size_t>(c - l)] += w[c] * phi(l, c, y, q, mu);
        }
        w.swap(next);
    }
    return (i >= 0 && i <= m) ? w[static_cast<size_t>(i)] : Real(0);
}

/* Accumulator giving the alternating closed forms extra headroom: their
 * terms reach O(q^{-m(m-1)/2}) while the result stays in [0,1], so a plain
 * double sum can lose ten digits before the condition-number guard fires.
 * Only +,-,*,/ touch the wide type, so quad precision needs no libquadmath. */
#if defined(__SIZEOF_FLOAT128__)
using wide_real = __float128;
#else
using wide_real = long double;
#endif

template <class Real>
using wide_t = std::conditional_t<(sizeof(Real) < sizeof(wide_real)), wide_real, Real>;

template <class Acc>
Acc wide_abs(Acc x) {
    return x < Acc(0) ? -x : x;
}

/* Zero-run kernel by the alternating single sum
 *   G_{m,i}(0^r) = sum_{i<=j<=m} (-1)^{i+j} q^{i(i-1)/2 + j(j+1-2m)/2}
 *                  binom_q(m,j) binom_q(j,i) eta_j^r. */
template <class Real>
Real G_zero_run_closed(int m, int i, int run, Real y, Real q, Real mu,
                       Real* condition = nullptr) {
    if (run < 1) throw std::invalid_argument("G_zero_run: run length must be >= 1");
    if (i < 0 || i > m) return Real(0);
    using Acc = wide_t<Real>;
    Acc sum = 0, amax = 0;
    Acc qa = static_cast<Acc>(q), ya = static_cast<Acc>(y), mua = static_cast<Acc>(mu);
    for (int j = i; j <= m; ++j) {
        /* q^{i(i-1)/2 + j(j+1-2m)/2}: the second exponent can be negative */
        long long e1 = static_cast<long long>(i) * (i - 1) / 2;
        long long e2 = static_cast<long long>(j) * (j + 1 - 2 * m);  /* even product */
        Acc qp = pow_int(qa, e1) * (e2 >= 0 ? pow_int(qa, e2 / 2) : Acc(1) / pow_int(qa, -e2 / 2));
        Acc term = qp * q_binomial(m, j, qa) * q_binomial(j, i, qa) *
                   pow_int(eta(j, ya, qa, mua), run);
        if ((i + j) % 2 != 0) term = -term;
        sum += term;
        amax = std::max(amax, wide_abs(term));
    }
    if (condition)
        *condition = (sum != Acc(0)) ? static_cast<Real>(amax / wide_abs(sum)) : Real(1e300);
    return static_cast<Real>(sum);
}

/* Guarded zero-run kernel: closed form unless q is small or the alternating
 * sum is ill conditioned, in which case the positive recursion is used. */
template <class Real>
Real G_zero_run(int m, int i, int run, Real y, Real q, Real mu) {
    if (i < 0 || i > m) return Real(0);
    if (q < Real(0.2)) return G_zero_run_recursive(m, i, run, y, q, mu);
    Real cond = 0;
    Real v = G_zero_run_closed(m, i, run, y, q, mu, &cond);
    if (!(cond < Real(1e8))) return G_zero_run_recursive(m, i, run, y, q, mu);
    return v;
}

/* Kernel of a defect core extended by a zero run of length u >= 1:
 * G_{m,i}(d_1..d_s, 0^u) = sum_k G_{m,k}(core) G_{k,i}(0^u). */
template <class Real>
Real G_with_zero_tail(const GKernel<Real>& core, int u, int m, int i, Real y, Real q, Real mu) {
    const auto& r = core.row(m);
    Real sum = 0;
    for (int k = std::max(i, 0); k < static_cast<int>(r.size()); ++k)
        if (r[k] != Real(0)) sum += r[k] * G_zero_run(k, i, u, y, q, mu);
    return sum;
}

/* F_{m,r}(y) = sum_{l_1+...+l_r=m} g_{l_1}...g_{l_r} prod_{j=1}^{r-1}
 * eta_{l_{j+1}+...+l_r}, by dynamic programming over the suffix totals
 * (the convolution definition, feasible for small m*r). */
template <class Real>
Real F_def(int m, int r, Real y, Real q, Real mu) {
    if (m < 0 || r < 1) throw std::invalid_argument("F_def: need m >= 0, r >= 1");
    std::vector<Real> w(static_cast<size_t>(m + 1));
    for (int t = 0; t <= m; ++t) w[t] = g_factor(t, q, mu);
    for (int slot = 2; slot <= r; ++slot) {
        std::vector<Real> next(w.size(), Real(0));
        for (int t = 0; t <= m; ++t)
            for (int suffix = 0; suffix <= t; ++suffix)
                next[t] += g_factor(t - suffix, q, mu) * eta(suffix, y, q, mu) * w[suffix];
        w.swap(next);
    }
    return w[static_cast<size_t>(m)];
}

/* Closed form
 * F_{m,r}(y) = y^{-m} (mu y)_m/(q)_m sum_j (-1)^j q^{j(j+1-2m)/2}
 *              binom_q(m,j) eta_j^r. */
template <class Real>
Real F_closed(int m, int r, Real y, Real q, Real mu) {
    if (m < 0 || r < 1) throw std::invalid_argument("F_closed: need m >= 0, r >= 1");
    using Acc = wide_t<Real>;
    Acc qa = static_cast<Acc>(q), ya = static_cast<Acc>(y), mua = static_cast<Acc>(mu);
    Acc sum = 0;
    for (int j = 0; j <= m; ++j) {
        long long e = static_cast<long long>(j) * (j + 1 - 2 * m);
        Acc qp = e >= 0 ? pow_int(qa, e / 2) : Acc(1) / pow_int(qa, -e / 2);
        Acc term = qp * q_binomial(m, j, qa) * pow_int(eta(j, ya, qa, mua), r);
        sum += (j % 2 == 0) ? term : -term;
    }
    return static_cast<Real>(q_pochhammer(mua * ya, qa, m) / q_pochhammer(qa, qa, m) /
                             pow_int(ya, m) * sum);
}

/* <m| A_{d_1} ... A_{d_s} |l> in closed form:
 * y^{l-m-(d_1+...+d_s)} g_{d_1}...g_{d_s} Lambda(y)^s (q)_l (mu y)_m/(mu y)_l
 *  * G_{m,l}(d_1,...,d_s). */
template <class Real>
Real bracket_A(int m, int l, const std::vector<int>& pattern, Real y, Real q, Real mu) {
    if (m < 0 || l < 0) return Real(0);
    GKernel<Real> ker(pattern, y, q, mu);
    Real g = ker(m, l);
    if (g == Real(0)) return Real(0);
    Real pref = 1;
    for (int d : pattern) pref *= g_factor(d, q, mu);
    int e = l - m - ker.total();
    Real ypw = e >= 0 ? pow_int(y, e) : Real(1) / pow_int(y, -e);
    Real lam = qseries::lambda_y(y, q, mu);
    return ypw * pref * pow_int(lam, pattern.size()) * q_pochhammer(q, q, l) *
           q_pochhammer(mu * y, q, m) / q_pochhammer(mu * y, q, l) * g;
}
inline double bracket_A(int m, int l, const std::vector<int>& pattern, double y,
                        const ModelParams& p) {
    return bracket_A<double>(m, l, pattern, y, p.q, p.mu);
}

/* K(r) = sum_m G_{0,m}(d_1..d_r) sum_{k<m} 1/(1 - mu y q^k), with K(0) = 0.
 * The difference K(r) - K(r-1) - d_r gives the region-I density excess. */
template <class Real>
Real K(int r, const std::vector<int>& pattern, Real y, Real q, Real mu) {
    if (r < 0 || r > static_cast<int>(pattern.size()))
        throw std::invalid_argument("K: need 0 <= r <= s");
    if (r == 0) return Real(0);
    std::vector<int> prefix(pattern.begin(), pattern.begin() + r);
    GKernel<Real> ker(prefix, y, q, mu);
    const auto& row0 = ker.row(0);
    Real sum = 0;
    for (int m = 0; m < static_cast<int>(row0.size()); ++m) {
        if (row0[m] == Real(0)) continue;
        Real inner = 0, muyq = mu * y;
        for (int k = 0; k < m; ++k) {
            inner += Real(1) / (Real(1) - muyq);
            muyq *= q;
        }
        sum += row0[m] * inner;
    }
    return sum;
}
inline double K(int r, const std::vector<int>& pattern, double y, const ModelParams& p) {
    return K<double>(r, pattern, y, p.q, p.mu);
}

}  // namespace zrp::defect_kernel
