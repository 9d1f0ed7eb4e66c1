/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <vector>

#include "zrp/qboson.hpp"

/* Canonical-ensemble density profile on a finite ring: the mean second-class
 * occupation at each site in the sector with exactly m2 second-class
 * particles, conditioned on the frozen defect layout (d_1,...,d_s) at sites
 * 1..s. The conditioned slice has binom(m2+L-1, L-1) states.
 *
 * Primary path: per-site generating matrices in the second-class fugacity,
 *   B_d(y) = sum_n y^n X_{d,n},  C_d(y) = sum_n n y^n X_{d,n},
 * held as Fock matrices of y-polynomials truncated at degree m2. The ring
 * trace of B_1(y)...B_L(y) collects every slice weight in its y^{m2}
 * coefficient, so
 *   rho^c_L(r) = [y^{m2}] tr(B_1..C_r..B_L) / [y^{m2}] tr(B_1..B_L).
 * Polynomial arithmetic is exact; the only approximation is the Fock cutoff
 * N = d_1+...+d_s + t, grown adaptively exactly as in the grand canonical
 * operators. A direct enumeration over the slice is kept as a fallback and
 * cross-check for tiny sectors. */

namespace zrp::canonical {

/* dense polynomial in y truncated at a fixed degree cap */
struct TruncPoly {
    std::vector<double> c;  /* c[k] multiplies y^k; size = cap+1 */

    explicit TruncPoly(int cap = 0) : c(static_cast<size_t>(cap) + 1, 0.0) {}
    int cap() const { return static_cast<int>(c.size()) - 1; }
};

inline void fma_poly(TruncPoly& acc, const TruncPoly& a, const TruncPoly& b) {
    int cap = acc.cap();
    for (int i = 0; i <= cap; ++i) {
        if (a.c[i] == 0.0) continue;
        double ai = a.c[i];
        for (int j = 0; i + j <= cap; ++j) acc.c[i + j] += ai * b.c[j];
    }
}

/* (N+1)x(N+1) matrix of truncated polynomials */
struct PolyMat {
    int n = 0, cap = 0;
    std::vector<TruncPoly> e;

    PolyMat(int n_, int cap_) : n(n_), cap(cap_), e(static_cast<size_t>(n_ + 1) * (n_ + 1), TruncPoly(cap_)) {}
    TruncPoly& operator()(int i, int j) { return e[static_cast<size_t>(i) * (n + 1) + j]; }
    const TruncPoly& operator()(int i, int j) const { return e[static_cast<size_t>(i) * (n + 1) + j]; }

    PolyMat operator*(const PolyMat& o) const {
        PolyMat r(n, cap);
        for (int i = 0; i <= n; ++i)
            for (int k = 0; k <= n; ++k) {
                const TruncPoly& a = (*this)(i, k);
                bool zero = true;
                for (double v : a.c)
                    if (v != 0.0) { zero = false; break; }
                if (zero) continue;
                for (int j = 0; j <= n; ++j) fma_poly(r(i, j), a, o(k, j));
            }
        return r;
    }
};

/* B_d(y) (weighted=false) or C_d(y) (weighted=true, extra factor n) */
inline PolyMat site_matrix(int d, int n, int cap, const ModelParams& p, bool weighted) {
    using qseries::g_factor;
    using qseries::pow_int;
    using qseries::q_pochhammer;
    if (d > n) throw insufficient_cutoff("site_matrix: defect occupancy exceeds the Fock cutoff");
    PolyMat mat(n, cap);
    for (int m = d; m <= n; ++m) {
        double cfac = q_pochhammer(p.q, p.q, m) / q_pochhammer(p.q, p.q, m - d);
        /* series over the second-class occupancy: y^k (mu)_{d+k}/((q)_d (q)_k) q^{k(m-d)} */
        TruncPoly series(cap);
        double qd = q_pochhammer(p.q, p.q, d);
        for (int k = 0; k <= cap; ++k) {
            double coef = q_pochhammer(p.mu, p.q, d + k) /
                          (qd * q_pochhammer(p.q, p.q, k)) *
                          pow_int(p.q, static_cast<long long>(k) * (m - d));
            series.c[k] = weighted ? k * coef : coef;
        }
        for (int j = 0; m - d + j <= n; ++j) {
            double bfac = cfac * g_factor(j, p);
            TruncPoly& cell = mat(m - d + j, m);
            for (int k = 0; k <= cap; ++k) cell.c[k] = bfac * series.c[k];
        }
    }
    return mat;
}

struct CanonicalResult {
    std::vector<double> rho;  /* rho^c_L(r), r = 1..L */
    int t_used = 0;           /* headroom at which the profile converged */
    double last_change = 0.0; /* max site change over the final doubling */
};

/* effective defect occupancy at site r (1-based) */
inline int site_defect(int r, const DefectPattern& pattern) {
    return (r >= 1 && r <= pattern.size()) ? pattern.d[static_cast<size_t>(r - 1)] : 0;
}

inline std::vector<double> canonical_profile_at_cutoff(int L, const DefectPattern& pattern,
                                                       int m2, const ModelParams& p, int n) {
    int cap = m2;
    /* prefix[i] = B_1..B_i, suffix[i] = B_{i+1}..B_L (as poly matrices) */
    std::vector<PolyMat> site;
    site.reserve(static_cast<size_t>(L));
    for (int r = 1; r <= L; ++r) site.push_back(site_matrix(site_defect(r, pattern), n, cap, p, false));

    std::vector<PolyMat> suffix(static_cast<size_t>(L) + 1, PolyMat(n, cap));
    for (int i = 0; i <= n; ++i) suffix[static_cast<size_t>(L)](i, i).c[0] = 1.0;
    for (int r = L; r >= 1; --r) suffix[static_cast<size_t>(r - 1)] = site[static_cast<size_t>(r - 1)] * suffix[static_cast<size_t>(r)];

    auto trace_top = [&](const PolyMat& mat) {
        double t = 0.0;
        for (int i = 0; i <= n; ++i) t += mat(i, i).c[static_cast<size_t>(cap)];
        return t;
    };

    double z = trace_top(suffix[0]);
    std::vector<double> rho(static_cast<size_t>(L));
    PolyMat prefix(n, cap);
    for (int i = 0; i <= n; ++i) prefix(i, i).c[0] = 1.0;
    for (int r = 1; r <= L; ++r) {
        PolyMat weighted = site_matrix(site_defect(r, pattern), n, cap, p, true);
        PolyMat num = prefix * (weighted * suffix[static_cast<size_t>(r)]);
        rho[static_cast<size_t>(r - 1)] = trace_top(num) / z;
        prefix = prefix * site[static_cast<size_t>(r - 1)];
    }
    return rho;
}

/* Profile with the Fock headroom t doubled until no site moves more than
 * rel_tol (relative to the local value). */
inline CanonicalResult canonical_profile(int L, const DefectPattern& pattern, int m2,
                                         const ModelParams& p, double rel_tol = 1e-10,
                                         int t_max = 64) {
    if (L < 1) throw std::invalid_argument("canonical_profile: L must be >= 1");
    if (pattern.size() > L) throw std::invalid_argument("canonical_profile: more defect sites than ring sites");
    if (m2 < 1) throw std::invalid_argument("canonical_profile: need at least one second-class particle");
    int base = pattern.total();
    CanonicalResult res;
    std::vector<double> prev = canonical_profile_at_cutoff(L, pattern, m2, p, base + 2);
    for (int t = 4; t <= t_max; t *= 2) {
        std::vector<double> cur = canonical_profile_at_cutoff(L, pattern, m2, p, base + t);
        double change = 0.0;
        for (int r = 0; r < L; ++r)
            change = std::max(change, std::abs(cur[r] - prev[r]) / std::max(1.0, std::abs(cur[r])));
        if (change <= rel_tol) {
            res.rho = std::move(cur);
            res.t_used = t;
            res.last_change = change;
            return res;
        }
        prev = std::move(cur);
    }
    throw insufficient_cutoff("canonical_profile: profile did not converge within t_max");
}

/* Fallback: direct enumeration of the slice {n_1+...+n_L = m2} with
 * matrix-product weights. Exponential in the sector size; intended for tiny
 * sectors and as a cross-check oracle. */
inline std::vector<double> canonical_profile_enumerate(int L, const DefectPattern& pattern,
                                                       int m2, const ModelParams& p,
                                                       int headroom = 8) {
    int n = pattern.total() + headroom;
    std::vector<double> num(static_cast<size_t>(L), 0.0);
    double z = 0.0;
    std::vector<int> occ(static_cast<size_t>(L), 0);
    occ[0] = m2;
    for (;;) {
        std::vector<std::pair<int, int>> config;
        config.reserve(static_cast<size_t>(L));
        for (int r = 1; r <= L; ++r) config.emplace_back(site_defect(r, pattern), occ[static_cast<size_t>(r - 1)]);
        double w = qboson::word_trace(config, n, p.q, p.mu);
        z += w;
        for (int r = 0; r < L; ++r) num[static_cast<size_t>(r)] += occ[static_cast<size_t>(r)] * w;
        /* next composition of m2 into L parts (colex order) */
        int i = 0;
        while (i < L - 1 && occ[static_cast<size_t>(i)] == 0) ++i;
        if (i == L - 1) break;
        int v = occ[static_cast<size_t>(i)];
        occ[static_cast<size_t>(i)] = 0;
        occ[0] = v - 1;
        ++occ[static_cast<size_t>(i + 1)];
    }
    for (double& v : num) v /= z;
    return num;
}

}  // namespace zrp::canonical
