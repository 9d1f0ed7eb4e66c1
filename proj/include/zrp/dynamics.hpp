/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <map>
#include <utility>
#include <vector>

#include "zrp/qseries.hpp"

/* Finite-ring ground truth for the multispecies zero range process: the
 * stochastic vertex weight Phi_q for n particle classes, the discrete-time
 * Markov transfer matrix built from it, the continuous-time generators H_+
 * (right hops) and H_- (left hops) for the homogeneous chain, and an exact
 * stationary-state solver over an enumerated sector. Everything here is an
 * independent route against which the matrix-product and closed-form
 * machinery is validated at desk scale. */

namespace zrp::dynamics {

using Occ = std::vector<int>;  /* per-class occupancy, length n */

inline int total(const Occ& v) {
    int t = 0;
    for (int x : v) t += x;
    return t;
}

/* varphi(alpha, beta) = sum_{i<j} alpha_i beta_j */
inline long long varphi(const Occ& alpha, const Occ& beta) {
    long long s = 0;
    for (size_t i = 0; i < alpha.size(); ++i)
        for (size_t j = i + 1; j < beta.size(); ++j) s += static_cast<long long>(alpha[i]) * beta[j];
    return s;
}

/* Vertex weight
 * Phi_q(gamma|beta; lambda, mu) = q^{varphi(beta-gamma, gamma)}
 *   (mu/lambda)^{|gamma|} (lambda)_{|gamma|} (mu/lambda)_{|beta|-|gamma|}
 *   / (mu)_{|beta|} * prod_i binom_q(beta_i, gamma_i);
 * zero unless gamma <= beta componentwise. Satisfies the sum rule
 * sum_gamma Phi_q(gamma|beta) = 1. */
inline double phi_q(const Occ& gamma, const Occ& beta, double lambda, double mu, double q) {
    if (gamma.size() != beta.size()) throw std::invalid_argument("phi_q: rank mismatch");
    double binoms = 1.0;
    Occ diff(beta.size());
    for (size_t i = 0; i < beta.size(); ++i) {
        if (gamma[i] < 0 || gamma[i] > beta[i]) return 0.0;
        diff[i] = beta[i] - gamma[i];
        binoms *= qseries::q_binomial(beta[i], gamma[i], q);
    }
    int g = total(gamma), b = total(beta);
    double ratio = mu / lambda;
    return std::pow(q, static_cast<double>(varphi(diff, gamma))) * qseries::pow_int(ratio, g) *
           qseries::q_pochhammer(lambda, q, g) * qseries::q_pochhammer(ratio, q, b - g) /
           qseries::q_pochhammer(mu, q, b) * binoms;
}

/* ----- sector enumeration ----- */

/* Ring configuration: occupancies[site][class]. */
using RingState = std::vector<Occ>;

struct Sector {
    int L = 0;
    Occ totals;                          /* particles per class */
    std::vector<RingState> states;       /* lexicographic, site-major */
    std::map<RingState, int> index;

    int dim() const { return static_cast<int>(states.size()); }
};

/* All configurations with the given per-class totals, in lexicographic
 * order of the site-major flattening (sigma_{1,1}, sigma_{1,2}, ...,
 * sigma_{L,n}); the order is stable and documented so solved vectors can be
 * compared by configuration key. */
inline Sector enumerate_sector(int L, const Occ& totals) {
    if (L < 1) throw std::invalid_argument("enumerate_sector: L must be >= 1");
    Sector sec;
    sec.L = L;
    sec.totals = totals;
    size_t n = totals.size();
    RingState current(static_cast<size_t>(L), Occ(n, 0));
    Occ rem = totals;

    auto recurse = [&](auto&& self, int site) -> void {
        if (site == L - 1) {
            current[static_cast<size_t>(site)] = rem;
            sec.states.push_back(current);
            return;
        }
        Occ v(n, 0);
        for (;;) {
            current[static_cast<size_t>(site)] = v;
            Occ save = rem;
            for (size_t a = 0; a < n; ++a) rem[a] -= v[a];
            self(self, site + 1);
            rem = save;
            /* lexicographic successor of v within the box 0 <= v_a <= rem_a */
            size_t a = n;
            while (a > 0) {
                --a;
                if (v[a] < rem[a]) {
                    ++v[a];
                    for (size_t k = a + 1; k < n; ++k) v[k] = 0;
                    break;
                }
                if (a == 0) return;
            }
        }
    };
    recurse(recurse, 0);
    for (int i = 0; i < sec.dim(); ++i) sec.index.emplace(sec.states[static_cast<size_t>(i)], i);
    return sec;
}

/* ----- discrete time: Markov transfer matrix ----- */

/* T(lambda | mu_1..mu_L) on the sector, entries T(out, in). Built by summing
 * over the occupancies gamma_i carried on the auxiliary lane: gamma_i <= beta_i
 * componentwise (which makes the lane trace finite), the new site occupancy
 * is alpha_i = gamma_{i-1} + beta_i - gamma_i, and the weight is
 * prod_i Phi_q(gamma_i | beta_i; lambda, mu_i). Sum over out-states is 1.
 * Requires the regime 0 < mu_i < lambda < 1 that makes entries probabilities. */
inline Eigen::MatrixXd transfer_matrix(const Sector& sec, double lambda,
                                       const std::vector<double>& mu_list, double q) {
    if (static_cast<int>(mu_list.size()) != sec.L)
        throw std::invalid_argument("transfer_matrix: need one mu per site");
    if (!(q > 0.0 && q < 1.0 && lambda > 0.0 && lambda < 1.0))
        throw regime_error("transfer_matrix: need 0 < q, lambda < 1");
    for (double mu : mu_list)
        if (!(mu > 0.0 && mu < lambda))
            throw regime_error("transfer_matrix: need 0 < mu_i < lambda");

    int L = sec.L;
    size_t n = sec.totals.size();
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(sec.dim(), sec.dim());

    for (int col = 0; col < sec.dim(); ++col) {
        const RingState& beta = sec.states[static_cast<size_t>(col)];
        /* odometer over gamma_i in the boxes [0, beta_i] */
        std::vector<Occ> gamma(static_cast<size_t>(L), Occ(n, 0));
        for (;;) {
            double w = 1.0;
            for (int i = 0; i < L && w != 0.0; ++i)
                w *= phi_q(gamma[static_cast<size_t>(i)], beta[static_cast<size_t>(i)], lambda,
                           mu_list[static_cast<size_t>(i)], q);
            if (w != 0.0) {
                RingState alpha(static_cast<size_t>(L), Occ(n, 0));
                for (int i = 0; i < L; ++i) {
                    const Occ& gprev = gamma[static_cast<size_t>((i + L - 1) % L)];
                    for (size_t a = 0; a < n; ++a)
                        alpha[static_cast<size_t>(i)][a] =
                            gprev[a] + beta[static_cast<size_t>(i)][a] - gamma[static_cast<size_t>(i)][a];
                }
                T(sec.index.at(alpha), col) += w;
            }
            /* advance the odometer */
            int i = 0;
            size_t a = 0;
            for (;;) {
                if (i == L) break;
                if (gamma[static_cast<size_t>(i)][a] < beta[static_cast<size_t>(i)][a]) {
                    ++gamma[static_cast<size_t>(i)][a];
                    break;
                }
                gamma[static_cast<size_t>(i)][a] = 0;
                if (++a == n) {
                    a = 0;
                    ++i;
                }
            }
            if (i == L) break;
        }
    }
    return T;
}

/* ----- continuous time: local rates and generators ----- */

/* Right-hop rate w_+(gamma|alpha) and left-hop rate w_-(gamma|beta) for a
 * departing multiset gamma != 0 (epsilon = +1 regime; mu may be evaluated
 * outside (0,1) for algebraic checks). */
inline double w_plus(const Occ& gamma, const Occ& alpha, double q, double mu) {
    int g = total(gamma);
    if (g < 1) throw std::invalid_argument("w_plus: gamma must be nonzero");
    double binoms = 1.0;
    Occ diff(alpha.size());
    for (size_t i = 0; i < alpha.size(); ++i) {
        if (gamma[i] < 0 || gamma[i] > alpha[i]) return 0.0;
        diff[i] = alpha[i] - gamma[i];
        binoms *= qseries::q_binomial(alpha[i], gamma[i], q);
    }
    int a = total(alpha);
    return std::pow(q, static_cast<double>(varphi(diff, gamma))) * qseries::pow_int(mu, g - 1) *
           qseries::q_pochhammer(q, q, g - 1) /
           qseries::q_pochhammer(mu * qseries::pow_int(q, a - g), q, g) * binoms;
}

inline double w_minus(const Occ& gamma, const Occ& beta, double q, double mu) {
    int g = total(gamma);
    if (g < 1) throw std::invalid_argument("w_minus: gamma must be nonzero");
    double binoms = 1.0;
    Occ diff(beta.size());
    for (size_t i = 0; i < beta.size(); ++i) {
        if (gamma[i] < 0 || gamma[i] > beta[i]) return 0.0;
        diff[i] = beta[i] - gamma[i];
        binoms *= qseries::q_binomial(beta[i], gamma[i], q);
    }
    int b = total(beta);
    return std::pow(q, static_cast<double>(varphi(gamma, diff))) *
           qseries::q_pochhammer(q, q, g - 1) /
           qseries::q_pochhammer(mu * qseries::pow_int(q, b - g), q, g) * binoms;
}

/* escape rates: minus the h_+/h_- diagonal for a departure occupancy */
inline double escape_plus(int occ_total, double q, double mu) {
    double s = 0.0, qk = 1.0;
    for (int k = 0; k < occ_total; ++k) {
        s += qk / (1.0 - mu * qk);
        qk *= q;
    }
    return s;
}

inline double escape_minus(int occ_total, double q, double mu) {
    double s = 0.0, qk = 1.0;
    for (int k = 0; k < occ_total; ++k) {
        s += 1.0 / (1.0 - mu * qk);
        qk *= q;
    }
    return s;
}

/* All nonzero leaving multisets gamma <= occ, gamma != 0, in the box order. */
inline std::vector<Occ> leaving_multisets(const Occ& occ) {
    std::vector<Occ> out;
    size_t n = occ.size();
    Occ g(n, 0);
    for (;;) {
        size_t a = n;
        bool advanced = false;
        while (a > 0) {
            --a;
            if (g[a] < occ[a]) {
                ++g[a];
                for (size_t k = a + 1; k < n; ++k) g[k] = 0;
                advanced = true;
                break;
            }
        }
        if (!advanced) break;
        out.push_back(g);
    }
    return out;
}

/* Pairwise action of the local generators on adjacent occupancies
 * (alpha, beta): transitions (new pair -> rate) plus the diagonal entry. */
struct LocalAction {
    std::vector<std::pair<std::pair<Occ, Occ>, double>> moves;
    double diagonal = 0.0;
};

inline LocalAction local_h(char kind, const Occ& alpha, const Occ& beta, double q, double mu) {
    LocalAction act;
    if (kind == '+') {
        for (const Occ& g : leaving_multisets(alpha)) {
            double r = w_plus(g, alpha, q, mu);
            if (r == 0.0) continue;
            Occ na = alpha, nb = beta;
            for (size_t i = 0; i < g.size(); ++i) {
                na[i] -= g[i];
                nb[i] += g[i];
            }
            act.moves.push_back({{na, nb}, r});
        }
        act.diagonal = -escape_plus(total(alpha), q, mu);
    } else if (kind == '-') {
        for (const Occ& g : leaving_multisets(beta)) {
            double r = w_minus(g, beta, q, mu);
            if (r == 0.0) continue;
            Occ na = alpha, nb = beta;
            for (size_t i = 0; i < g.size(); ++i) {
                na[i] += g[i];
                nb[i] -= g[i];
            }
            act.moves.push_back({{na, nb}, r});
        }
        act.diagonal = -escape_minus(total(beta), q, mu);
    } else {
        throw std::invalid_argument("local_h: kind must be '+' or '-'");
    }
    return act;
}

/* H = a H_+ + b H_- assembled periodically over the sector; every column
 * sums to zero and off-diagonal entries are the hop rates. */
inline Eigen::SparseMatrix<double> build_h(const Sector& sec, double q, double mu, double a = 1.0,
                                           double b = 0.0) {
    std::vector<Eigen::Triplet<double>> trip;
    int L = sec.L;
    for (int col = 0; col < sec.dim(); ++col) {
        const RingState& st = sec.states[static_cast<size_t>(col)];
        double diag = 0.0;
        for (int i = 0; i < L; ++i) {
            int j = (i + 1) % L;
            auto bond = [&](char kind, double weight) {
                if (weight == 0.0) return;
                LocalAction act = local_h(kind, st[static_cast<size_t>(i)], st[static_cast<size_t>(j)], q, mu);
                diag += weight * act.diagonal;
                for (auto& [pair, rate] : act.moves) {
                    RingState ns = st;
                    ns[static_cast<size_t>(i)] = pair.first;
                    ns[static_cast<size_t>(j)] = pair.second;
                    trip.emplace_back(sec.index.at(ns), col, weight * rate);
                }
            };
            bond('+', a);
            bond('-', b);
        }
        trip.emplace_back(col, col, diag);
    }
    Eigen::SparseMatrix<double> H(sec.dim(), sec.dim());
    H.setFromTriplets(trip.begin(), trip.end());
    return H;
}

/* ----- stationary state ----- */

/* Normalized stationary vector: the null vector of a generator, or the
 * fixed vector of a transfer matrix (pass is_generator = false). Dense SVD
 * with a uniqueness check on the second-smallest singular value. */
inline Eigen::VectorXd stationary_solve(const Eigen::MatrixXd& M, bool is_generator = true) {
    int d = static_cast<int>(M.rows());
    if (d != M.cols()) throw std::invalid_argument("stationary_solve: matrix must be square");
    if (d > 2000) throw std::invalid_argument("stationary_solve: dense path limited to dim <= 2000");
    Eigen::MatrixXd A = is_generator ? M : Eigen::MatrixXd(M - Eigen::MatrixXd::Identity(d, d));
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (d >= 2 && sv(d - 2) <= 1e-8)
        throw std::runtime_error("stationary_solve: stationary state not unique in this sector");
    Eigen::VectorXd v = svd.matrixV().col(d - 1);
    /* fix the sign by the dominant entry, then normalize to total mass 1 */
    int imax = 0;
    for (int i = 1; i < d; ++i)
        if (std::abs(v(i)) > std::abs(v(imax))) imax = i;
    if (v(imax) < 0) v = -v;
    double sum = v.sum();
    return v / sum;
}

inline Eigen::VectorXd stationary_solve(const Eigen::SparseMatrix<double>& M,
                                        bool is_generator = true) {
    return stationary_solve(Eigen::MatrixXd(M), is_generator);
}

}  // namespace zrp::dynamics
