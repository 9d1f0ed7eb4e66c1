/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "zrp/canonical.hpp"
#include "zrp/defect_kernel.hpp"
#include "zrp/dynamics.hpp"
#include "zrp/gillespie.hpp"
#include "zrp/profiles.hpp"
#include "zrp/qboson.hpp"
#include "zrp/qseries.hpp"

/* Named property suites runnable from the command line: each check compares
 * two independent routes to the same quantity and records the worst
 * deviation against its tolerance. The tolerance scale (default 1) exists so
 * a deliberately corrupted run can demonstrate that failures are detected. */

namespace zrp::verify {

struct CheckResult {
    std::string name;
    bool passed = false;
    double worst = 0.0;      /* largest observed deviation */
    double tolerance = 0.0;  /* allowed deviation after scaling */
};

struct SuiteResult {
    std::string suite;
    bool passed = true;
    double seconds = 0.0;
    std::vector<CheckResult> checks;

    int failures() const {
        int f = 0;
        for (const auto& c : checks)
            if (!c.passed) ++f;
        return f;
    }
};

namespace detail {

class Recorder {
public:
    Recorder(SuiteResult& out, double tol_scale) : out_(out), scale_(tol_scale) {}

    /* track the worst deviation of a named check */
    void observe(const std::string& name, double deviation, double tol) {
        for (auto& c : out_.checks)
            if (c.name == name) {
                c.worst = std::max(c.worst, deviation);
                c.tolerance = tol * scale_;
                c.passed = c.worst <= c.tolerance;
                return;
            }
        CheckResult c;
        c.name = name;
        c.worst = deviation;
        c.tolerance = tol * scale_;
        c.passed = c.worst <= c.tolerance;
        out_.checks.push_back(c);
    }

private:
    SuiteResult& out_;
    double scale_;
};

inline std::vector<int> random_pattern(std::mt19937& rng, int smax, int dmax) {
    std::uniform_int_distribution<int> slen(1, smax), dval(0, dmax), dpos(1, dmax);
    int s = slen(rng);
    std::vector<int> d(static_cast<size_t>(s));
    for (int i = 0; i < s; ++i) d[static_cast<size_t>(i)] = dval(rng);
    d.front() = dpos(rng);
    d.back() = dpos(rng);
    return d;
}

/* direct rate-sum current oracle built from the hop rates */
inline profiles::CurrentPair rate_sum_currents(int d, const std::function<double(int)>& prob,
                                               double q, double mu) {
    profiles::CurrentPair j{0.0, 0.0};
    double psum = 0.0;
    for (int n = 1; n < 4000; ++n) {
        double pn = prob(n);
        psum += pn;
        if (pn > 0.0) {
            for (int l = 1; l <= n; ++l) {
                j.plus += l * dynamics::w_plus({0, l}, {d, n}, q, mu) * pn;
                j.minus += l * dynamics::w_minus({0, l}, {d, n}, q, mu) * pn;
            }
        }
        if (n > 20 && pn < 1e-18 * psum) break;
    }
    return j;
}

}  // namespace detail

inline void run_qseries_identities(detail::Recorder& rec, std::mt19937& rng) {
    using namespace qseries;
    std::uniform_real_distribution<double> u(0.1, 0.9);

    for (int rep = 0; rep < 10; ++rep) {
        double z = u(rng), q = u(rng), mu = u(rng), y = u(rng);

        for (int m = 0; m < 8; ++m) {
            double lhs = q_pochhammer(z, q, m + 1);
            double rhs = q_pochhammer(z, q, m) * (1.0 - z * pow_int(q, m));
            rec.observe("pochhammer recurrence", std::abs(lhs - rhs), 0.0);
        }

        /* dual series for f and h */
        double direct_f = 0.0, direct_h = 0.0, zi = z;
        for (int i = 1; i <= 4000; ++i) {
            double den = 1.0 - std::pow(q, i);
            direct_f += zi / den;
            direct_h += i * zi / den;
            zi *= z;
            if (zi < 1e-20) break;
        }
        rec.observe("q-digamma dual series", std::abs(f_digamma(z, q) - direct_f), 1e-11);
        rec.observe("q-digamma derivative dual series", std::abs(h_deriv(z, q) - direct_h), 1e-10);

        /* h = z df/dz by central differences */
        double step = 1e-6;
        double fd = z * (f_digamma(std::min(z + step, 1 - 1e-12), q) - f_digamma(z - step, q)) / (2 * step);
        rec.observe("h equals z df/dz", std::abs(h_deriv(z, q) - fd) / std::max(1.0, fd), 1e-6);

        /* telescoping identity over the finite mu chain */
        for (int dd = 0; dd <= 8; ++dd) {
            double lhs = 0.0;
            for (int k = 1; k <= dd; ++k)
                lhs += q_pochhammer(mu, q, dd - k) / ((1.0 - pow_int(q, k)) * q_pochhammer(q, q, dd - k));
            lhs *= q_pochhammer(q, q, dd) / q_pochhammer(mu, q, dd);
            double rhs = 0.0;
            for (int k = 0; k < dd; ++k) rhs += 1.0 / (1.0 - mu * pow_int(q, k));
            rec.observe("mu-chain telescope", std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)), 1e-12);
        }

        /* phi-weighted partial fraction identity */
        for (int m = 0; m <= 8; ++m) {
            double lhs = 0.0;
            for (int j = 1; j <= m; ++j) {
                double inner = 0.0;
                for (int i = 0; i < j; ++i) inner += 1.0 / (1.0 - y * pow_int(q, i));
                lhs += phi<double>(m - j, m, y, q, mu) * inner;
            }
            double rhs = 0.0;
            for (int k = 0; k < m; ++k) rhs += 1.0 / (1.0 - mu * y * pow_int(q, k));
            rec.observe("phi partial fractions", std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)), 1e-12);
        }

        /* vertex weight sum rule and eta cocycle */
        for (int m = 0; m <= 10; ++m) {
            double s = 0.0;
            for (int l = 0; l <= m; ++l) s += phi<double>(l, m, y, q, mu);
            rec.observe("phi sum rule", std::abs(s - 1.0), 1e-13);
        }
        std::uniform_int_distribution<int> ij(0, 5);
        int i = ij(rng), jX = ij(rng);
        double co = eta(i + jX, y, q, mu) - eta(i, y, q, mu) * eta(jX, pow_int(q, i) * y, q, mu);
        rec.observe("eta cocycle", std::abs(co), 1e-14);
    }

    /* fugacity-density bijection */
    ModelParams p(0.5, 0.4);
    double yprev = 0.0;
    for (double rho : {0.1, 0.7, 1.5, 3.0, 7.0}) {
        double y = solve_fugacity(rho, p);
        rec.observe("fugacity round trip", std::abs(density(y, p) - rho) / std::max(1.0, rho), 1e-10);
        rec.observe("fugacity monotone", y > yprev ? 0.0 : 1.0, 0.5);
        yprev = y;
    }
}

inline void run_g_kernel(detail::Recorder& rec, std::mt19937& rng) {
    using namespace defect_kernel;
    std::uniform_real_distribution<double> u(0.25, 0.85);

    for (int rep = 0; rep < 8; ++rep) {
        double q = u(rng), mu = u(rng), y = u(rng);
        std::vector<int> d = detail::random_pattern(rng, 5, 3);
        GKernel<double> ker(d, y, q, mu);
        int tot = ker.total();

        for (int m = 0; m <= 6; ++m) {
            const auto& row = ker.row(m);
            double sum = 0.0;
            for (int l = 0; l < static_cast<int>(row.size()); ++l) {
                sum += row[static_cast<size_t>(l)];
                if (l < d.back() || l > tot + m)
                    rec.observe("kernel support window", std::abs(row[static_cast<size_t>(l)]), 0.0);
            }
            rec.observe("kernel sum rule", std::abs(sum - 1.0), 1e-13);
        }

        for (int m = 0; m <= 6; ++m)
            for (int r = 1; r <= 8; r += 2)
                for (int i = 0; i <= m; ++i)
                    rec.observe("zero run closed vs recursive",
                                std::abs(G_zero_run_closed<double>(m, i, r, y, q, mu) -
                                         G_zero_run_recursive<double>(m, i, r, y, q, mu)),
                                1e-11);

        for (int m = 0; m <= 5; ++m)
            for (int r = 1; r <= 6; ++r)
                rec.observe("F definition vs closed form",
                            std::abs(F_closed<double>(m, r, y, q, mu) - F_def<double>(m, r, y, q, mu)) /
                                std::max(1.0, std::abs(F_def<double>(m, r, y, q, mu))),
                            1e-11);

        /* bracket matrix elements against the Fock product */
        std::vector<int> small = detail::random_pattern(rng, 3, 2);
        int nfock = 10;
        for (int x : small) nfock += x;
        qboson::FockOperator<double> prod = qboson::build_a<double>(small[0], y * 0.8, nfock, q, mu);
        for (size_t i = 1; i < small.size(); ++i)
            prod = prod * qboson::build_a<double>(small[i], y * 0.8, nfock, q, mu);
        for (int m = 0; m <= 4; ++m)
            for (int l = 0; l <= 4; ++l) {
                double oracle = qboson::bracket(prod, m, l, q);
                rec.observe("A bracket vs Fock product",
                            std::abs(bracket_A<double>(m, l, small, y * 0.8, q, mu) - oracle) /
                                std::max(1.0, std::abs(oracle)),
                            1e-10);
            }
    }

    /* fugacity limits of the kernel */
    ModelParams p(0.5, 0.4);
    std::vector<int> d{2, 1, 2};
    GKernel<double> low(d, 1e-10, p.q, p.mu), high(d, 1.0 - 1e-8, p.q, p.mu);
    for (int m = 0; m <= 3; ++m) {
        const auto& rl = low.row(m);
        const auto& rh = high.row(m);
        for (int l = 0; l < static_cast<int>(rl.size()); ++l) {
            rec.observe("kernel y->0 limit",
                        std::abs(rl[static_cast<size_t>(l)] - (l == m + 5 ? 1.0 : 0.0)), 1e-8);
            rec.observe("kernel y->1 limit",
                        std::abs(rh[static_cast<size_t>(l)] - (l == d.back() ? 1.0 : 0.0)), 1e-5);
        }
    }
}

inline void run_theorem_consistency(detail::Recorder& rec, std::mt19937& rng) {
    using namespace profiles;
    std::uniform_real_distribution<double> u(0.25, 0.85), ur(0.3, 4.0);

    for (int rep = 0; rep < 20; ++rep) {
        ModelParams p(u(rng), u(rng));
        double y = qseries::solve_fugacity(ur(rng), p);
        std::vector<int> dv = detail::random_pattern(rng, 4, 3);
        DefectPattern pat(dv);
        int s = pat.size();
        std::uniform_int_distribution<int> pick_r(1, s);
        int r1 = pick_r(rng);
        int r2 = s + 1 + (rep % 3);

        /* normalization and density in both regions */
        for (int region = 0; region < 2; ++region) {
            double psum = 0.0, nsum = 0.0;
            for (int n = 0; n < 4000; ++n) {
                double pn = region == 0 ? p_region1(r1, n, dv, y, p) : p_region2(r2, n, pat, y, p);
                psum += pn;
                nsum += n * pn;
                if (n > 20 && pn < 1e-18 * psum) break;
            }
            rec.observe("occupancy law normalization", std::abs(psum - 1.0), 1e-12);
            double rho_r = region == 0 ? rho_region1(r1, dv, y, p) : rho_region2(r2, pat, y, p);
            rec.observe("density equals weighted occupancy sum",
                        std::abs(nsum - rho_r) / std::max(1.0, std::abs(rho_r)), 1e-10);
        }

        /* current closed forms vs the rate-sum oracle */
        CurrentPair j1 = j_region1(r1, dv, y, p);
        CurrentPair o1 = detail::rate_sum_currents(
            dv[static_cast<size_t>(r1 - 1)], [&](int n) { return p_region1(r1, n, dv, y, p); }, p.q,
            p.mu);
        rec.observe("inside currents vs rate sums",
                    std::max(std::abs(j1.plus - o1.plus) / std::max(1.0, std::abs(o1.plus)),
                             std::abs(j1.minus - o1.minus) / std::max(1.0, std::abs(o1.minus))),
                    1e-9);
        CurrentPair j2 = j_region2(r2, pat, y, p);
        CurrentPair o2 = detail::rate_sum_currents(
            0, [&](int n) { return p_region2(r2, n, pat, y, p); }, p.q, p.mu);
        rec.observe("outside currents vs rate sums",
                    std::max(std::abs(j2.plus - o2.plus) / std::max(1.0, std::abs(o2.plus)),
                             std::abs(j2.minus - o2.minus) / std::max(1.0, std::abs(o2.minus))),
                    1e-9);

        /* the two inside current forms */
        CurrentPair hf = j_region1_hform(r1, dv, y, p);
        rec.observe("current difference form vs h form",
                    std::max(std::abs(j1.plus - hf.plus) / std::max(1.0, std::abs(hf.plus)),
                             std::abs(j1.minus - hf.minus) / std::max(1.0, std::abs(hf.minus))),
                    1e-12);

        /* outside law equals the inside law on the zero-extended pattern */
        std::vector<int> ext = dv;
        ext.resize(static_cast<size_t>(r2), 0);
        for (int n = 0; n <= 8; ++n)
            rec.observe("outside law via zero extension",
                        std::abs(p_region2(r2, n, pat, y, p) - p_region1(r2, n, ext, y, p)), 1e-11);
    }

    /* single and double defect closed forms */
    ModelParams p(0.2, 0.7);
    double y = qseries::solve_fugacity(1.5, p);
    double e1 = qseries::eta(1, y, p), e2 = qseries::eta(2, y, p);
    for (int r = 2; r <= 6; ++r) {
        DefectPattern d1({1});
        double closed = -(1.0 - p.mu) * y * std::pow(e1, r - 1) / ((1.0 - y) * (1.0 - p.mu * y));
        rec.observe("single defect density tail",
                    std::abs(rho_region2_excess(r, d1, y, p) - closed), 1e-11);
        CurrentPair j = j_region2(r, d1, y, p);
        CurrentPair j0 = baseline_currents(y, p);
        double cp = -y * std::pow(e1, r - 1) / ((1.0 - p.mu * y) * (1.0 - p.mu * y));
        double cm = -y * std::pow(e1, r - 1) / ((1.0 - y) * (1.0 - y));
        rec.observe("single defect current tail",
                    std::max(std::abs(j.plus - j0.plus - cp), std::abs(j.minus - j0.minus - cm)), 1e-11);

        DefectPattern d2({2});
        double b21 = 1.0 + p.q;
        double rho2 = -(1.0 - p.mu) * y / p.q * (b21 * std::pow(e1, r - 1) - std::pow(e2, r - 1)) /
                          ((1.0 - y) * (1.0 - p.mu * y)) -
                      (1.0 - p.mu) * y * p.q * std::pow(e2, r - 1) /
                          ((1.0 - y * p.q) * (1.0 - p.mu * y * p.q));
        rec.observe("double defect density tail",
                    std::abs(rho_region2_excess(r, d2, y, p) - rho2), 1e-11);
    }
}

inline void run_dynamics_oracle(detail::Recorder& rec, std::mt19937& rng, bool with_simulation) {
    using namespace dynamics;
    std::uniform_real_distribution<double> u(0.05, 0.95);

    /* vertex weight sum rule */
    for (int rep = 0; rep < 50; ++rep) {
        double q = u(rng);
        double lambda = u(rng);
        double mu = std::max(1e-3, u(rng) * lambda);
        std::uniform_int_distribution<int> tot(0, 6);
        for (int n = 1; n <= 3; ++n) {
            Occ beta(static_cast<size_t>(n), 0);
            beta[0] = tot(rng);
            /* spread the pile a bit */
            if (n > 1 && beta[0] >= 2) {
                beta[static_cast<size_t>(n - 1)] = beta[0] / 2;
                beta[0] -= beta[0] / 2;
            }
            double sum = 0.0;
            Occ g(static_cast<size_t>(n), 0);
            for (;;) {
                sum += phi_q(g, beta, lambda, mu, q);
                size_t a = static_cast<size_t>(n);
                bool adv = false;
                while (a > 0) {
                    --a;
                    if (g[a] < beta[a]) {
                        ++g[a];
                        for (size_t k = a + 1; k < static_cast<size_t>(n); ++k) g[k] = 0;
                        adv = true;
                        break;
                    }
                }
                if (!adv) break;
            }
            rec.observe("vertex weight sum rule", std::abs(sum - 1.0), 1e-12);
        }
    }

    Sector sec = enumerate_sector(3, {2, 1});

    Eigen::MatrixXd T1 = transfer_matrix(sec, 0.6, {0.4, 0.4, 0.4}, 0.5);
    Eigen::MatrixXd T2 = transfer_matrix(sec, 0.85, {0.4, 0.4, 0.4}, 0.5);
    for (int c = 0; c < sec.dim(); ++c)
        rec.observe("transfer matrix stochastic", std::abs(T1.col(c).sum() - 1.0), 1e-12);
    rec.observe("transfer matrices commute", (T1 * T2 - T2 * T1).cwiseAbs().maxCoeff(), 1e-10);

    Eigen::MatrixXd Hp = Eigen::MatrixXd(build_h(sec, 0.5, 0.4, 1.0, 0.0));
    Eigen::MatrixXd Hm = Eigen::MatrixXd(build_h(sec, 0.5, 0.4, 0.0, 1.0));
    rec.observe("generators commute", (Hp * Hm - Hm * Hp).cwiseAbs().maxCoeff(), 1e-10);

    /* the three stationary routes coincide */
    Eigen::VectorXd vt = stationary_solve(T1, false);
    Eigen::VectorXd vh = stationary_solve(Hp + Hm);
    rec.observe("transfer vs generator stationary state", (vt - vh).cwiseAbs().maxCoeff(), 1e-10);
    double wsum = 0.0;
    std::vector<double> w(static_cast<size_t>(sec.dim()));
    for (int i = 0; i < sec.dim(); ++i) {
        std::vector<std::pair<int, int>> cfg;
        for (const Occ& o : sec.states[static_cast<size_t>(i)]) cfg.emplace_back(o[0], o[1]);
        w[static_cast<size_t>(i)] = qboson::stationary_probability(cfg, ModelParams(0.5, 0.4));
        wsum += w[static_cast<size_t>(i)];
    }
    double worst = 0.0;
    for (int i = 0; i < sec.dim(); ++i)
        worst = std::max(worst, std::abs(w[static_cast<size_t>(i)] / wsum - vh(i)) / vh(i));
    rec.observe("matrix product vs generator stationary state", worst, 1e-9);

    if (with_simulation) {
        Sector sec4 = enumerate_sector(4, {1, 2});
        Eigen::VectorXd v4 = stationary_solve(build_h(sec4, 0.5, 0.4, 1.0, 0.7));
        auto res = gillespie::simulate(4, {1, 2}, 0.5, 0.4, 1.0, 0.7, 1000000, 555);
        double worstz = 0.0;
        for (int site = 0; site < 4; ++site) {
            std::vector<double> exact(res.site[0].prob.size(), 0.0);
            for (int i = 0; i < sec4.dim(); ++i)
                exact[static_cast<size_t>(res.flat(
                    sec4.states[static_cast<size_t>(i)][static_cast<size_t>(site)]))] += v4(i);
            for (size_t c = 0; c < exact.size(); ++c) {
                double err = res.site[static_cast<size_t>(site)].stderr_[c];
                double diff = std::abs(res.site[static_cast<size_t>(site)].prob[c] - exact[c]);
                if (err > 0.0)
                    worstz = std::max(worstz, diff / err);
                else if (diff > 1e-12)
                    worstz = 1e9;
            }
        }
        rec.observe("simulation within three standard errors", worstz, 3.0);
    }
}

inline void run_excess_sumrule(detail::Recorder& rec, std::mt19937& rng) {
    using namespace profiles;
    std::uniform_real_distribution<double> u(0.15, 0.85), ur(0.3, 4.0);

    ModelParams pg(0.2, 0.7);
    double yg = qseries::solve_fugacity(1.5, pg);
    for (auto dv : {std::vector<int>{1}, std::vector<int>{2, 1}, std::vector<int>{2, 1, 2, 1},
                    std::vector<int>{1, 2, 2, 3}}) {
        DefectPattern pat(dv);
        rec.observe("total excess equals minus defect count",
                    std::abs(total_excess(pat, yg, pg) + pat.total()), 1e-9);
    }
    for (int rep = 0; rep < 20; ++rep) {
        ModelParams p(u(rng), u(rng));
        double y = qseries::solve_fugacity(ur(rng), p);
        DefectPattern pat(detail::random_pattern(rng, 4, 4));
        rec.observe("total excess equals minus defect count",
                    std::abs(total_excess(pat, y, p) + pat.total()), 1e-9);
    }
}

inline std::vector<std::string> suite_names() {
    return {"qseries-identities", "G-kernel", "theorem-consistency", "dynamics-oracle",
            "excess-sumrule"};
}

inline SuiteResult run_suite(const std::string& name, double tol_scale = 1.0,
                             unsigned seed = 2026) {
    SuiteResult out;
    out.suite = name;
    detail::Recorder rec(out, tol_scale);
    std::mt19937 rng(seed);
    auto t0 = std::chrono::steady_clock::now();
    if (name == "qseries-identities")
        run_qseries_identities(rec, rng);
    else if (name == "G-kernel")
        run_g_kernel(rec, rng);
    else if (name == "theorem-consistency")
        run_theorem_consistency(rec, rng);
    else if (name == "dynamics-oracle")
        run_dynamics_oracle(rec, rng, true);
    else if (name == "excess-sumrule")
        run_excess_sumrule(rec, rng);
    else
        throw std::invalid_argument("unknown suite: " + name);
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.passed = out.failures() == 0;
    return out;
}

}  // namespace zrp::verify
