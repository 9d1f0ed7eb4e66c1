/* SPDX-License-Identifier: Apache-2.0 */

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "example_vectors.hpp"
#include "zrp/qboson.hpp"

using namespace zrp;
using namespace zrp::qboson;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("q-boson generators") {
    double q = 0.6;
    int n = 8;
    auto b = build_b<double>(n), c = build_c<double>(n, q), k = build_k<double>(n, q);

    SECTION("basic actions") {
        /* c|0> = 0 */
        for (int i = 0; i <= n; ++i) CHECK(c(i, 0) == 0.0);
        /* c b |m> = (1 - q^{m+1}) |m> below the cutoff */
        auto cb = c * b;
        for (int m = 0; m < n; ++m)
            CHECK_THAT(cb(m, m), WithinRel(1.0 - std::pow(q, m + 1), 1e-14));
        /* k diagonal 1, q, q^2, ... */
        for (int m = 0; m <= n; ++m) CHECK(k(m, m) == qseries::pow_int(q, m));
    }

    SECTION("algebra relations on the untruncated sub-block") {
        auto kb = k * b, bk = b * k, kc = k * c, ck = c * k;
        auto bc = b * c, cb = c * b;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                CHECK_THAT(kb(i, j), WithinAbs(q * bk(i, j), 1e-14));
                CHECK_THAT(kc(i, j), WithinAbs(ck(i, j) / q, 1e-14));
                double id = i == j ? 1.0 : 0.0;
                CHECK_THAT(bc(i, j), WithinAbs(id - k(i, j), 1e-14));
                CHECK_THAT(cb(i, j), WithinAbs(id - q * k(i, j), 1e-14));
            }
    }
}

TEST_CASE("trace machinery") {
    double q = 0.45;
    int n = 60;
    auto b = build_b<double>(n), c = build_c<double>(n, q), k = build_k<double>(n, q);

    SECTION("geometric trace of k powers") {
        for (int r = 1; r <= 4; ++r) {
            FockOperator<double> kr = FockOperator<double>::identity(n);
            for (int i = 0; i < r; ++i) kr = kr * k;
            CHECK_THAT(fock_trace(kr), WithinRel(1.0 / (1.0 - std::pow(q, r)), 1e-12));
        }
    }

    SECTION("unbalanced words have exactly zero trace") {
        CHECK(fock_trace(b) == 0.0);
        CHECK(fock_trace(b * k * c * c) == 0.0);
        CHECK(fock_trace(b * b * k * c) == 0.0);
    }

    SECTION("golden word traces at several q") {
        for (double qq : {0.3, 0.6, 0.9}) {
            /* adaptive cutoff: grow until the trace settles */
            auto tr = [&](auto word_builder) {
                double prev = 0.0;
                for (int nn = 20;; nn *= 2) {
                    double v = word_builder(nn);
                    if (nn > 20 && std::abs(v - prev) <= 1e-12 * std::abs(v)) return v;
                    prev = v;
                    if (nn > 4000) FAIL("trace did not settle");
                }
            };
            double t1 = tr([&](int nn) {
                auto bb = build_b<double>(nn), cc = build_c<double>(nn, qq), kk = build_k<double>(nn, qq);
                return fock_trace(bb * bb * kk * cc * cc);
            });
            CHECK_THAT(t1, WithinRel(1.0 / (1.0 - qq * qq * qq), 1e-10));

            double t2 = tr([&](int nn) {
                auto bb = build_b<double>(nn), cc = build_c<double>(nn, qq), kk = build_k<double>(nn, qq);
                return fock_trace(bb * cc * bb * kk * cc);
            });
            double expect = (1 + qq * qq) * (1 + qq * qq) * qseries::q_pochhammer(qq, qq, 1) *
                            qseries::q_pochhammer(qq, qq, 2) / qseries::q_pochhammer(qq, qq, 4);
            CHECK_THAT(t2, WithinRel(expect, 1e-10));
        }
    }
}

TEST_CASE("matrix product operators") {
    ModelParams p(0.5, 0.4);
    int n = 12;

    SECTION("vacuum column of the empty-site operator") {
        auto x00 = build_x(0, 0, n, p);
        CHECK(x00(0, 0) == 1.0);  /* g_0 */
        for (int j = 1; j <= n; ++j) CHECK(x00(j, 0) == qseries::g_factor(j, p));
    }

    SECTION("cutoff guard") {
        CHECK_THROWS_AS(build_x(5, 0, 4, p), insufficient_cutoff);
        CHECK_THROWS_AS(build_a(5, 0.5, 4, p.q, p.mu), insufficient_cutoff);
    }

    SECTION("generating series matches the weighted sum of fixed-occupancy operators") {
        double y = 0.55;
        for (int d : {0, 1, 2}) {
            auto a = build_a(d, y, n, p);
            FockOperator<double> sum(n);
            double yn = 1.0;
            for (int nn = 0;; ++nn) {
                auto x = build_x(d, nn, n, p);
                x *= yn;
                sum += x;
                yn *= y;
                if (yn < 1e-16) break;
            }
            for (int i = 0; i <= n; ++i)
                for (int j = 0; j <= n; ++j)
                    CHECK_THAT(a(i, j), WithinAbs(sum(i, j), 1e-12 * std::max(1.0, std::abs(sum(i, j)))));
        }
    }

    SECTION("vacuum expectations of A-words") {
        double y = 0.5;
        CHECK_THAT(vacuum_expect(build_a(0, y, 1, p)), WithinRel(qseries::lambda_y(y, p), 1e-13));

        /* <0|A_0^L|0> = Lambda^L: levels above the total defect count cannot
         * contribute, so a small cutoff is exact */
        int L = 12;
        auto a0 = build_a(0, y, 6, p);
        FockOperator<double> prod = FockOperator<double>::identity(6);
        for (int i = 0; i < L; ++i) prod = prod * a0;
        CHECK_THAT(vacuum_expect(prod), WithinRel(std::pow(qseries::lambda_y(y, p), L), 1e-11));
    }

    SECTION("defect words renormalize to scalar prefactors at large L") {
        /* Lambda^{-L} <0|A_{d1}..A_{ds} A_0^{L-s}|0> -> y^{-sum d} g_{d1}..g_{ds} */
        double y = 0.6;
        std::vector<int> d{2, 1};
        int L = 40, nf = 6;
        auto a0 = build_a(0, y, nf, p);
        FockOperator<double> prod = build_a(d[0], y, nf, p) * build_a(d[1], y, nf, p);
        for (int i = 0; i < L - 2; ++i) prod = prod * a0;
        double lhs = vacuum_expect(prod) / std::pow(qseries::lambda_y(y, p), L);
        double rhs = std::pow(y, -3) * qseries::g_factor(2, p) * qseries::g_factor(1, p);
        CHECK_THAT(lhs, WithinRel(rhs, 1e-8));
    }
}

TEST_CASE("stationary weights on the three-site ring") {
    SECTION("cyclic shift invariance") {
        ModelParams p(0.35, 0.55);
        std::vector<std::pair<int, int>> cfg{{1, 0}, {0, 2}, {1, 1}};
        double w = stationary_probability(cfg, p);
        for (int r = 1; r < 3; ++r) {
            std::vector<std::pair<int, int>> rot;
            for (int i = 0; i < 3; ++i) rot.push_back(cfg[static_cast<size_t>((i + r) % 3)]);
            CHECK_THAT(stationary_probability(rot, p), WithinRel(w, 1e-12));
        }
    }

    SECTION("insufficient second-class content is rejected") {
        CHECK_THROWS_AS(stationary_probability({{1, 0}, {2, 0}, {0, 0}}, ModelParams(0.5, 0.5)),
                        std::invalid_argument);
    }

    SECTION("exact polynomial stationary vectors at mu = -kappa") {
        std::mt19937 rng(91);
        std::uniform_real_distribution<double> uq(0.15, 0.85), uk(0.05, 0.9);
        for (int rep = 0; rep < 5; ++rep) {
            double q = uq(rng), kappa = uk(rng), mu = -kappa;

            for (auto& [vec, m2] :
                 {std::pair{zrp_tests::example_vector_12(q, kappa), 2},
                  std::pair{zrp_tests::example_vector_21(q, kappa), 1}}) {
                /* normalize both vectors by their total mass and compare */
                double wsum = 0.0, csum = 0.0;
                std::map<zrp_tests::Config, double> weights;
                for (auto& [cfg, coeff] : vec) {
                    double w = stationary_probability<double>(cfg, q, mu);
                    weights[cfg] = w;
                    wsum += w;
                    csum += coeff;
                }
                for (auto& [cfg, coeff] : vec)
                    CHECK_THAT(weights[cfg] / wsum, WithinRel(coeff / csum, 1e-9));
                (void)m2;
            }
        }
    }
}
