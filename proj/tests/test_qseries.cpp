/* SPDX-License-Identifier: Apache-2.0 */

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "zrp/qseries.hpp"

using namespace zrp;
using namespace zrp::qseries;

TEST_CASE("finite q-Pochhammer") {
    CHECK(q_pochhammer(0.3, 0.5, 0) == 1.0);
    /* direct product (1-0.3)(1-0.15) */
    CHECK_THAT(q_pochhammer(0.3, 0.5, 2), Catch::Matchers::WithinRel(0.595, 1e-15));
    CHECK(q_pochhammer(1.0, 0.5, 3) == 0.0);

    SECTION("recurrence (z)_{m+1} = (z)_m (1-z q^m) holds exactly") {
        std::mt19937 rng(41);
        std::uniform_real_distribution<double> u(0.05, 0.95);
        for (int rep = 0; rep < 20; ++rep) {
            double z = u(rng), q = u(rng);
            for (int m = 0; m < 8; ++m)
                CHECK(q_pochhammer(z, q, m + 1) == q_pochhammer(z, q, m) * (1.0 - z * pow_int(q, m)));
        }
    }
}

TEST_CASE("infinite q-Pochhammer") {
    CHECK(q_pochhammer_inf(0.0, 0.7) == 1.0);

    /* oracle: plain 60-term Euler product */
    auto product60 = [](double z, double q) {
        double p = 1.0, zq = z;
        for (int j = 0; j < 60; ++j) {
            p *= 1.0 - zq;
            zq *= q;
        }
        return p;
    };
    CHECK_THAT(q_pochhammer_inf(0.5, 0.5), Catch::Matchers::WithinRel(product60(0.5, 0.5), 1e-14));
    CHECK_THAT(q_pochhammer_inf(0.5, 0.5), Catch::Matchers::WithinRel(0.2887880951, 1e-9));
    /* (q;q)_inf at q = 0.5 is the same number */
    CHECK_THAT(q_pochhammer_inf(0.5, 0.5), Catch::Matchers::WithinRel(q_pochhammer_inf(0.5 * (1.0 - 1e-16), 0.5), 1e-12));

    SECTION("agreement with an exhaustive product") {
        auto product_full = [](double z, double q) {
            double p = 1.0, zq = z;
            while (std::abs(zq) > 1e-17 * (1.0 - q)) {
                p *= 1.0 - zq;
                zq *= q;
            }
            return p;
        };
        std::mt19937 rng(42);
        std::uniform_real_distribution<double> u(0.05, 0.95);
        for (int rep = 0; rep < 30; ++rep) {
            double z = u(rng), q = u(rng);
            CHECK_THAT(q_pochhammer_inf(z, q), Catch::Matchers::WithinRel(product_full(z, q), 1e-11));
            CHECK_THAT(q_pochhammer_inf(-z, q), Catch::Matchers::WithinRel(product_full(-z, q), 1e-11));
        }
    }

    CHECK_THROWS_AS(q_pochhammer_inf(1.0, 0.5), zrp::domain_error);
    CHECK_THROWS_AS(q_pochhammer_inf(-1.2, 0.5), zrp::domain_error);
}

TEST_CASE("q-binomial") {
    CHECK(q_binomial(5, 0, 0.3) == 1.0);
    CHECK_THAT(q_binomial(2, 1, 0.5), Catch::Matchers::WithinRel(1.5, 1e-15)); /* 1 + q */
    CHECK(q_binomial(3, 5, 0.5) == 0.0);
    CHECK(q_binomial(3, -1, 0.5) == 0.0);

    SECTION("symmetry and factorial form") {
        std::mt19937 rng(43);
        std::uniform_real_distribution<double> u(0.1, 0.9);
        for (int rep = 0; rep < 10; ++rep) {
            double q = u(rng);
            for (int m = 0; m <= 8; ++m)
                for (int k = 0; k <= m; ++k) {
                    CHECK_THAT(q_binomial(m, k, q), Catch::Matchers::WithinRel(q_binomial(m, m - k, q), 1e-13));
                    double factorial = q_pochhammer(q, q, m) /
                                       (q_pochhammer(q, q, k) * q_pochhammer(q, q, m - k));
                    CHECK_THAT(q_binomial(m, k, q), Catch::Matchers::WithinRel(factorial, 1e-12));
                }
        }
    }
}

TEST_CASE("g factor") {
    ModelParams p(0.5, 0.4);
    CHECK(g_factor(0, p) == 1.0);
    CHECK_THAT(g_factor(1, p), Catch::Matchers::WithinRel(1.2, 1e-15));   /* (1-0.4)/(1-0.5) */
    CHECK_THAT(g_factor(2, p), Catch::Matchers::WithinRel(1.28, 1e-15)); /* (0.6*0.8)/(0.5*0.75) */
}

TEST_CASE("q-digamma f") {
    CHECK(f_digamma(0.0, 0.5) == 0.0);

    /* small argument: f(z) ~ z/(1-q) */
    CHECK_THAT(f_digamma(1e-4, 0.5), Catch::Matchers::WithinRel(1e-4 / 0.5, 1e-2));

    SECTION("dual series oracle") {
        /* direct sum of z^i/(1-q^i); 200 terms pin the spec point, and the
         * sum is extended until the tail is negligible for random draws */
        auto direct = [](double z, double q, int min_terms) {
            double s = 0.0, zi = z;
            for (int i = 1; i <= 20000; ++i) {
                double term = zi / (1.0 - std::pow(q, i));
                s += term;
                zi *= z;
                if (i >= min_terms && term < 1e-17 * s) break;
            }
            return s;
        };
        CHECK_THAT(f_digamma(0.5, 0.5), Catch::Matchers::WithinRel(direct(0.5, 0.5, 200), 1e-12));
        std::mt19937 rng(44);
        std::uniform_real_distribution<double> u(0.05, 0.9);
        for (int rep = 0; rep < 20; ++rep) {
            double z = u(rng), q = u(rng);
            CHECK_THAT(f_digamma(z, q), Catch::Matchers::WithinRel(direct(z, q, 1), 1e-11));
        }
    }

    CHECK_THROWS_AS(f_digamma(1.0, 0.5), zrp::domain_error);
}

TEST_CASE("q-digamma derivative h") {
    CHECK(h_deriv(0.0, 0.5) == 0.0);

    SECTION("shift identity h(q z) - h(z) + z/(1-z)^2 = 0") {
        double z = 0.6, q = 0.5;
        double lhs = h_deriv(q * z, q) - h_deriv(z, q) + z / ((1.0 - z) * (1.0 - z));
        CHECK_THAT(lhs, Catch::Matchers::WithinAbs(0.0, 1e-12));
    }

    SECTION("dual series oracle") {
        auto direct = [](double z, double q) {  /* sum_{i>=1} i z^i/(1-q^i) */
            double s = 0.0, zi = z;
            for (int i = 1; i <= 40000; ++i) {
                double term = i * zi / (1.0 - std::pow(q, i));
                s += term;
                zi *= z;
                if (term < 1e-17 * s) break;
            }
            return s;
        };
        CHECK_THAT(h_deriv(0.5, 0.5), Catch::Matchers::WithinRel(direct(0.5, 0.5), 1e-12));
        std::mt19937 rng(45);
        std::uniform_real_distribution<double> u(0.05, 0.9);
        for (int rep = 0; rep < 20; ++rep) {
            double z = u(rng), q = u(rng);
            CHECK_THAT(h_deriv(z, q), Catch::Matchers::WithinRel(direct(z, q), 1e-11));
        }
    }

    SECTION("h = z df/dz against central differences") {
        std::mt19937 rng(46);
        std::uniform_real_distribution<double> uz(0.1, 0.85), uq(0.2, 0.8);
        for (int rep = 0; rep < 10; ++rep) {
            double z = uz(rng), q = uq(rng), step = 1e-6;
            double fd = (f_digamma(z + step, q) - f_digamma(z - step, q)) / (2 * step);
            CHECK_THAT(h_deriv(z, q), Catch::Matchers::WithinRel(z * fd, 1e-6));
        }
    }

    SECTION("f and h strictly increasing") {
        double prev_f = -1.0, prev_h = -1.0;
        for (double z = 0.0; z < 0.95; z += 0.05) {
            double fv = f_digamma(z, 0.6), hv = h_deriv(z, 0.6);
            CHECK(fv > prev_f);
            CHECK(hv > prev_h);
            prev_f = fv;
            prev_h = hv;
        }
    }
}

TEST_CASE("Lambda and eta") {
    ModelParams p(0.5, 0.4);
    CHECK(lambda_y(0.0, p) == 1.0);
    CHECK_THAT(lambda_y(0.5, ModelParams(0.5, 1.0 - 1e-12)), Catch::Matchers::WithinRel(1.0, 1e-10));

    /* ratio of two independently converged products */
    double num = q_pochhammer_inf(0.4 * 0.5, 0.5);
    double den = q_pochhammer_inf(0.5, 0.5);
    CHECK_THAT(lambda_y(0.5, p), Catch::Matchers::WithinRel(num / den, 1e-13));

    CHECK(eta(0, 0.5, p) == 1.0);
    CHECK_THAT(eta(1, 0.5, p), Catch::Matchers::WithinRel(0.625, 1e-15)); /* (1-0.5)/(1-0.2) */

    SECTION("eta decreasing, eta_inf = limit") {
        double prev = 2.0;
        for (int m = 0; m <= 30; ++m) {
            double e = eta(m, 0.5, p);
            CHECK(e < prev);
            prev = e;
        }
        CHECK_THAT(eta(60, 0.5, p), Catch::Matchers::WithinRel(eta_inf(0.5, 0.5, 0.4), 1e-13));
        CHECK_THAT(eta_inf(0.5, 0.5, 0.4) * lambda_y(0.5, p), Catch::Matchers::WithinRel(1.0, 1e-13));
    }

    SECTION("cocycle eta_{i+j}(y) = eta_i(y) eta_j(q^i y)") {
        std::mt19937 rng(47);
        std::uniform_real_distribution<double> u(0.1, 0.9);
        std::uniform_int_distribution<int> ij(0, 5);
        for (int rep = 0; rep < 25; ++rep) {
            double y = u(rng), q = u(rng), mu = u(rng);
            int i = ij(rng), j = ij(rng);
            double lhs = eta(i + j, y, q, mu);
            double rhs = eta(i, y, q, mu) * eta(j, pow_int(q, i) * y, q, mu);
            CHECK_THAT(lhs, Catch::Matchers::WithinRel(rhs, 1e-14));
        }
    }
}

TEST_CASE("fugacity-density bijection") {
    ModelParams p(0.5, 0.4);

    SECTION("round trips") {
        for (double rho : {0.1, 1.5, 7.0}) {
            double y = solve_fugacity(rho, p);
            CHECK(y > 0.0);
            CHECK(y < 1.0);
            CHECK_THAT(density(y, p), Catch::Matchers::WithinRel(rho, 1e-10));
        }
    }

    SECTION("small-density law y ~ (1-q) rho/(1-mu)") {
        double rho = 1e-5;
        double y = solve_fugacity(rho, p);
        CHECK_THAT(y, Catch::Matchers::WithinRel((1.0 - p.q) * rho / (1.0 - p.mu), 1e-2));
    }

    SECTION("q -> 0 limit: rho = (1-mu) y/((1-y)(1-mu y))") {
        ModelParams p0(1e-8, 0.4);
        for (double rho : {0.3, 2.0}) {
            double y = solve_fugacity(rho, p0);
            double lim = (1.0 - p0.mu) * y / ((1.0 - y) * (1.0 - p0.mu * y));
            CHECK_THAT(lim, Catch::Matchers::WithinRel(rho, 1e-6));
        }
    }

    SECTION("monotone: rho1 < rho2 => y1 < y2") {
        double prev = 0.0;
        for (double rho = 0.25; rho < 6.0; rho += 0.25) {
            double y = solve_fugacity(rho, p);
            CHECK(y > prev);
            prev = y;
        }
    }

    CHECK_THROWS_AS(solve_fugacity(0.0, p), std::invalid_argument);
    CHECK_THROWS_AS(solve_fugacity(-1.0, p), std::invalid_argument);
}

TEST_CASE("vertex weight phi") {
    ModelParams p(0.5, 0.4);
    CHECK(phi(0, 0, 0.5, p) == 1.0);
    CHECK(phi(-1, 3, 0.5, p) == 0.0);
    CHECK(phi(4, 3, 0.5, p) == 0.0);

    SECTION("sum rule sum_l phi(l|m) = 1") {
        std::mt19937 rng(48);
        std::uniform_real_distribution<double> u(0.1, 0.9);
        for (int rep = 0; rep < 15; ++rep) {
            double y = u(rng), q = u(rng), mu = u(rng);
            for (int m = 0; m <= 10; ++m) {
                double s = 0.0;
                for (int l = 0; l <= m; ++l) s += phi<double>(l, m, y, q, mu);
                CHECK_THAT(s, Catch::Matchers::WithinAbs(1.0, 1e-13));
            }
        }
    }

    SECTION("y = 1 kills phi(0|m) for m >= 1") {
        for (int m = 1; m <= 5; ++m) CHECK(phi(0, m, 1.0, p) == 0.0);
    }
}

TEST_CASE("scalar identities") {
    SECTION("(q)_d/(mu)_d sum_k (mu)_{d-k}/((1-q^k)(q)_{d-k}) telescopes") {
        std::mt19937 rng(49);
        std::uniform_real_distribution<double> u(0.1, 0.9);
        for (int rep = 0; rep < 10; ++rep) {
            double q = u(rng), mu = u(rng);
            for (int d = 0; d <= 8; ++d) {
                double lhs = 0.0;
                for (int k = 1; k <= d; ++k)
                    lhs += q_pochhammer(mu, q, d - k) /
                           ((1.0 - pow_int(q, k)) * q_pochhammer(q, q, d - k));
                lhs *= q_pochhammer(q, q, d) / q_pochhammer(mu, q, d);
                double rhs = 0.0;
                for (int k = 0; k < d; ++k) rhs += 1.0 / (1.0 - mu * pow_int(q, k));
                CHECK_THAT(lhs, Catch::Matchers::WithinAbs(rhs, 1e-12 * std::max(1.0, std::abs(rhs))));
            }
        }
    }

    SECTION("phi-weighted partial fractions reduce to the mu y chain") {
        /* sum_{j=1}^m phi(m-j|m) sum_{i<j} 1/(1-y q^i) = sum_{k<m} 1/(1-mu y q^k) */
        std::mt19937 rng(50);
        std::uniform_real_distribution<double> u(0.1, 0.9);
        for (int rep = 0; rep < 10; ++rep) {
            double q = u(rng), mu = u(rng), y = u(rng);
            for (int m = 0; m <= 8; ++m) {
                double lhs = 0.0;
                for (int j = 1; j <= m; ++j) {
                    double inner = 0.0;
                    for (int i = 0; i < j; ++i) inner += 1.0 / (1.0 - y * pow_int(q, i));
                    lhs += phi<double>(m - j, m, y, q, mu) * inner;
                }
                double rhs = 0.0;
                for (int k = 0; k < m; ++k) rhs += 1.0 / (1.0 - mu * y * pow_int(q, k));
                CHECK_THAT(lhs, Catch::Matchers::WithinAbs(rhs, 1e-12 * std::max(1.0, std::abs(rhs))));
            }
        }
    }
}

TEST_CASE("model parameter validation") {
    CHECK_THROWS_AS(ModelParams(0.0, 0.5), zrp::regime_error);
    CHECK_THROWS_AS(ModelParams(1.0, 0.5), zrp::regime_error);
    CHECK_THROWS_AS(ModelParams(0.5, 0.0), zrp::regime_error);
    CHECK_THROWS_AS(ModelParams(0.5, 1.0), zrp::regime_error);
    CHECK_THROWS_AS(ModelParams(0.5, 0.5, -1), zrp::regime_error);
    CHECK_NOTHROW(ModelParams(0.5, 0.5));

    CHECK_THROWS_AS(EnsembleParams::from_fugacity(1.5, ModelParams(0.5, 0.5)), zrp::domain_error);
    EnsembleParams ens = EnsembleParams::from_density(1.5, ModelParams(0.5, 0.5));
    CHECK_THAT(EnsembleParams::from_fugacity(ens.y, ModelParams(0.5, 0.5)).rho,
               Catch::Matchers::WithinRel(1.5, 1e-9));
}
