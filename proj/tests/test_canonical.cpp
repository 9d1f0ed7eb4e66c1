/* SPDX-License-Identifier: Apache-2.0 */

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "zrp/canonical.hpp"

using namespace zrp;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("canonical profile basics") {
    ModelParams p(0.5, 0.4);

    SECTION("no defects: flat by translation invariance") {
        auto res = canonical::canonical_profile(6, DefectPattern(), 7, p);
        for (int r = 1; r < 6; ++r)
            CHECK_THAT(res.rho[static_cast<size_t>(r)], WithinRel(res.rho[0], 1e-12));
        /* all particles accounted for */
        double total = 0.0;
        for (double v : res.rho) total += v;
        CHECK_THAT(total, WithinRel(7.0, 1e-12));
    }

    SECTION("particle number sum rule with defects") {
        auto res = canonical::canonical_profile(5, DefectPattern({2, 1}), 6, p);
        double total = 0.0;
        for (double v : res.rho) total += v;
        CHECK_THAT(total, WithinRel(6.0, 1e-11));
    }

    SECTION("polynomial transfer equals direct enumeration") {
        DefectPattern d({1});
        auto fast = canonical::canonical_profile(4, d, 3, p);
        auto slow = canonical::canonical_profile_enumerate(4, d, 3, p);
        REQUIRE(fast.rho.size() == slow.size());
        for (size_t r = 0; r < slow.size(); ++r)
            CHECK_THAT(fast.rho[r], WithinRel(slow[r], 1e-9));
    }

    SECTION("interior zeros in the cluster are handled") {
        DefectPattern d({1, 0, 2});
        auto fast = canonical::canonical_profile(5, d, 4, p);
        auto slow = canonical::canonical_profile_enumerate(5, d, 4, p);
        for (size_t r = 0; r < slow.size(); ++r)
            CHECK_THAT(fast.rho[r], WithinRel(slow[r], 1e-9));
    }

    SECTION("convergence report") {
        auto res = canonical::canonical_profile(5, DefectPattern({1}), 5, p);
        CHECK(res.t_used >= 2);
        CHECK(res.last_change <= 1e-10);
    }

    SECTION("argument validation") {
        CHECK_THROWS_AS(canonical::canonical_profile(2, DefectPattern({1, 1, 1}), 3, p),
                        std::invalid_argument);
        CHECK_THROWS_AS(canonical::canonical_profile(4, DefectPattern(), 0, p),
                        std::invalid_argument);
    }
}

TEST_CASE("canonical golden point, small size") {
    /* the L=8 and L=10 golden values live in the acceptance suite; this
     * pins the same machinery at a size cheap enough for every test run */
    ModelParams p(0.2, 0.7);
    auto res = canonical::canonical_profile(8, DefectPattern({1}), 12, p);
    CHECK_THAT(res.rho[0], WithinAbs(2.71394, 1e-4));
}
