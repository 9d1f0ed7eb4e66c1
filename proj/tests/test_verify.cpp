/* SPDX-License-Identifier: Apache-2.0 */

#include <catch2/catch_amalgamated.hpp>

#include "zrp/verify.hpp"

using namespace zrp;

TEST_CASE("verification suites pass on default parameters") {
    for (const std::string& name : verify::suite_names()) {
        verify::SuiteResult res = verify::run_suite(name);
        INFO("suite " << name);
        for (const auto& c : res.checks) {
            INFO(c.name << ": worst " << c.worst << " tol " << c.tolerance);
            CHECK(c.passed);
        }
        CHECK(res.passed);
        CHECK(res.failures() == 0);
        CHECK(res.seconds > 0.0);  /* per-suite timing is reported */
        CHECK(!res.checks.empty());
    }
}

TEST_CASE("corrupted tolerance forces failures") {
    verify::SuiteResult res = verify::run_suite("qseries-identities", 1e-30);
    CHECK_FALSE(res.passed);
    CHECK(res.failures() > 0);
}

TEST_CASE("unknown suite is rejected") {
    CHECK_THROWS_AS(verify::run_suite("no-such-suite"), std::invalid_argument);
}
