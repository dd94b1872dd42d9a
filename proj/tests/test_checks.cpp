#include "doctest.h"

#include "kawahara/checks.hpp"

using namespace kawahara;

TEST_SUITE("checks")
{
    TEST_CASE("every property check passes")
    {
        for (std::size_t n : {16, 64}) {
            const std::vector<CheckResult> results = run_property_checks(n, 100);
            CHECK(results.size() == 9);
            for (const CheckResult& r : results) {
                INFO(r.name << " at n = " << n << ": worst " << r.worst << ", tolerance " << r.tolerance);
                CHECK(r.passed);
            }
        }
    }

    TEST_CASE("the checks are reproducible for a seed")
    {
        const auto a = run_property_checks(32, 10, 7);
        const auto b = run_property_checks(32, 10, 7);
        REQUIRE(a.size() == b.size());
        for (std::size_t k = 0; k < a.size(); ++k) {
            CHECK(a[k].name == b[k].name);
            CHECK(a[k].worst == b[k].worst);
        }
    }
}
