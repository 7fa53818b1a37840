// test_bessel.cpp: J_k(x) against a 30-digit reference table

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spinbath/bessel.hpp"

#include <cmath>
#include <vector>

using namespace spinbath;

namespace {

struct Ref {
    double x;
    int k;
    double value;
};

const std::vector<Ref> table = {
#include BESSEL_TABLE
};

} // namespace

TEST_CASE("matches the high-precision table") {
    REQUIRE(table.size() > 150);
    double worst = 0.0;
    for (const auto& r : table) {
        const auto j = bessel_j_sequence(r.x, r.k);
        const double err = std::abs(j[static_cast<std::size_t>(r.k)] - r.value);
        worst = std::max(worst, err);
        CAPTURE(r.x);
        CAPTURE(r.k);
        CHECK(err < 1e-14);
        // the recurrence also keeps relative accuracy far into the tail
        if (std::abs(r.value) > 1e-280) {
            CHECK(err / std::abs(r.value) < 1e-11);
        }
    }
    MESSAGE("worst absolute deviation " << worst);
}

TEST_CASE("agrees with the standard library") {
    for (double x : {0.3, 4.0, 17.5, 60.0}) {
        const auto j = bessel_j_sequence(x, 80);
        for (int k = 0; k <= 80; k += 7) {
            CHECK(std::abs(j[static_cast<std::size_t>(k)] - std::cyl_bessel_j(static_cast<double>(k), x)) < 1e-13);
        }
    }
}

TEST_CASE("sum rule and symmetry") {
    for (double x : {0.5, 9.0, 150.0}) {
        const auto j = bessel_j_sequence(x, static_cast<int>(x) + 60);
        double s = j[0] * j[0];
        for (std::size_t k = 1; k < j.size(); ++k) {
            s += 2.0 * j[k] * j[k];
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-13)); // J_0^2 + 2 sum J_k^2 = 1
        const auto m = bessel_j_sequence(-x, static_cast<int>(x) + 60);
        for (int k = 0; k <= 20; ++k) {
            CHECK(m[static_cast<std::size_t>(k)] == (k % 2 ? -1.0 : 1.0) * j[static_cast<std::size_t>(k)]);
        }
    }
    const auto z = bessel_j_sequence(0.0, 5);
    CHECK(z[0] == 1.0);
    CHECK(z[3] == 0.0);
}
