// test_rng.cpp: seeded streams

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spinbath/rng.hpp"

#include <cmath>
#include <set>

using namespace spinbath;

TEST_CASE("splitmix64 reference values") {
    // first two outputs of the generator seeded with 0
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
    CHECK(splitmix64(0x9e3779b97f4a7c15ULL) == 0x6e789e6aa1b965f4ULL);
}

TEST_CASE("fnv1a64 reference values") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("same seed and name give the same stream") {
    auto a = RngStream::derive(42, streams::couplings_env);
    auto b = RngStream::derive(42, streams::couplings_env);
    for (int k = 0; k < 100; ++k) {
        CHECK(a.next_u64() == b.next_u64());
    }
}

TEST_CASE("distinct names give distinct seeds") {
    std::set<std::uint64_t> seeds;
    for (auto name : {streams::couplings_sys, streams::couplings_env, streams::couplings_int, streams::state_sys,
                      streams::state_env}) {
        seeds.insert(RngStream::derive(1, name).seed());
    }
    CHECK(seeds.size() == 5);
}

TEST_CASE("uniform and normal moments") {
    RngStream r(123);
    const int n = 200000;
    double su = 0, su2 = 0, sn = 0, sn2 = 0;
    for (int k = 0; k < n; ++k) {
        const double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        su += u;
        su2 += u * u;
        const double g = r.normal();
        sn += g;
        sn2 += g * g;
    }
    // 4-sigma bands
    CHECK(std::abs(su / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
    CHECK(std::abs(su2 / n - 1.0 / 3.0) < 4.0 * std::sqrt(4.0 / 45.0 / n));
    CHECK(std::abs(sn / n) < 4.0 / std::sqrt(n));
    CHECK(std::abs(sn2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
}
