#include <catch2/catch_amalgamated.hpp>

#include "collatzlab/json_io.hpp"
#include "collatzlab/mixing.hpp"
#include "support.hpp"

using namespace collatzlab;

TEST_CASE("repeated integrals of the even indicator agree", "[mixing]") {
    RepeatedIntegralReport starts_first = repeated_integral_even(Inner::StartPoint, false);
    CHECK(starts_first.value == Rat(2, 3));
    CHECK(starts_first.assumptions.empty());

    RepeatedIntegralReport steps_first = repeated_integral_even(Inner::StepIndex, true);
    CHECK(steps_first.value == Rat(2, 3));
    CHECK(steps_first.assumptions == std::vector<std::string>{kConjectureAssumption});

    CHECK(starts_first.value == steps_first.value);
    CHECK_THROWS_AS(repeated_integral_even(Inner::StepIndex, false), AssumptionRequired);
}

TEST_CASE("repeated integrals of the mod-3 indicator disagree", "[mixing]") {
    RepeatedIntegralReport starts_first = repeated_integral_mod3(Inner::StartPoint, false);
    CHECK(starts_first.value == Rat(3, 5));

    RepeatedIntegralReport steps_first = repeated_integral_mod3(Inner::StepIndex, true);
    CHECK(steps_first.value == Rat(2, 3));
    CHECK(steps_first.assumptions == std::vector<std::string>{kConjectureAssumption});

    CHECK(starts_first.value != steps_first.value);
    CHECK_THROWS_AS(repeated_integral_mod3(Inner::StepIndex, false), AssumptionRequired);
}

TEST_CASE("triple block encodings", "[mixing]") {
    auto blocks4 = triple_block_encoding(BigNat(4), 4);
    for (const auto& b : blocks4) {
        CHECK(b == std::array<BigNat, 3>{BigNat(4), BigNat(2), BigNat(1)});
    }
    auto blocks8 = triple_block_encoding(BigNat(8), 5);
    CHECK(blocks8[0] == std::array<BigNat, 3>{BigNat(8), BigNat(4), BigNat(2)});
    for (std::size_t m = 1; m < blocks8.size(); ++m)
        CHECK(blocks8[m] == std::array<BigNat, 3>{BigNat(1), BigNat(4), BigNat(2)});

    SECTION("the eventual block is one of the three rotations") {
        const std::vector<std::array<BigNat, 3>> allowed = {
            {BigNat(4), BigNat(2), BigNat(1)},
            {BigNat(2), BigNat(1), BigNat(4)},
            {BigNat(1), BigNat(4), BigNat(2)}};
        for (std::uint64_t k = 1; k <= 300; ++k) {
            CycleInfo c = detect_cycle(BigNat(k));
            std::size_t settle = c.entry / 3 + 2;
            auto blocks = triple_block_encoding(BigNat(k), settle + 4);
            for (std::size_t m = settle; m + 1 < blocks.size(); ++m)
                CHECK(blocks[m] == blocks[m + 1]);
            bool ok = false;
            for (const auto& rot : allowed) ok = ok || blocks.back() == rot;
            CHECK(ok);
        }
    }
}

TEST_CASE("product-metric distance brackets", "[mixing]") {
    using Triples = std::vector<std::array<Rat, 3>>;
    Triples a = {{Rat(4), Rat(2), Rat(1)}, {Rat(4), Rat(2), Rat(1)}};

    SECTION("identical sequences") {
        auto [lo, hi] = tychonoff_distance(a, a, 2);
        CHECK(lo == Rat(0));
        CHECK(hi == Rat(1, 4));
    }
    SECTION("single differing term with an exactly rational norm") {
        // difference (1,2,2) has Euclidean norm exactly 3
        Triples b = {{Rat(5), Rat(4), Rat(3)}, {Rat(4), Rat(2), Rat(1)}};
        auto [lo, hi] = tychonoff_distance(a, b, 1);
        CHECK(lo == Rat(3, 8));  // (3/(1+3)) / 2
        CHECK(hi >= Rat(3, 8) + Rat(1, 2));
        CHECK(hi - (Rat(3, 8) + Rat(1, 2)) <= Rat(BigNat(1), pow2(32)));
    }
    SECTION("orbit encodings: agreement prefix shrinks the distance") {
        auto enc8 = to_rational_triples(triple_block_encoding(BigNat(8), 10));
        auto enc4 = to_rational_triples(triple_block_encoding(BigNat(4), 10));
        auto [lo1, hi1] = tychonoff_distance(enc8, enc4, 10);
        CHECK(hi1 < Rat(1));
        CHECK(lo1 > Rat(0));
        // orbits of 32 and 4 agree from the second block on but differ more
        // at the head; tails agreeing means the bound is dominated by 2^-terms
        auto enc32 = to_rational_triples(triple_block_encoding(BigNat(32), 10));
        auto [lo2, hi2] = tychonoff_distance(enc32, enc32, 10);
        CHECK(lo2 == Rat(0));
        CHECK(hi2 == Rat(BigNat(1), pow2(10)));
    }
    SECTION("bracket properties on random rational triples") {
        testsupport::Rng rng;
        for (int i = 0; i < 30; ++i) {
            Triples x, y;
            unsigned terms = static_cast<unsigned>(rng.below(6)) + 1;
            for (unsigned n = 0; n < terms; ++n) {
                x.push_back({rng.rat(50), rng.rat(50), rng.rat(50)});
                y.push_back({rng.rat(50), rng.rat(50), rng.rat(50)});
            }
            auto [lo, hi] = tychonoff_distance(x, y, terms);
            CHECK(lo <= hi);
            CHECK(Rat(0) <= lo);
            Rat tail(BigNat(1), pow2(terms));
            Rat slack(BigNat(1), pow2(terms + 30));
            CHECK(hi - lo <= tail + slack);
            auto [lo_self, hi_self] = tychonoff_distance(x, x, terms);
            CHECK(lo_self == Rat(0));
            CHECK(hi_self == tail);
        }
    }
    CHECK_THROWS_AS(tychonoff_distance({}, {}, 1), std::invalid_argument);
}

TEST_CASE("empirical phase-limit frequencies", "[mixing]") {
    SECTION("the first twelve starts split evenly") {
        // phase limits along index class 0 for k = 1..12:
        // 1,2,2,4,4,4,2,1,2,1,4,1 -> four of each value
        CHECK(empirical_nu(0, 1, 12) == Rat(1, 3));
        CHECK(empirical_nu(0, 2, 12) == Rat(1, 3));
        CHECK(empirical_nu(0, 4, 12) == Rat(1, 3));
    }
    SECTION("rows sum to one and satisfy the rotation relation") {
        NuTable table = empirical_nu_table(200);
        CHECK(table.excluded == 0);
        for (unsigned i = 0; i < 3; ++i)
            CHECK(table.nu(i, 1) + table.nu(i, 2) + table.nu(i, 4) == Rat(1));
        CHECK(rotation_relation_holds(table));
    }
    SECTION("budget-exceeding starts are excluded, not fatal") {
        TrajectoryBudget tiny{12, 1000000};
        NuTable table = empirical_nu_table(30, tiny);
        CHECK(table.excluded > 0);
        CHECK(table.excluded < 30);
        CHECK(table.included() == table.sample_size - table.excluded);
    }
}

TEST_CASE("the contradiction report", "[mixing]") {
    MixingReport report = contradiction_report(100);
    CHECK(report.contradiction_gap ==
          std::pair<Rat, Rat>{Rat(3, 5), Rat(2, 3)});
    CHECK(report.forced_uniform_value == Rat(1, 3));
    for (const auto& row : report.forced_table)
        for (const auto& cell : row) CHECK(cell == Rat(1, 3));
    CHECK(report.mass_one_and_four == Rat(3, 5));
    CHECK(report.contradiction_gap.first != report.contradiction_gap.second);
    CHECK(report.rotation_relation_holds);
    CHECK(report.assumptions ==
          std::vector<std::string>{kConjectureAssumption, kMixingAssumption});
    CHECK(report.conclusion.find("mixing") != std::string::npos);
    SECTION("serializes with exact rationals") {
        json j = to_json(report);
        CHECK(j["contradiction_gap"][0]["num"] == "3");
        CHECK(j["contradiction_gap"][0]["den"] == "5");
        CHECK(j["empirical"]["sample_size"] == 100);
    }
}
