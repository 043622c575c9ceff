#include <catch2/catch_amalgamated.hpp>

#include "collatzlab/json_io.hpp"
#include "collatzlab/residue.hpp"
#include "support.hpp"

using namespace collatzlab;

namespace {

ClassUnion cls(unsigned offset, unsigned modulus) {
    return ClassUnion::single(ArithClass(BigNat(offset), BigNat(modulus)));
}

} // namespace

TEST_CASE("density of arithmetic progressions", "[residue]") {
    CHECK(density(cls(0, 4)) == Rat(1, 4));
    CHECK(density(unite(cls(0, 2), cls(1, 2))) == Rat(1));
    CHECK(density(cls(1, 6)) == Rat(1, 6));
    CHECK(density(ClassUnion::empty_set()) == Rat(0));
}

TEST_CASE("normalization merges complete coverings", "[residue]") {
    ClassUnion u = unite(cls(0, 2), cls(1, 2));
    CHECK(u == ClassUnion::all_naturals());
    CHECK(u.common_modulus() == BigNat(1));
    // 6N, 6N+2, 6N+4 fold to 2N
    ClassUnion evens = ClassUnion::of_classes(
        {ArithClass(BigNat(0), BigNat(6)), ArithClass(BigNat(2), BigNat(6)),
         ArithClass(BigNat(4), BigNat(6))});
    CHECK(evens == cls(0, 2));
    // offsets reduce below the common modulus
    CHECK(cls(7, 3) == cls(1, 3));
}

TEST_CASE("intersection", "[residue]") {
    ClassUnion lhs = unite(cls(0, 4), cls(1, 2));
    CHECK(intersect(lhs, cls(0, 2)) == cls(0, 4));
    CHECK(intersect(cls(0, 4), cls(1, 2)).is_empty());
    SECTION("CRT with non-coprime moduli") {
        CHECK(intersect(cls(2, 4), cls(0, 6)) == cls(6, 12));
        CHECK(intersect(cls(1, 4), cls(3, 6)) == cls(9, 12));
        CHECK(intersect(cls(1, 4), cls(0, 6)).is_empty());
    }
    SECTION("idempotence, commutativity, associativity on random unions") {
        testsupport::Rng rng;
        for (int i = 0; i < 60; ++i) {
            ClassUnion a = rng.class_union(), b = rng.class_union(), c = rng.class_union();
            CHECK(intersect(a, a) == a);
            CHECK(intersect(a, b) == intersect(b, a));
            CHECK(intersect(intersect(a, b), c) == intersect(a, intersect(b, c)));
        }
    }
}

TEST_CASE("shift", "[residue]") {
    CHECK(shift(cls(0, 2), 1) == cls(1, 2));
    CHECK(density(shift(cls(1, 3), 3)) == Rat(1, 3));
    CHECK(shift(cls(1, 3), 3) == cls(1, 3));  // canonical offsets wrap
    SECTION("density is shift-invariant") {
        testsupport::Rng rng;
        for (int i = 0; i < 100; ++i) {
            ClassUnion u = rng.class_union();
            long long k = static_cast<long long>(rng.below(40)) - 20;
            CHECK(density(shift(u, k)) == density(u));
        }
    }
}

TEST_CASE("empirical density by counting formula", "[residue]") {
    CHECK(empirical_density(cls(0, 2), BigNat(10)) == Rat(5, 10));
    CHECK(empirical_density(cls(2, 4), BigNat(10)) == Rat(3, 10));  // 2, 6, 10
    CHECK_THROWS_AS(empirical_density(cls(0, 2), BigNat(0)), std::invalid_argument);

    SECTION("matches direct enumeration and converges to the density") {
        testsupport::Rng rng;
        for (int i = 0; i < 40; ++i) {
            ClassUnion u = rng.class_union();
            std::uint64_t m = rng.below(3000) + 1;
            Rat emp = empirical_density(u, BigNat(m));
            CHECK(emp == Rat(BigNat(testsupport::enumerated_count(u, m)), BigNat(m)));
            Rat err = (emp - density(u)).abs();
            CHECK(err <= Rat(BigNat(u.class_count()), BigNat(m)));
        }
    }
    SECTION("large-window error bound via the counting formula") {
        testsupport::Rng rng;
        const BigNat window(1000000);
        for (int i = 0; i < 25; ++i) {
            ClassUnion u = rng.class_union();
            Rat err = (empirical_density(u, window) - density(u)).abs();
            CHECK(err <= Rat(u.common_modulus(), window));
        }
    }
}

TEST_CASE("finite additivity on disjoint unions", "[residue]") {
    testsupport::Rng rng;
    for (int i = 0; i < 100; ++i) {
        ClassUnion u = rng.class_union();
        // split the member classes into two disjoint halves
        auto classes = u.classes();
        std::vector<ArithClass> left, right;
        for (std::size_t j = 0; j < classes.size(); ++j)
            (j % 2 == 0 ? left : right).push_back(classes[j]);
        if (left.empty() || right.empty()) continue;
        ClassUnion a = ClassUnion::of_classes(left), b = ClassUnion::of_classes(right);
        REQUIRE(intersect(a, b).is_empty());
        CHECK(density(unite(a, b)) == density(a) + density(b));
    }
}

TEST_CASE("densities lie in [0,1] and partitions sum to 1", "[residue]") {
    testsupport::Rng rng;
    for (int i = 0; i < 100; ++i) {
        ClassUnion u = rng.class_union();
        Rat d = density(u);
        CHECK(Rat(0) <= d);
        CHECK(d <= Rat(1));
    }
    for (unsigned m : {2u, 3u, 5u, 12u}) {
        Rat total(0);
        for (unsigned r = 0; r < m; ++r) total += density(cls(r, m));
        CHECK(total == Rat(1));
    }
}

TEST_CASE("integral of a convergent sequence is its declared limit", "[residue]") {
    ConvergentSeq f = ConvergentSeq::geometric(Rat(2, 3), Rat(-1, 6), Rat(-1, 2));
    CHECK(f.eval(1) == Rat(3, 4));
    CHECK(integral_of_convergent(f) == Rat(2, 3));

    ConvergentSeq g = ConvergentSeq::geometric(Rat(3, 5), Rat(-4, 15), Rat(-1, 4));
    CHECK(g.eval(1) == Rat(2, 3));
    CHECK(g.eval(2) == Rat(7, 12));
    CHECK(integral_of_convergent(g) == Rat(3, 5));

    CHECK(integral_of_convergent(ConvergentSeq::constant(Rat(5, 9))) == Rat(5, 9));
    CHECK(integral_of_convergent(ConvergentSeq::eventually_constant(
              {Rat(1), Rat(0), Rat(1)}, Rat(1, 2))) == Rat(1, 2));

    CHECK_THROWS_AS(integral_of_convergent(ConvergentSeq::undeclared()), NotConvergent);
    CHECK_THROWS_AS(ConvergentSeq::geometric(Rat(1), Rat(1), Rat(3, 2)), std::invalid_argument);
}

TEST_CASE("eventually periodic density ignores the preperiod", "[residue]") {
    CHECK(eventually_periodic_density({}, {true, true, false}) == Rat(2, 3));
    CHECK(eventually_periodic_density({}, {true}) == Rat(1));
    CHECK(eventually_periodic_density({}, {true, false, true}) == Rat(2, 3));
    CHECK(eventually_periodic_density({false, false, false, false}, {true, false}) == Rat(1, 2));
    CHECK_THROWS_AS(eventually_periodic_density({true}, {}), std::invalid_argument);
}

TEST_CASE("class union JSON round trip", "[residue]") {
    ClassUnion u = unite(cls(0, 4), cls(1, 2));
    json j = to_json(u);
    CHECK(j.dump() == R"([{"offset":"0","modulus":"4"},{"offset":"1","modulus":"4"},{"offset":"3","modulus":"4"}])");
    CHECK(class_union_from_json(j) == u);
    testsupport::Rng rng;
    for (int i = 0; i < 30; ++i) {
        ClassUnion v = rng.class_union();
        CHECK(class_union_from_json(to_json(v)) == v);
    }
}
