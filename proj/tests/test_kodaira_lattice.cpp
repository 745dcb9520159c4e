#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ellfib/error.hpp"
#include "ellfib/kodaira_lattice.hpp"
#include "oracles.hpp"

using namespace ellfib;

namespace {

std::vector<KodairaType> all_types(std::uint32_t max_index) {
    std::vector<KodairaType> out;
    for (std::uint32_t n = 0; n <= max_index; ++n) out.push_back(KodairaType::I(n));
    for (std::uint32_t n = 0; n <= max_index; ++n) out.push_back(KodairaType::Istar(n));
    for (auto k : {FibreKind::II, FibreKind::III, FibreKind::IV, FibreKind::IVstar, FibreKind::IIIstar,
                   FibreKind::IIstar})
        out.push_back(KodairaType::of(k));
    return out;
}

// |det| of the Gram matrix after deleting one reduced component: the order of
// the discriminant group of the fibre lattice modulo its radical.
long order_by_minor(const FibreLattice& lat) {
    if (lat.component_count == 1) return 1;
    std::size_t drop = 0;
    while (lat.multiplicities[drop] != 1) ++drop;
    oracle::Matrix m;
    for (std::size_t i = 0; i < lat.component_count; ++i) {
        if (i == drop) continue;
        std::vector<long> row;
        for (std::size_t j = 0; j < lat.component_count; ++j)
            if (j != drop) row.push_back(lat.gram(i, j).get_si());
        m.push_back(row);
    }
    return std::labs(oracle::det_by_elimination(m));
}

long expected_order(const KodairaType& t) {
    switch (t.kind) {
        case FibreKind::I: return std::max<long>(t.index, 1);
        case FibreKind::Istar: return 4;
        case FibreKind::IV:
        case FibreKind::IVstar: return 3;
        case FibreKind::III:
        case FibreKind::IIIstar: return 2;
        default: return 1;
    }
}

}  // namespace

TEST_CASE("lattice_data examples") {
    const auto i0 = lattice_data(KodairaType::I(0));
    CHECK(i0.component_count == 1);
    CHECK(i0.multiplicities == std::vector<long>{1});
    CHECK(i0.gram == IntMatrix{{0}});

    const auto iv = lattice_data(KodairaType::of(FibreKind::IV));
    CHECK(iv.component_count == 3);
    CHECK(iv.multiplicities == std::vector<long>{1, 1, 1});
    CHECK(iv.gram == IntMatrix{{-2, 1, 1}, {1, -2, 1}, {1, 1, -2}});

    const auto d4 = lattice_data(KodairaType::Istar(0));
    CHECK(d4.component_count == 5);
    CHECK(d4.multiplicities == std::vector<long>{1, 1, 1, 1, 2});
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(d4.gram(i, 4) == 1);
        CHECK(d4.gram(i, i) == -2);
    }
    CHECK(d4.gram(4, 4) == -2);

    const auto i2 = lattice_data(KodairaType::I(2));
    CHECK(i2.gram == IntMatrix{{-2, 2}, {2, -2}});
}

TEST_CASE("component counts") {
    for (std::uint32_t n = 0; n <= 12; ++n) {
        CHECK(lattice_data(KodairaType::I(n)).component_count == std::max<std::size_t>(n, 1));
        CHECK(lattice_data(KodairaType::Istar(n)).component_count == n + 5);
    }
    CHECK(lattice_data(KodairaType::of(FibreKind::II)).component_count == 1);
    CHECK(lattice_data(KodairaType::of(FibreKind::III)).component_count == 2);
    CHECK(lattice_data(KodairaType::of(FibreKind::IVstar)).component_count == 7);
    CHECK(lattice_data(KodairaType::of(FibreKind::IIIstar)).component_count == 8);
    CHECK(lattice_data(KodairaType::of(FibreKind::IIstar)).component_count == 9);
}

TEST_CASE("the fibre class is in the radical") {
    for (const auto& t : all_types(12)) {
        const auto lat = lattice_data(t);
        INFO(t.to_string());
        REQUIRE(lat.multiplicities.size() == lat.component_count);
        CHECK(lat.gram == lat.gram.transpose());
        std::vector<Integer> m(lat.multiplicities.begin(), lat.multiplicities.end());
        IntMatrix col(lat.component_count, 1);
        for (std::size_t i = 0; i < m.size(); ++i) col(i, 0) = m[i];
        CHECK((lat.gram * col).is_zero());
    }
}

TEST_CASE("Euler number versus component count") {
    for (const auto& t : all_types(12)) {
        const auto c = lattice_data(t).component_count;
        INFO(t.to_string());
        if (t.is_multiplicative()) CHECK(t.euler_number() == c);
        if (t.is_additive()) CHECK(t.euler_number() == c + 1);
    }
}

TEST_CASE("discriminant group examples") {
    for (std::uint32_t n = 1; n <= 12; ++n) CHECK(discriminant_group(KodairaType::I(n)) == DivisibleGroup::cyclic(n));
    CHECK(discriminant_group(KodairaType::Istar(1)) == DivisibleGroup::cyclic(4));
    CHECK(discriminant_group(KodairaType::Istar(3)) == DivisibleGroup::cyclic(4));
    CHECK(discriminant_group(KodairaType::Istar(0)) == DivisibleGroup(0, {2, 2}));
    CHECK(discriminant_group(KodairaType::Istar(2)) == DivisibleGroup(0, {2, 2}));
    CHECK(discriminant_group(KodairaType::of(FibreKind::II)).is_trivial());
    CHECK(discriminant_group(KodairaType::of(FibreKind::III)) == DivisibleGroup::cyclic(2));
    CHECK(discriminant_group(KodairaType::of(FibreKind::IV)) == DivisibleGroup::cyclic(3));
    CHECK(discriminant_group(KodairaType::I(0)).is_trivial());
}

TEST_CASE("computed and tabulated discriminant groups agree") {
    for (const auto& t : all_types(12)) {
        INFO(t.to_string());
        const auto g = discriminant_group(t);
        CHECK(g == tabulated_discriminant_group(t));
        CHECK(g.divisible_rank() == 0);
        CHECK(g.finite_order() == order_by_minor(lattice_data(t)));
        CHECK(g.finite_order() == expected_order(t));
    }
}

TEST_CASE("punctured Sha") {
    CHECK(sha_punctured_transverse(KodairaType::I(0)) == DivisibleGroup(2, {}));
    CHECK(sha_punctured_transverse(KodairaType::I(5)) == DivisibleGroup(1, {5}));
    CHECK(sha_punctured_transverse(KodairaType::I(5)).to_string() == "(Q/Z)^1 + Z/5");
    CHECK(sha_punctured_transverse(KodairaType::of(FibreKind::IIIstar)) == DivisibleGroup::cyclic(2));
    for (const auto& t : all_types(12)) {
        if (!t.is_additive()) continue;
        CHECK(sha_punctured_transverse(t) == discriminant_group(t));
    }
}

TEST_CASE("d_t examples and errors") {
    CHECK(d_t({1, 2}, {1, 1}) == 1);
    CHECK(d_t({2, 2, 4}, {1, 3, 1}) == 2);
    CHECK(d_t({3}, {2}) == 6);
    for (auto bad : {std::pair<std::vector<long>, std::vector<long>>{{1, 2}, {1}}, {{}, {}}}) {
        try {
            d_t(bad.first, bad.second);
            FAIL("expected LengthMismatch");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::LengthMismatch);
        }
    }
    try {
        d_t({0}, {1});
        FAIL("expected ValidationError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ValidationError);
    }
}
