#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>

#include "ellfib/error.hpp"
#include "ellfib/weierstrass.hpp"

using namespace ellfib;

namespace {

const Valuation inf = Valuation::infinity();

template <class F>
std::optional<ErrorKind> error_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return std::nullopt;
}

// The dispatch table written out as independent predicates; exactly one
// must fire on every minimal consistent profile.
struct Row {
    std::function<bool(const ValuationProfile&)> matches;
    std::function<KodairaType(const ValuationProfile&)> type;
};

std::vector<Row> table_rows() {
    auto ge = [](Valuation v, std::uint32_t n) { return v.at_least(n); };
    auto eq = [](Valuation v, std::uint32_t n) { return v.equals(n); };
    const auto k = [](FibreKind kind) { return [kind](const ValuationProfile&) { return KodairaType::of(kind); }; };
    return {
        {[](const auto& p) { return p.vdelta == 0; }, [](const auto&) { return KodairaType::I(0); }},
        {[=](const auto& p) { return eq(p.va, 0) && eq(p.vb, 0) && p.vdelta > 0; },
         [](const auto& p) { return KodairaType::I(p.vdelta); }},
        {[=](const auto& p) { return ge(p.va, 1) && eq(p.vb, 1); }, k(FibreKind::II)},
        {[=](const auto& p) { return eq(p.va, 1) && ge(p.vb, 2); }, k(FibreKind::III)},
        {[=](const auto& p) { return ge(p.va, 2) && eq(p.vb, 2); }, k(FibreKind::IV)},
        {[=](const auto& p) { return ge(p.va, 2) && ge(p.vb, 3) && p.vdelta == 6; },
         [](const auto&) { return KodairaType::Istar(0); }},
        {[=](const auto& p) { return eq(p.va, 2) && eq(p.vb, 3) && p.vdelta > 6; },
         [](const auto& p) { return KodairaType::Istar(p.vdelta - 6); }},
        {[=](const auto& p) { return ge(p.va, 3) && eq(p.vb, 4); }, k(FibreKind::IVstar)},
        {[=](const auto& p) { return eq(p.va, 3) && ge(p.vb, 5); }, k(FibreKind::IIIstar)},
        {[=](const auto& p) { return ge(p.va, 4) && eq(p.vb, 5); }, k(FibreKind::IIstar)},
    };
}

// All consistent vdelta values up to a bound for the given (va, vb).
std::vector<std::uint32_t> consistent_vdeltas(Valuation va, Valuation vb, std::uint32_t extra) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t d = 0; d <= 40; ++d) {
        const ValuationProfile p{va, vb, d};
        if (p.is_consistent()) out.push_back(d);
        if (out.size() > extra) break;
    }
    return out;
}

ValuationProfile random_consistent(std::mt19937& rng) {
    for (;;) {
        const auto pick = [&](std::uint32_t bound) {
            const auto v = rng() % (bound + 2);
            return v == bound + 1 ? inf : Valuation(static_cast<std::uint32_t>(v));
        };
        const Valuation va = pick(9), vb = pick(13);
        if (va.is_infinite() && vb.is_infinite()) continue;
        auto ds = consistent_vdeltas(va, vb, 4);
        if (ds.empty()) continue;
        return {va, vb, ds[rng() % ds.size()]};
    }
}

ValuationProfile twisted(const ValuationProfile& p, std::uint32_t k) {
    return {p.va + Valuation(4 * k), p.vb + Valuation(6 * k), p.vdelta + 12 * k};
}

}  // namespace

TEST_CASE("minimalize examples") {
    auto r = minimalize({4, 6, 12});
    CHECK(r.profile == ValuationProfile{0, 0, 0});
    CHECK(r.twist_count == 1);

    r = minimalize({0, 0, 5});
    CHECK(r.profile == ValuationProfile{0, 0, 5});
    CHECK(r.twist_count == 0);

    r = minimalize({6, 9, 18});
    CHECK(r.profile == ValuationProfile{2, 3, 6});
    CHECK(r.twist_count == 1);
    CHECK(classify(r.profile) == KodairaType::Istar(0));

    r = minimalize({inf, 13, 26});
    CHECK(r.profile == ValuationProfile{inf, 1, 2});
    CHECK(r.twist_count == 2);
}

TEST_CASE("minimalize rejects inconsistent profiles") {
    CHECK(error_of([] { minimalize({1, 1, 3}); }) == ErrorKind::InvalidProfile);
    CHECK(error_of([] { minimalize({inf, inf, 0}); }) == ErrorKind::InvalidProfile);
    CHECK(error_of([] { minimalize({2, 3, 5}); }) == ErrorKind::InvalidProfile);
}

TEST_CASE("classify examples") {
    CHECK(classify({0, 0, 0}) == KodairaType::I(0));
    CHECK(classify({0, 0, 5}) == KodairaType::I(5));
    CHECK(*j_valuation({0, 0, 5}) == -5);

    const ValuationProfile p{2, 3, 8};
    CHECK(classify(p) == KodairaType::Istar(2));
    CHECK(classify(p).euler_number() == p.vdelta);

    CHECK(classify({1, 1, 2}).to_string() == "II");
    CHECK(classify({1, 2, 3}).to_string() == "III");
    CHECK(classify({2, 2, 4}).to_string() == "IV");
    CHECK(classify({3, 4, 8}).to_string() == "IV*");
    CHECK(classify({3, 5, 9}).to_string() == "III*");
    CHECK(classify({4, 5, 10}).to_string() == "II*");
    CHECK(classify({inf, 3, 6}) == KodairaType::Istar(0));
    CHECK(classify({1, inf, 3}).to_string() == "III");
}

TEST_CASE("classify errors") {
    CHECK(error_of([] { classify({4, 6, 12}); }) == ErrorKind::NotMinimal);
    CHECK(error_of([] { classify({inf, inf, 0}); }) == ErrorKind::InvalidProfile);
    CHECK(error_of([] { classify({0, 0, 0}); }) == std::nullopt);
}

TEST_CASE("type names round trip") {
    for (const char* name : {"I0", "I1", "I12", "I0*", "I3*", "II", "III", "IV", "IV*", "III*", "II*"}) {
        const auto t = KodairaType::parse(name);
        REQUIRE(t);
        CHECK(t->to_string() == name);
    }
    CHECK_FALSE(KodairaType::parse("V"));
    CHECK_FALSE(KodairaType::parse("I"));
    CHECK_FALSE(KodairaType::parse("Ix"));
}

TEST_CASE("canonical profiles classify to their type") {
    std::vector<KodairaType> types;
    for (std::uint32_t n = 0; n <= 12; ++n) {
        types.push_back(KodairaType::I(n));
        types.push_back(KodairaType::Istar(n));
    }
    for (auto k : {FibreKind::II, FibreKind::III, FibreKind::IV, FibreKind::IVstar, FibreKind::IIIstar,
                   FibreKind::IIstar})
        types.push_back(KodairaType::of(k));
    for (const auto& t : types) {
        const auto p = canonical_profile(t);
        CHECK(p.is_consistent());
        CHECK(p.is_minimal());
        CHECK(classify(p) == t);
    }
}

TEST_CASE("discriminant examples") {
    CHECK(discriminant({BivariatePoly(), BivariatePoly::constant(1)}) == BivariatePoly::constant(27));
    CHECK(discriminant({BivariatePoly::constant(-1), BivariatePoly()}) == BivariatePoly::constant(-4));
    const auto s = BivariatePoly::s();
    const auto d = discriminant({s, s});
    CHECK(d == BivariatePoly::constant(4) * s.pow(3) + BivariatePoly::constant(27) * s.pow(2));
    CHECK(d.to_string() == "4*s^3 + 27*s^2");
    CHECK(error_of([] { discriminant({BivariatePoly(), BivariatePoly()}); }) == ErrorKind::DegenerateModel);
}

TEST_CASE("j_valuation examples") {
    for (std::uint32_t n = 0; n < 10; ++n) CHECK(*j_valuation({0, 0, n}) == -static_cast<std::int64_t>(n));
    CHECK(*j_valuation({1, 1, 2}) == 1);
    CHECK_FALSE(j_valuation({inf, 1, 2}).has_value());
}

TEST_CASE("branch_valuation and origin_multiplicity examples") {
    const auto s = BivariatePoly::s(), t = BivariatePoly::t();
    const auto f = s.pow(2) * t.pow(3) + s.pow(3);
    CHECK(branch_valuation(f, Axis::S) == 2);
    CHECK(branch_valuation(f, Axis::T) == 0);
    CHECK(origin_multiplicity(f) == 3);
    CHECK(origin_multiplicity(BivariatePoly::constant(27)) == 0);

    const auto d = discriminant({s, s});
    CHECK(branch_valuation(d, Axis::S) == 2);
    CHECK(origin_multiplicity(d) == 2);

    CHECK(error_of([] { branch_valuation(BivariatePoly(), Axis::S); }) == ErrorKind::ZeroPolynomial);
    CHECK(error_of([] { origin_multiplicity(BivariatePoly()); }) == ErrorKind::ZeroPolynomial);
}

TEST_CASE("axis and origin profiles of a model") {
    const auto s = BivariatePoly::s(), t = BivariatePoly::t();
    const WeierstrassPolyModel m{s, s};
    CHECK(axis_profile(m, Axis::S) == ValuationProfile{1, 1, 2});
    CHECK(classify(axis_profile(m, Axis::S)).to_string() == "II");
    CHECK(axis_profile(m, Axis::T) == ValuationProfile{0, 0, 0});

    const WeierstrassPolyModel zero_a{BivariatePoly(), s * t.pow(2)};
    CHECK(axis_profile(zero_a, Axis::S) == ValuationProfile{inf, 1, 2});
    CHECK(axis_profile(zero_a, Axis::T) == ValuationProfile{inf, 2, 4});
    CHECK(origin_profile(zero_a) == ValuationProfile{inf, 3, 6});
}

TEST_CASE("twist invariance of the type") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const auto p = random_consistent(rng);
        const auto base = classify(minimalize(p).profile);
        for (std::uint32_t k = 0; k <= 5; ++k) {
            const auto r = minimalize(twisted(p, k));
            CHECK(classify(r.profile) == base);
            CHECK(r.twist_count == minimalize(p).twist_count + k);
        }
    }
}

TEST_CASE("classification table is total and unambiguous on minimal profiles") {
    const auto rows = table_rows();
    std::size_t cells = 0;
    for (std::uint32_t a = 0; a <= 4; ++a)
        for (std::uint32_t b = 0; b <= 6; ++b) {
            const Valuation va = a == 4 ? inf : Valuation(a);
            const Valuation vb = b == 6 ? inf : Valuation(b);
            if (va.is_infinite() && vb.is_infinite()) continue;
            for (std::uint32_t d : consistent_vdeltas(va, vb, 6)) {
                const ValuationProfile p{va, vb, d};
                if (!p.is_minimal()) continue;
                ++cells;
                int hits = 0;
                KodairaType expected;
                for (const auto& row : rows)
                    if (row.matches(p)) {
                        ++hits;
                        expected = row.type(p);
                    }
                INFO(p.to_string());
                CHECK(hits == 1);
                CHECK(classify(p) == expected);
                CHECK(classify(p).euler_number() == p.vdelta);
            }
        }
    CHECK(cells > 30);
}

TEST_CASE("discriminant of monomial models has the predicted valuation") {
    std::mt19937 rng(99);
    const auto s = BivariatePoly::s(), t = BivariatePoly::t();
    int checked = 0;
    while (checked < 200) {
        const std::uint32_t as = rng() % 7, at = rng() % 7, bs = rng() % 7, bt = rng() % 7;
        if (3 * as == 2 * bs || 3 * at == 2 * bt) continue;
        const Rational ca(long(rng() % 9) + 1, long(rng() % 3) + 1);
        const Rational cb(-(long(rng() % 9) + 1), 1);
        const WeierstrassPolyModel m{ca * s.pow(as) * t.pow(at), cb * s.pow(bs) * t.pow(bt)};
        const auto d = discriminant(m);
        CHECK(branch_valuation(d, Axis::S) == std::min(3 * as, 2 * bs));
        CHECK(branch_valuation(d, Axis::T) == std::min(3 * at, 2 * bt));
        const auto p = axis_profile(m, Axis::S);
        CHECK(p.is_consistent());
        CHECK(*j_valuation(p) == 3 * std::int64_t(as) - std::int64_t(p.vdelta));
        ++checked;
    }
}

TEST_CASE("valuation parsing and ordering") {
    CHECK(Valuation::parse("inf") == inf);
    CHECK(Valuation::parse("7") == Valuation(7));
    CHECK_FALSE(Valuation::parse("-1"));
    CHECK_FALSE(Valuation::parse("x"));
    CHECK(Valuation(1000) < inf);
    CHECK(inf.at_least(1u << 30));
    CHECK(ValuationProfile{inf, 1, 2}.to_string() == "(inf, 1, 2)");
}
