#include "ellfib/weierstrass.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

namespace ellfib {

std::string Valuation::to_string() const {
    return infinite_ ? std::string("inf") : std::to_string(value_);
}

std::optional<Valuation> Valuation::parse(std::string_view text) {
    if (text == "inf" || text == "INF" || text == "infinity") return infinity();
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
    return Valuation(v);
}

namespace {

Valuation scaled(Valuation v, std::uint32_t factor) {
    return v.is_infinite() ? v : Valuation(v.value() * factor);
}

}  // namespace

std::optional<std::string> ValuationProfile::violation() const {
    if (va.is_infinite() && vb.is_infinite())
        return "a and b both vanish identically, so the discriminant is zero";
    const Valuation three_a = scaled(va, 3);
    const Valuation two_b = scaled(vb, 2);
    const Valuation bound = std::min(three_a, two_b);
    // At least one operand is finite here.
    const std::uint32_t floor = bound.value();
    if (vdelta < floor)
        return "vdelta " + std::to_string(vdelta) + " is below min(3va, 2vb) = " + std::to_string(floor);
    if (three_a != two_b && vdelta != floor)
        return "vdelta must equal min(3va, 2vb) = " + std::to_string(floor) + " when 3va != 2vb, got " +
               std::to_string(vdelta);
    return std::nullopt;
}

std::string ValuationProfile::to_string() const {
    return "(" + va.to_string() + ", " + vb.to_string() + ", " + std::to_string(vdelta) + ")";
}

std::uint32_t KodairaType::euler_number() const {
    switch (kind) {
        case FibreKind::I: return index;
        case FibreKind::Istar: return index + 6;
        case FibreKind::II: return 2;
        case FibreKind::III: return 3;
        case FibreKind::IV: return 4;
        case FibreKind::IVstar: return 8;
        case FibreKind::IIIstar: return 9;
        case FibreKind::IIstar: return 10;
    }
    return 0;
}

std::string KodairaType::to_string() const {
    switch (kind) {
        case FibreKind::I: return "I" + std::to_string(index);
        case FibreKind::Istar: return "I" + std::to_string(index) + "*";
        case FibreKind::II: return "II";
        case FibreKind::III: return "III";
        case FibreKind::IV: return "IV";
        case FibreKind::IVstar: return "IV*";
        case FibreKind::IIIstar: return "III*";
        case FibreKind::IIstar: return "II*";
    }
    return "?";
}

std::optional<KodairaType> KodairaType::parse(std::string_view text) {
    if (text == "II") return of(FibreKind::II);
    if (text == "III") return of(FibreKind::III);
    if (text == "IV") return of(FibreKind::IV);
    if (text == "IV*") return of(FibreKind::IVstar);
    if (text == "III*") return of(FibreKind::IIIstar);
    if (text == "II*") return of(FibreKind::IIstar);
    if (text.size() < 2 || text.front() != 'I') return std::nullopt;
    text.remove_prefix(1);
    const bool star = text.back() == '*';
    if (star) text.remove_suffix(1);
    if (!text.empty() && text.front() == '_') text.remove_prefix(1);
    std::uint32_t n = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
    return star ? Istar(n) : I(n);
}

ValuationProfile canonical_profile(const KodairaType& type) {
    switch (type.kind) {
        case FibreKind::I: return {0, 0, type.index};
        case FibreKind::Istar: return {2, 3, 6 + type.index};
        case FibreKind::II: return {1, 1, 2};
        case FibreKind::III: return {1, 2, 3};
        case FibreKind::IV: return {2, 2, 4};
        case FibreKind::IVstar: return {3, 4, 8};
        case FibreKind::IIIstar: return {3, 5, 9};
        case FibreKind::IIstar: return {4, 5, 10};
    }
    return {};
}

MinimalizeResult minimalize(const ValuationProfile& profile) {
    if (auto why = profile.violation()) throw Error(ErrorKind::InvalidProfile, *why);
    std::uint32_t k = profile.vdelta / 12;
    if (!profile.va.is_infinite()) k = std::min(k, profile.va.value() / 4);
    if (!profile.vb.is_infinite()) k = std::min(k, profile.vb.value() / 6);

    auto lower = [](Valuation v, std::uint32_t by) { return v.is_infinite() ? v : Valuation(v.value() - by); };
    MinimalizeResult out;
    out.twist_count = k;
    out.profile = {lower(profile.va, 4 * k), lower(profile.vb, 6 * k), profile.vdelta - 12 * k};
    return out;
}

KodairaType classify(const ValuationProfile& p) {
    if (auto why = p.violation()) throw Error(ErrorKind::InvalidProfile, *why);
    if (!p.is_minimal())
        throw Error(ErrorKind::NotMinimal, "profile " + p.to_string() + " is not minimal (va >= 4 and vb >= 6)");

    const Valuation& a = p.va;
    const Valuation& b = p.vb;
    if (p.vdelta == 0) return KodairaType::I(0);
    if (a.equals(0) && b.equals(0)) return KodairaType::I(p.vdelta);
    if (a.at_least(1) && b.equals(1)) return KodairaType::of(FibreKind::II);
    if (a.equals(1) && b.at_least(2)) return KodairaType::of(FibreKind::III);
    if (a.at_least(2) && b.equals(2)) return KodairaType::of(FibreKind::IV);
    if (a.at_least(2) && b.at_least(3) && p.vdelta == 6) return KodairaType::Istar(0);
    if (a.equals(2) && b.equals(3) && p.vdelta > 6) return KodairaType::Istar(p.vdelta - 6);
    if (a.at_least(3) && b.equals(4)) return KodairaType::of(FibreKind::IVstar);
    if (a.equals(3) && b.at_least(5)) return KodairaType::of(FibreKind::IIIstar);
    if (a.at_least(4) && b.equals(5)) return KodairaType::of(FibreKind::IIstar);
    // Unreachable for consistent minimal profiles.
    throw Error(ErrorKind::InvalidProfile, "profile " + p.to_string() + " matches no Kodaira type");
}

std::optional<std::int64_t> j_valuation(const ValuationProfile& p) {
    if (p.va.is_infinite()) return std::nullopt;
    return 3 * static_cast<std::int64_t>(p.va.value()) - static_cast<std::int64_t>(p.vdelta);
}

BivariatePoly discriminant(const WeierstrassPolyModel& model) {
    BivariatePoly delta = Rational(4) * model.a.pow(3) + Rational(27) * model.b.pow(2);
    if (delta.is_zero()) throw Error(ErrorKind::DegenerateModel, "discriminant 4a^3 + 27b^2 vanishes identically");
    return delta;
}

std::uint32_t branch_valuation(const BivariatePoly& f, Axis axis) {
    if (f.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "valuation of the zero polynomial");
    std::uint32_t v = std::numeric_limits<std::uint32_t>::max();
    for (const auto& [m, c] : f.terms()) v = std::min(v, axis == Axis::S ? m.s : m.t);
    return v;
}

std::uint32_t origin_multiplicity(const BivariatePoly& f) {
    if (f.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "multiplicity of the zero polynomial");
    std::uint32_t v = std::numeric_limits<std::uint32_t>::max();
    for (const auto& [m, c] : f.terms()) v = std::min(v, m.total_degree());
    return v;
}

namespace {

template <typename Order>
ValuationProfile profile_by(const WeierstrassPolyModel& model, Order order) {
    const BivariatePoly delta = discriminant(model);
    auto val = [&](const BivariatePoly& f) { return f.is_zero() ? Valuation::infinity() : Valuation(order(f)); };
    return {val(model.a), val(model.b), order(delta)};
}

}  // namespace

ValuationProfile axis_profile(const WeierstrassPolyModel& model, Axis axis) {
    return profile_by(model, [axis](const BivariatePoly& f) { return branch_valuation(f, axis); });
}

ValuationProfile origin_profile(const WeierstrassPolyModel& model) {
    return profile_by(model, [](const BivariatePoly& f) { return origin_multiplicity(f); });
}

}  // namespace ellfib
