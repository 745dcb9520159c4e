#pragma once

// Local Weierstrass data along a branch of the discriminant: valuation
// profiles, minimal models, and Kodaira fibre types in residue
// characteristic zero.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ellfib/polynomial.hpp"

namespace ellfib {

/// A natural number or +infinity (the valuation of an identically zero
/// section). Infinity compares above every natural.
class Valuation {
public:
    constexpr Valuation() = default;
    constexpr Valuation(std::uint32_t v) : value_(v) {}  // NOLINT: implicit by intent
    static constexpr Valuation infinity() {
        Valuation v;
        v.infinite_ = true;
        return v;
    }

    constexpr bool is_infinite() const { return infinite_; }
    /// Precondition: finite.
    constexpr std::uint32_t value() const { return value_; }

    /// Holds for infinity regardless of the bound.
    constexpr bool at_least(std::uint32_t bound) const { return infinite_ || value_ >= bound; }
    constexpr bool equals(std::uint32_t v) const { return !infinite_ && value_ == v; }

    friend constexpr bool operator==(const Valuation&, const Valuation&) = default;
    friend constexpr std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
        return a.value_ <=> b.value_;
    }
    friend constexpr Valuation operator+(Valuation a, Valuation b) {
        if (a.infinite_ || b.infinite_) return infinity();
        return Valuation(a.value_ + b.value_);
    }

    /// "inf" or the decimal value.
    std::string to_string() const;
    static std::optional<Valuation> parse(std::string_view text);

private:
    std::uint32_t value_ = 0;
    bool infinite_ = false;
};

/// Orders of vanishing of a, b and the discriminant 4a^3 + 27b^2 along a branch.
struct ValuationProfile {
    Valuation va;
    Valuation vb;
    std::uint32_t vdelta = 0;

    /// Empty when the profile satisfies the consistency rule, otherwise a reason.
    std::optional<std::string> violation() const;
    bool is_consistent() const { return !violation().has_value(); }
    bool is_minimal() const { return !(va.at_least(4) && vb.at_least(6)); }

    /// "(va, vb, vdelta)".
    std::string to_string() const;

    friend bool operator==(const ValuationProfile&, const ValuationProfile&) = default;
};

enum class FibreKind { I, Istar, II, III, IV, IVstar, IIIstar, IIstar };

struct KodairaType {
    FibreKind kind = FibreKind::I;
    std::uint32_t index = 0;  // only meaningful for I and Istar

    static KodairaType I(std::uint32_t n) { return {FibreKind::I, n}; }
    static KodairaType Istar(std::uint32_t n) { return {FibreKind::Istar, n}; }
    static KodairaType of(FibreKind k) { return {k, 0}; }

    bool is_smooth() const { return kind == FibreKind::I && index == 0; }
    bool is_multiplicative() const { return kind == FibreKind::I && index >= 1; }
    bool is_additive() const { return kind != FibreKind::I; }
    bool is_star() const { return kind == FibreKind::Istar; }

    /// Topological Euler number of the singular fibre (equals v(discriminant)).
    std::uint32_t euler_number() const;

    /// "I0", "I5", "I2*", "II", "III", "IV", "IV*", "III*", "II*".
    std::string to_string() const;
    static std::optional<KodairaType> parse(std::string_view text);

    friend bool operator==(const KodairaType&, const KodairaType&) = default;
    friend auto operator<=>(const KodairaType&, const KodairaType&) = default;
};

/// A minimal profile realizing the given type (the one used for canonical
/// test inputs and for type names given on the command line).
ValuationProfile canonical_profile(const KodairaType& type);

struct MinimalizeResult {
    ValuationProfile profile;
    std::uint32_t twist_count = 0;
};

/// Applies the (e^4, e^6) rescaling as often as the valuations allow.
/// Throws InvalidProfile for inconsistent input.
MinimalizeResult minimalize(const ValuationProfile& profile);

/// Kodaira type of a minimal consistent profile. Throws InvalidProfile or NotMinimal.
KodairaType classify(const ValuationProfile& profile);

/// 3 va - vdelta, or nullopt for infinity (j identically zero along the branch).
std::optional<std::int64_t> j_valuation(const ValuationProfile& profile);

/// y^2 = x^3 + a x + b over Q[s, t].
struct WeierstrassPolyModel {
    BivariatePoly a;
    BivariatePoly b;

    friend bool operator==(const WeierstrassPolyModel&, const WeierstrassPolyModel&) = default;
};

/// 4a^3 + 27b^2. Throws DegenerateModel when it vanishes identically.
BivariatePoly discriminant(const WeierstrassPolyModel& model);

enum class Axis { S, T };

/// Largest k such that s^k (Axis::S) or t^k (Axis::T) divides f.
std::uint32_t branch_valuation(const BivariatePoly& f, Axis axis);

/// Lowest total degree of a monomial of f.
std::uint32_t origin_multiplicity(const BivariatePoly& f);

/// Profile of the model along a coordinate axis; a or b identically zero
/// gives an infinite valuation.
ValuationProfile axis_profile(const WeierstrassPolyModel& model, Axis axis);

/// Orders of a, b, discriminant along the exceptional divisor of the blow-up
/// of the origin.
ValuationProfile origin_profile(const WeierstrassPolyModel& model);

}  // namespace ellfib
