#pragma once

// Collisions of discriminant branches: Miranda admissibility, resolution by
// blowing up the base, and the local Tate-Shafarevich groups at collision
// points.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ellfib/exact_linalg.hpp"
#include "ellfib/weierstrass.hpp"

namespace ellfib {

struct BranchGerm {
    std::string name;
    ValuationProfile profile;  // minimal
    KodairaType fibre_type;

    /// Classifies `profile`; throws InvalidProfile / NotMinimal.
    static BranchGerm make(std::string name, const ValuationProfile& profile);

    bool on_discriminant() const { return profile.vdelta >= 1; }
    friend bool operator==(const BranchGerm&, const BranchGerm&) = default;
};

/// Two branches meeting at a point, in the normal-crossing monomial model.
struct CollisionPoint {
    BranchGerm left;
    BranchGerm right;

    /// Both branches lie on the discriminant.
    bool is_collision() const { return left.on_discriminant() && right.on_discriminant(); }
    CollisionPoint swapped() const { return {right, left}; }
    std::string label() const;  // "LEFT(type)+RIGHT(type)"

    friend bool operator==(const CollisionPoint&, const CollisionPoint&) = default;
};

bool is_miranda_allowed(const KodairaType& left, const KodairaType& right);

struct BlowupResult {
    BranchGerm exceptional;
    std::uint32_t exceptional_twists = 0;  // rescalings applied to the summed profile
    CollisionPoint new_left;   // (left, exceptional)
    CollisionPoint new_right;  // (exceptional, right)
};

/// Blows up the collision point. Along the exceptional curve each of a, b and
/// the discriminant vanishes to the sum of its branch orders; the summed
/// profile is then minimalized and classified. Throws ProfileInconsistent
/// when the summed profile cannot come from a normal-crossing germ.
BlowupResult blow_up(const CollisionPoint& collision, const std::string& exceptional_name = {});

enum class NodeStatus { Allowed, Dissolved, Rewritten };

std::string_view to_string(NodeStatus status);

struct BlowupNode {
    CollisionPoint collision;
    std::size_t depth = 0;
    NodeStatus status = NodeStatus::Allowed;
    std::optional<BranchGerm> exceptional;  // set when Rewritten
    std::uint32_t exceptional_twists = 0;
    std::optional<std::size_t> left_child;
    std::optional<std::size_t> right_child;
};

/// Nodes in breadth-first order, root first, left child before right.
struct BlowupTree {
    std::vector<BlowupNode> nodes;

    const BlowupNode& root() const { return nodes.front(); }
    std::vector<const BlowupNode*> leaves() const;
    std::size_t blowup_count() const;
    std::size_t depth() const;
};

inline constexpr std::size_t default_max_depth = 64;

/// Blows up disallowed collisions until every leaf is Miranda-allowed or no
/// longer a collision. Throws DepthExceeded when a path would pass max_depth.
std::vector<BlowupTree> miranda_reduce(const std::vector<CollisionPoint>& collisions,
                                       std::size_t max_depth = default_max_depth);
BlowupTree miranda_reduce(const CollisionPoint& collision, std::size_t max_depth = default_max_depth);

// ---------------------------------------------------------------------------
// Collision presentations

struct PresentationDivisor {
    std::string name;
    long multiplicity = 1;   // m
    long ramification = 1;   // r
    std::vector<long> incidence;  // central fibre of the closure, with multiplicities

    friend bool operator==(const PresentationDivisor&, const PresentationDivisor&) = default;
};

struct PresentationBranch {
    std::optional<KodairaType> fibre_type;
    std::vector<PresentationDivisor> divisors;

    friend bool operator==(const PresentationBranch&, const PresentationBranch&) = default;
};

/// Integer data of the two cokernel presentations at one collision point.
struct CollisionPresentation {
    std::vector<long> central_multiplicities;
    std::vector<PresentationBranch> branches;

    friend bool operator==(const CollisionPresentation&, const CollisionPresentation&) = default;
};

/// Throws PresentationInconsistent naming the first failing condition.
void validate_presentation(const CollisionPresentation& presentation);

struct PresentationMatrices {
    IntMatrix R;      // divisors x branches, entries m*r
    IntMatrix N;      // central components x divisors, incidence columns
    IntMatrix M0;     // central components x 1
    IntMatrix Sigma;  // 1 x branches, all ones
};

PresentationMatrices assemble(const CollisionPresentation& presentation);

DivisibleGroup local_sha(const CollisionPresentation& presentation);

/// Local group plus one canonical generator witness per invariant factor,
/// as vectors in (Q/Z)^divisors.
InducedKernel local_sha_with_witnesses(const CollisionPresentation& presentation);

/// Resolution data of the I2 + I0* collision (six central components).
CollisionPresentation builtin_i2_i0star_presentation();

/// Registry of local groups at Miranda-allowed collisions. Throws NotMirandaAllowed.
DivisibleGroup expected_local_sha(const KodairaType& left, const KodairaType& right);

enum class VerdictKind { NoIsolatedMultipleFibre, PossiblyObstinate, PossiblyLocallyTrivial };

std::string_view to_string(VerdictKind kind);

struct MultipleFibreVerdict {
    VerdictKind kind = VerdictKind::NoIsolatedMultipleFibre;
    DivisibleGroup group;  // nontrivial only for PossiblyObstinate

    std::string to_string() const;
    friend bool operator==(const MultipleFibreVerdict&, const MultipleFibreVerdict&) = default;
};

/// Throws NotMirandaAllowed.
MultipleFibreVerdict multiple_fibre_verdict(const KodairaType& left, const KodairaType& right);

/// b2(X) - rho(X) - (b2(S) - rho(S)). Throws ValidationError on negative
/// input or rho > b2, NegativeCorank when the result is negative.
long corank(long b2_X, long rho_X, long b2_S, long rho_S);

/// gcd of |degree| over the given Picard generators. Throws AllZero.
long delta_eta_gcd(const std::vector<long>& fibre_degrees);

}  // namespace ellfib
