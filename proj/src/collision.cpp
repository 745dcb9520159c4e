#include "ellfib/collision.hpp"

#include <numeric>

namespace ellfib {

BranchGerm BranchGerm::make(std::string name, const ValuationProfile& profile) {
    return {std::move(name), profile, classify(profile)};
}

std::string CollisionPoint::label() const {
    return left.name + "(" + left.fibre_type.to_string() + ")+" + right.name + "(" +
           right.fibre_type.to_string() + ")";
}

namespace {

bool is_pair(const KodairaType& a, const KodairaType& b, const KodairaType& x, const KodairaType& y) {
    return (a == x && b == y) || (a == y && b == x);
}

const KodairaType kII = KodairaType::of(FibreKind::II);
const KodairaType kIII = KodairaType::of(FibreKind::III);
const KodairaType kIV = KodairaType::of(FibreKind::IV);
const KodairaType kIVstar = KodairaType::of(FibreKind::IVstar);
const KodairaType kI0star = KodairaType::Istar(0);

// Index of the multiplicative member of an I_M + I_N* pair.
std::optional<std::uint32_t> multiplicative_star_index(const KodairaType& a, const KodairaType& b) {
    if (a.is_multiplicative() && b.is_star()) return a.index;
    if (b.is_multiplicative() && a.is_star()) return b.index;
    return std::nullopt;
}

void require_allowed(const KodairaType& left, const KodairaType& right) {
    if (!is_miranda_allowed(left, right))
        throw Error(ErrorKind::NotMirandaAllowed,
                    left.to_string() + "+" + right.to_string() + " is not a Miranda-allowed collision");
}

}  // namespace

bool is_miranda_allowed(const KodairaType& left, const KodairaType& right) {
    if (left.is_multiplicative() && right.is_multiplicative()) return true;
    if (multiplicative_star_index(left, right)) return true;
    return is_pair(left, right, kII, kIV) || is_pair(left, right, kII, kI0star) ||
           is_pair(left, right, kII, kIVstar) || is_pair(left, right, kIV, kI0star) ||
           is_pair(left, right, kIII, kI0star);
}

BlowupResult blow_up(const CollisionPoint& collision, const std::string& exceptional_name) {
    const ValuationProfile& l = collision.left.profile;
    const ValuationProfile& r = collision.right.profile;
    const ValuationProfile summed{l.va + r.va, l.vb + r.vb, l.vdelta + r.vdelta};
    if (auto why = summed.violation())
        throw Error(ErrorKind::ProfileInconsistent, "blowing up " + collision.label() + " gives exceptional profile " +
                                                        summed.to_string() + ": " + *why);
    const auto reduced = minimalize(summed);
    std::string name = exceptional_name.empty() ? "E(" + collision.left.name + "," + collision.right.name + ")"
                                                : exceptional_name;
    BlowupResult out{BranchGerm::make(std::move(name), reduced.profile), reduced.twist_count, {}, {}};
    out.new_left = {collision.left, out.exceptional};
    out.new_right = {out.exceptional, collision.right};
    return out;
}

std::string_view to_string(NodeStatus status) {
    switch (status) {
        case NodeStatus::Allowed: return "allowed";
        case NodeStatus::Dissolved: return "dissolved";
        case NodeStatus::Rewritten: return "blown-up";
    }
    return "?";
}

std::vector<const BlowupNode*> BlowupTree::leaves() const {
    std::vector<const BlowupNode*> out;
    for (const auto& n : nodes)
        if (n.status != NodeStatus::Rewritten) out.push_back(&n);
    return out;
}

std::size_t BlowupTree::blowup_count() const {
    std::size_t count = 0;
    for (const auto& n : nodes) count += n.status == NodeStatus::Rewritten;
    return count;
}

std::size_t BlowupTree::depth() const {
    std::size_t d = 0;
    for (const auto& n : nodes) d = std::max(d, n.depth);
    return d;
}

namespace {

BlowupNode pending(CollisionPoint collision, std::size_t depth) {
    BlowupNode node;
    node.collision = std::move(collision);
    node.depth = depth;
    return node;
}

}  // namespace

BlowupTree miranda_reduce(const CollisionPoint& collision, std::size_t max_depth) {
    if (!collision.is_collision())
        throw Error(ErrorKind::ValidationError, collision.label() + " is not a collision: both branches need vdelta >= 1");

    BlowupTree tree;
    tree.nodes.push_back(pending(collision, 0));
    std::size_t exceptional_counter = 0;
    // The node vector doubles as the breadth-first worklist.
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        BlowupNode& node = tree.nodes[i];
        if (!node.collision.is_collision()) {
            node.status = NodeStatus::Dissolved;
            continue;
        }
        if (is_miranda_allowed(node.collision.left.fibre_type, node.collision.right.fibre_type)) {
            node.status = NodeStatus::Allowed;
            continue;
        }
        if (node.depth >= max_depth)
            throw Error(ErrorKind::DepthExceeded, "resolving " + collision.label() + " needs more than " +
                                                      std::to_string(max_depth) + " nested blow-ups");
        auto result = blow_up(node.collision, "E" + std::to_string(++exceptional_counter));
        const std::size_t depth = node.depth + 1;
        node.status = NodeStatus::Rewritten;
        node.exceptional = result.exceptional;
        node.exceptional_twists = result.exceptional_twists;
        node.left_child = tree.nodes.size();
        node.right_child = tree.nodes.size() + 1;
        // push_back may reallocate; `node` is not used past this point.
        tree.nodes.push_back(pending(std::move(result.new_left), depth));
        tree.nodes.push_back(pending(std::move(result.new_right), depth));
    }
    return tree;
}

std::vector<BlowupTree> miranda_reduce(const std::vector<CollisionPoint>& collisions, std::size_t max_depth) {
    std::vector<BlowupTree> trees;
    trees.reserve(collisions.size());
    for (const auto& c : collisions) trees.push_back(miranda_reduce(c, max_depth));
    return trees;
}

// ---------------------------------------------------------------------------
// Presentations

void validate_presentation(const CollisionPresentation& p) {
    auto fail = [](const std::string& why) { throw Error(ErrorKind::PresentationInconsistent, why); };
    const std::size_t c = p.central_multiplicities.size();
    if (c == 0) fail("central fibre has no components");
    for (long m : p.central_multiplicities)
        if (m < 1) fail("central multiplicities must be at least 1");
    if (p.branches.empty()) fail("presentation has no branches");

    for (std::size_t b = 0; b < p.branches.size(); ++b) {
        const auto& branch = p.branches[b];
        const std::string where = "branch " + std::to_string(b + 1);
        if (branch.divisors.empty()) fail(where + " has no divisors");
        std::vector<long> total(c, 0);
        for (const auto& d : branch.divisors) {
            const std::string at = where + ", divisor " + d.name;
            if (d.multiplicity < 1 || d.ramification < 1) fail(at + ": m and r must be at least 1");
            if (d.incidence.size() != c)
                fail(at + ": incidence has " + std::to_string(d.incidence.size()) + " entries, expected " +
                     std::to_string(c));
            bool nonzero = false;
            for (std::size_t i = 0; i < c; ++i) {
                if (d.incidence[i] < 0) fail(at + ": negative incidence entry");
                nonzero |= d.incidence[i] != 0;
                total[i] += d.multiplicity * d.ramification * d.incidence[i];
            }
            if (!nonzero) fail(at + ": incidence vector is zero");
        }
        if (total != p.central_multiplicities)
            fail(where + ": sum of (m*r)*incidence does not equal the central multiplicities");
    }
}

PresentationMatrices assemble(const CollisionPresentation& p) {
    std::size_t divisor_count = 0;
    for (const auto& b : p.branches) divisor_count += b.divisors.size();
    const std::size_t c = p.central_multiplicities.size();
    const std::size_t k = p.branches.size();

    PresentationMatrices out{IntMatrix(divisor_count, k), IntMatrix(c, divisor_count), IntMatrix(c, 1),
                             IntMatrix(1, k)};
    std::size_t col = 0;
    for (std::size_t b = 0; b < k; ++b) {
        out.Sigma(0, b) = 1;
        for (const auto& d : p.branches[b].divisors) {
            out.R(col, b) = d.multiplicity * d.ramification;
            for (std::size_t i = 0; i < c && i < d.incidence.size(); ++i) out.N(i, col) = d.incidence[i];
            ++col;
        }
    }
    for (std::size_t i = 0; i < c; ++i) out.M0(i, 0) = p.central_multiplicities[i];
    return out;
}

InducedKernel local_sha_with_witnesses(const CollisionPresentation& p) {
    validate_presentation(p);
    const auto m = assemble(p);
    InducedKernel result;
    try {
        result = induced_kernel_with_generators(m.R, m.N, m.M0, m.Sigma);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::CommutationFailure) throw;
        throw Error(ErrorKind::PresentationInconsistent, e.what());
    }
    for (auto& g : result.generators) {
        Integer order = 1;
        for (const auto& q : g) order = lcm(order, Integer(q.get_den()));
        g = canonical_witness(g, m.R, order);
    }
    return result;
}

DivisibleGroup local_sha(const CollisionPresentation& p) { return local_sha_with_witnesses(p).group; }

CollisionPresentation builtin_i2_i0star_presentation() {
    CollisionPresentation p;
    p.central_multiplicities = {1, 1, 2, 2, 1, 1};
    p.branches.push_back({KodairaType::I(2),
                          {{"C1", 1, 1, {1, 1, 2, 0, 0, 0}}, {"C2", 1, 1, {0, 0, 0, 2, 1, 1}}}});
    p.branches.push_back({KodairaType::Istar(0),
                          {{"D1", 1, 1, {1, 0, 0, 0, 0, 0}},
                           {"D2", 1, 1, {0, 1, 0, 0, 0, 0}},
                           {"D3", 2, 1, {0, 0, 1, 1, 0, 0}},
                           {"D4", 1, 1, {0, 0, 0, 0, 1, 0}},
                           {"D5", 1, 1, {0, 0, 0, 0, 0, 1}}}});
    return p;
}

DivisibleGroup expected_local_sha(const KodairaType& left, const KodairaType& right) {
    require_allowed(left, right);
    if (auto m = multiplicative_star_index(left, right)) return *m % 2 == 0 ? DivisibleGroup::cyclic(2) : DivisibleGroup();
    if (is_pair(left, right, kIII, kI0star)) return DivisibleGroup::cyclic(2);
    return DivisibleGroup::trivial();
}

std::string_view to_string(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::NoIsolatedMultipleFibre: return "NoIsolatedMultipleFibre";
        case VerdictKind::PossiblyObstinate: return "PossiblyObstinate";
        case VerdictKind::PossiblyLocallyTrivial: return "PossiblyLocallyTrivial";
    }
    return "?";
}

std::string MultipleFibreVerdict::to_string() const {
    std::string s(ellfib::to_string(kind));
    if (kind == VerdictKind::PossiblyObstinate) s += "(" + group.to_string() + ")";
    return s;
}

MultipleFibreVerdict multiple_fibre_verdict(const KodairaType& left, const KodairaType& right) {
    require_allowed(left, right);
    if (is_pair(left, right, kIV, kI0star)) return {VerdictKind::PossiblyLocallyTrivial, {}};
    const DivisibleGroup sha = expected_local_sha(left, right);
    if (!sha.is_trivial()) return {VerdictKind::PossiblyObstinate, sha};
    return {VerdictKind::NoIsolatedMultipleFibre, {}};
}

long corank(long b2_X, long rho_X, long b2_S, long rho_S) {
    if (b2_X < 0 || rho_X < 0 || b2_S < 0 || rho_S < 0)
        throw Error(ErrorKind::ValidationError, "Betti and Picard numbers must be non-negative");
    if (rho_X > b2_X || rho_S > b2_S) throw Error(ErrorKind::ValidationError, "Picard number exceeds b2");
    const long r = b2_X - rho_X - (b2_S - rho_S);
    if (r < 0) throw Error(ErrorKind::NegativeCorank, "corank " + std::to_string(r) + " is negative");
    return r;
}

long delta_eta_gcd(const std::vector<long>& fibre_degrees) {
    long g = 0;
    for (long d : fibre_degrees) g = std::gcd(g, d);
    if (g == 0) throw Error(ErrorKind::AllZero, "every fibre degree is zero (or none were given)");
    return g;
}

}  // namespace ellfib
