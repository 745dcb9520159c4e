#include "ellfib/kodaira_lattice.hpp"

#include <numeric>
#include <utility>

namespace ellfib {

namespace {

using Edge = std::pair<std::size_t, std::size_t>;

FibreLattice from_graph(const KodairaType& type, std::vector<long> multiplicities,
                        const std::vector<Edge>& edges) {
    FibreLattice lat;
    lat.fibre_type = type;
    lat.component_count = multiplicities.size();
    lat.multiplicities = std::move(multiplicities);
    lat.gram = IntMatrix(lat.component_count, lat.component_count);
    for (std::size_t i = 0; i < lat.component_count; ++i) lat.gram(i, i) = -2;
    // Repeated edges accumulate: the two components of I2 meet twice.
    for (auto [i, j] : edges) {
        lat.gram(i, j) += 1;
        lat.gram(j, i) += 1;
    }
    return lat;
}

FibreLattice irreducible(const KodairaType& type) {
    FibreLattice lat;
    lat.fibre_type = type;
    lat.component_count = 1;
    lat.multiplicities = {1};
    lat.gram = IntMatrix(1, 1);
    return lat;
}

std::vector<Edge> chain(std::size_t first, std::size_t length) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i + 1 < length; ++i) edges.emplace_back(first + i, first + i + 1);
    return edges;
}

}  // namespace

FibreLattice lattice_data(const KodairaType& type) {
    switch (type.kind) {
        case FibreKind::I: {
            const std::size_t n = type.index;
            if (n <= 1) return irreducible(type);
            std::vector<Edge> edges;
            for (std::size_t i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
            return from_graph(type, std::vector<long>(n, 1), edges);
        }
        case FibreKind::Istar: {
            const std::size_t n = type.index;
            const std::size_t first = 4, last = 4 + n;
            std::vector<long> m(4, 1);
            m.insert(m.end(), n + 1, 2);
            auto edges = chain(first, n + 1);
            edges.insert(edges.end(), {{0, first}, {1, first}, {2, last}, {3, last}});
            return from_graph(type, std::move(m), edges);
        }
        case FibreKind::II: return irreducible(type);
        case FibreKind::III: return from_graph(type, {1, 1}, {{0, 1}, {0, 1}});
        case FibreKind::IV: return from_graph(type, {1, 1, 1}, {{0, 1}, {1, 2}, {0, 2}});
        case FibreKind::IVstar: {
            auto edges = chain(0, 5);
            edges.insert(edges.end(), {{2, 5}, {5, 6}});
            return from_graph(type, {1, 2, 3, 2, 1, 2, 1}, edges);
        }
        case FibreKind::IIIstar: {
            auto edges = chain(0, 7);
            edges.emplace_back(3, 7);
            return from_graph(type, {1, 2, 3, 4, 3, 2, 1, 2}, edges);
        }
        case FibreKind::IIstar: {
            auto edges = chain(0, 8);
            edges.emplace_back(5, 8);
            return from_graph(type, {1, 2, 3, 4, 5, 6, 4, 2, 3}, edges);
        }
    }
    return irreducible(type);
}

DivisibleGroup discriminant_group(const KodairaType& type) {
    const IntMatrix gram = lattice_data(type).gram;
    // gram = U D V: the radical is spanned by the columns of V^{-1} past the
    // rank, so the leading columns give a basis of M / rad(M).
    const auto snf = smith_normal_form(gram);
    const IntMatrix basis = snf.V_inverse.block(0, 0, gram.rows(), snf.rank);
    const IntMatrix pairing = basis.transpose() * gram * basis;
    return DivisibleGroup(0, smith_normal_form(pairing).diagonal());
}

DivisibleGroup tabulated_discriminant_group(const KodairaType& type) {
    switch (type.kind) {
        case FibreKind::I: return DivisibleGroup::cyclic(type.index);
        case FibreKind::Istar:
            return type.index % 2 == 1 ? DivisibleGroup::cyclic(4) : DivisibleGroup(0, {2, 2});
        case FibreKind::IV:
        case FibreKind::IVstar: return DivisibleGroup::cyclic(3);
        case FibreKind::III:
        case FibreKind::IIIstar: return DivisibleGroup::cyclic(2);
        case FibreKind::II:
        case FibreKind::IIstar: return DivisibleGroup::trivial();
    }
    return DivisibleGroup::trivial();
}

DivisibleGroup sha_punctured_transverse(const KodairaType& type) {
    if (type.is_smooth()) return DivisibleGroup(2, {});
    const DivisibleGroup d = discriminant_group(type);
    if (type.is_multiplicative()) return DivisibleGroup(1, {}).direct_sum(d);
    return d;
}

long d_t(const std::vector<long>& multiplicities, const std::vector<long>& degrees) {
    if (multiplicities.empty() || multiplicities.size() != degrees.size())
        throw Error(ErrorKind::LengthMismatch, "multiplicities and degrees must be nonempty and of equal length");
    long g = 0;
    for (std::size_t i = 0; i < multiplicities.size(); ++i) {
        if (multiplicities[i] < 1 || degrees[i] < 1)
            throw Error(ErrorKind::ValidationError, "multiplicities and degrees must be at least 1");
        g = std::gcd(g, multiplicities[i] * degrees[i]);
    }
    return g;
}

}  // namespace ellfib
