#pragma once

// Component configurations of Kodaira fibres and the groups attached to
// their fibre lattices.

#include <vector>

#include "ellfib/exact_linalg.hpp"
#include "ellfib/weierstrass.hpp"

namespace ellfib {

/// Components, multiplicities and intersection matrix of a Kodaira fibre.
///
/// Component order is fixed: I_n is listed cyclically; I_n* lists its four
/// multiplicity-one ends first and then the inner chain; the E-type fibres
/// list their longest chain end to end, then the remaining arm starting
/// next to the chain. Irreducible fibres (I0, I1, II) have gram = [0].
struct FibreLattice {
    KodairaType fibre_type;
    std::size_t component_count = 0;
    std::vector<long> multiplicities;
    IntMatrix gram;
};

FibreLattice lattice_data(const KodairaType& type);

/// Discriminant group of the fibre lattice modulo its radical, computed from
/// the Gram matrix through Smith normal form.
DivisibleGroup discriminant_group(const KodairaType& type);

/// The classical closed-form value of the same group, kept separately so the
/// lattice computation can be checked against it.
DivisibleGroup tabulated_discriminant_group(const KodairaType& type);

/// Tate-Shafarevich group of a strictly local base with a transverse curve
/// removed, for a smooth discriminant carrying fibres of the given type.
DivisibleGroup sha_punctured_transverse(const KodairaType& type);

/// gcd of m_i * deg_i over the components of a fibre; this kills the local
/// obstruction group. Throws LengthMismatch for unequal or empty vectors
/// and ValidationError for entries below 1.
long d_t(const std::vector<long>& multiplicities, const std::vector<long>& degrees);

}  // namespace ellfib
