#pragma once

// Exact integer linear algebra: Smith normal form and kernels of maps
// induced on cokernels of integer matrices after tensoring with Q/Z.

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ellfib/error.hpp"

namespace ellfib {

using Integer = mpz_class;
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

/// Dense row-major matrix of arbitrary-precision integers. Zero rows or
/// zero columns are legal and denote maps from/to the trivial group.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols);
    IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

    static IntMatrix identity(std::size_t n);
    static IntMatrix column(const std::vector<long>& entries);
    static IntMatrix row(const std::vector<long>& entries);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Integer& operator()(std::size_t r, std::size_t c) const {
        return data_[r * cols_ + c];
    }

    IntMatrix transpose() const;
    /// Rows [r0, r0+nr) and columns [c0, c0+nc).
    IntMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    bool is_zero() const;

    /// Determinant by fraction-free elimination; square matrices only.
    Integer determinant() const;

    friend IntMatrix operator*(const IntMatrix& lhs, const IntMatrix& rhs);
    friend bool operator==(const IntMatrix& lhs, const IntMatrix& rhs);

    // Elementary operations used by the reductions.
    void swap_rows(std::size_t a, std::size_t b);
    void swap_cols(std::size_t a, std::size_t b);
    void add_row_multiple(std::size_t target, std::size_t source, const Integer& factor);
    void add_col_multiple(std::size_t target, std::size_t source, const Integer& factor);
    void negate_row(std::size_t r);
    void negate_col(std::size_t c);

    std::string to_string() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> data_;
};

/// A = U * D * V with U, V unimodular and D in Smith form.
struct SmithDecomposition {
    IntMatrix U;
    IntMatrix D;
    IntMatrix V;
    /// Inverses of U and V, produced alongside at no extra cost.
    IntMatrix U_inverse;
    IntMatrix V_inverse;
    std::size_t rank = 0;

    std::vector<Integer> diagonal() const;
};

SmithDecomposition smith_normal_form(const IntMatrix& A);

/// (Q/Z)^r + Z/d1 + ... + Z/dk in canonical invariant-factor form.
class DivisibleGroup {
public:
    DivisibleGroup() = default;
    /// Accepts any list of cyclic orders; 0 and 1 are dropped, the rest is
    /// brought into a divisibility chain.
    DivisibleGroup(std::size_t divisible_rank, const std::vector<Integer>& cyclic_orders);

    static DivisibleGroup trivial() { return {}; }
    static DivisibleGroup cyclic(long n) { return DivisibleGroup(0, {Integer(n)}); }

    std::size_t divisible_rank() const noexcept { return divisible_rank_; }
    const std::vector<Integer>& invariant_factors() const noexcept { return factors_; }

    bool is_trivial() const { return divisible_rank_ == 0 && factors_.empty(); }
    bool is_finite() const { return divisible_rank_ == 0; }
    Integer finite_order() const;
    Integer exponent() const;
    /// Order of the n-torsion subgroup, n >= 1.
    Integer torsion_order(long n) const;

    DivisibleGroup direct_sum(const DivisibleGroup& other) const;

    /// "(Q/Z)^r + Z/d1 + ... + Z/dk", or "0" for the trivial group.
    std::string to_string() const;

    friend bool operator==(const DivisibleGroup&, const DivisibleGroup&) = default;

private:
    std::size_t divisible_rank_ = 0;
    std::vector<Integer> factors_;
};

/// ker(B tensor Q/Z) for B : Z^cols -> Z^rows.
DivisibleGroup qz_kernel(const IntMatrix& B);

/// Presentation of coker(R tensor Q/Z). In the coordinates y = basis_transform * x
/// the image of R is exactly the first `rank` coordinates, so the cokernel is
/// (Q/Z)^(ambient_dim - rank) on the trailing coordinates.
struct CokernelChart {
    IntMatrix source;
    IntMatrix basis_transform;          // U_R^{-1}
    IntMatrix basis_transform_inverse;  // U_R
    std::size_t rank = 0;
    std::size_t ambient_dim = 0;

    std::size_t cokernel_rank() const { return ambient_dim - rank; }
};

CokernelChart cokernel_chart(const IntMatrix& R);

/// Kernel of the induced map together with one generator per invariant
/// factor, given as vectors in (Q/Z)^ambient of R (entries in [0, 1)).
struct InducedKernel {
    DivisibleGroup group;
    IntMatrix induced;  // the block B whose Q/Z-kernel is the answer
    std::vector<RationalVector> generators;
};

/// ker(coker(R tensor Q/Z) -> coker(M0 tensor Q/Z)) induced by N, where the
/// square N*R = M0*Sigma commutes.
DivisibleGroup induced_kernel(const IntMatrix& R, const IntMatrix& N, const IntMatrix& M0,
                              const IntMatrix& Sigma);
InducedKernel induced_kernel_with_generators(const IntMatrix& R, const IntMatrix& N,
                                             const IntMatrix& M0, const IntMatrix& Sigma);

/// Reduces every entry into [0, 1).
RationalVector reduce_mod_one(RationalVector v);

/// True iff x - y lies in im(R tensor Q/Z) + Z^n.
bool same_class_mod_image(const RationalVector& x, const RationalVector& y, const IntMatrix& R);

/// Picks a reproducible representative of the class of `witness` modulo
/// im(R tensor Q/Z), among unit multiples with denominators dividing `order`:
/// smallest support first, then lexicographically earliest support, then
/// smallest numerators. Falls back to the reduced input when the search
/// space exceeds `search_limit`.
RationalVector canonical_witness(const RationalVector& witness, const IntMatrix& R,
                                 const Integer& order, std::size_t search_limit = 1u << 16);

std::string to_string(const RationalVector& v);

}  // namespace ellfib
