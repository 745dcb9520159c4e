#include "ellfib/exact_linalg.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <sstream>
#include <utility>

namespace ellfib {

namespace {

void require(bool condition, const std::string& message) {
    if (!condition) throw Error(ErrorKind::DimensionMismatch, message);
}

Integer floor_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

}  // namespace

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::CommutationFailure: return "CommutationFailure";
        case ErrorKind::InvalidProfile: return "InvalidProfile";
        case ErrorKind::NotMinimal: return "NotMinimal";
        case ErrorKind::DegenerateModel: return "DegenerateModel";
        case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::ProfileInconsistent: return "ProfileInconsistent";
        case ErrorKind::DepthExceeded: return "DepthExceeded";
        case ErrorKind::PresentationInconsistent: return "PresentationInconsistent";
        case ErrorKind::NotMirandaAllowed: return "NotMirandaAllowed";
        case ErrorKind::NegativeCorank: return "NegativeCorank";
        case ErrorKind::AllZero: return "AllZero";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::ValidationError: return "ValidationError";
    }
    return "Unknown";
}

// ---------------------------------------------------------------------------
// IntMatrix

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Integer(0)) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        require(r.size() == cols_, "ragged initializer for IntMatrix");
        for (long v : r) data_.emplace_back(v);
    }
}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::column(const std::vector<long>& entries) {
    IntMatrix m(entries.size(), 1);
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, 0) = entries[i];
    return m;
}

IntMatrix IntMatrix::row(const std::vector<long>& entries) {
    IntMatrix m(1, entries.size());
    for (std::size_t j = 0; j < entries.size(); ++j) m(0, j) = entries[j];
    return m;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

IntMatrix IntMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    require(r0 + nr <= rows_ && c0 + nc <= cols_, "block out of range");
    IntMatrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
}

bool IntMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Integer& v) { return v == 0; });
}

Integer IntMatrix::determinant() const {
    require(rows_ == cols_, "determinant of a non-square matrix");
    const std::size_t n = rows_;
    if (n == 0) return 1;
    // Bareiss elimination: every intermediate quotient is exact.
    IntMatrix m = *this;
    Integer sign = 1;
    Integer previous = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && m(p, k) == 0) ++p;
            if (p == n) return 0;
            m.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Integer v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), previous.get_mpz_t());
                m(i, j) = v;
            }
        }
        previous = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

IntMatrix operator*(const IntMatrix& lhs, const IntMatrix& rhs) {
    require(lhs.cols_ == rhs.rows_, "matrix product dimensions do not compose");
    IntMatrix out(lhs.rows_, rhs.cols_);
    for (std::size_t i = 0; i < lhs.rows_; ++i)
        for (std::size_t k = 0; k < lhs.cols_; ++k) {
            const Integer& a = lhs(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
        }
    return out;
}

bool operator==(const IntMatrix& lhs, const IntMatrix& rhs) {
    return lhs.rows_ == rhs.rows_ && lhs.cols_ == rhs.cols_ && lhs.data_ == rhs.data_;
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
}

void IntMatrix::swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
}

void IntMatrix::add_row_multiple(std::size_t target, std::size_t source, const Integer& factor) {
    if (factor == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) (*this)(target, j) += factor * (*this)(source, j);
}

void IntMatrix::add_col_multiple(std::size_t target, std::size_t source, const Integer& factor) {
    if (factor == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, target) += factor * (*this)(i, source);
}

void IntMatrix::negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
}

void IntMatrix::negate_col(std::size_t c) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) = -(*this)(i, c);
}

std::string IntMatrix::to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < rows_; ++i) {
        if (i) os << ", ";
        os << '[';
        for (std::size_t j = 0; j < cols_; ++j) {
            if (j) os << ", ";
            os << (*this)(i, j);
        }
        os << ']';
    }
    os << ']';
    return os.str();
}

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

// Tracks P * A * Q = D together with P^{-1} and Q^{-1}. A row operation E
// applied to D updates P <- E P and P^{-1} <- P^{-1} E^{-1}; column
// operations mirror this on Q.
class SmithReducer {
public:
    explicit SmithReducer(const IntMatrix& A)
        : D_(A),
          P_(IntMatrix::identity(A.rows())),
          P_inv_(IntMatrix::identity(A.rows())),
          Q_(IntMatrix::identity(A.cols())),
          Q_inv_(IntMatrix::identity(A.cols())) {}

    SmithDecomposition run() {
        const std::size_t limit = std::min(D_.rows(), D_.cols());
        std::size_t t = 0;
        for (; t < limit; ++t) {
            auto pivot = min_abs_entry(t, t);
            if (!pivot) break;
            move_to(t, *pivot);
            reduce_pivot(t);
            if (D_(t, t) < 0) negate_row(t);
        }
        SmithDecomposition out;
        out.rank = t;
        out.D = std::move(D_);
        out.U = std::move(P_inv_);
        out.U_inverse = std::move(P_);
        out.V = std::move(Q_inv_);
        out.V_inverse = std::move(Q_);
        return out;
    }

private:
    using Position = std::pair<std::size_t, std::size_t>;

    std::optional<Position> min_abs_entry(std::size_t r0, std::size_t c0) const {
        std::optional<Position> best;
        Integer best_abs;
        for (std::size_t i = r0; i < D_.rows(); ++i)
            for (std::size_t j = c0; j < D_.cols(); ++j) {
                if (D_(i, j) == 0) continue;
                Integer a = abs(D_(i, j));
                if (!best || a < best_abs) {
                    best = Position{i, j};
                    best_abs = a;
                }
            }
        return best;
    }

    void move_to(std::size_t t, Position p) {
        swap_rows(t, p.first);
        swap_cols(t, p.second);
    }

    // Clears row t and column t beyond the pivot and enforces that the
    // pivot divides the remaining submatrix.
    void reduce_pivot(std::size_t t) {
        for (;;) {
            bool changed = false;
            for (std::size_t i = t + 1; i < D_.rows(); ++i) {
                if (D_(i, t) == 0) continue;
                add_row_multiple(i, t, -floor_div(D_(i, t), D_(t, t)));
                if (D_(i, t) != 0) changed = true;
            }
            for (std::size_t j = t + 1; j < D_.cols(); ++j) {
                if (D_(t, j) == 0) continue;
                add_col_multiple(j, t, -floor_div(D_(t, j), D_(t, t)));
                if (D_(t, j) != 0) changed = true;
            }
            if (changed) {
                // A smaller remainder appeared in the pivot row or column.
                auto p = min_in_cross(t);
                move_to(t, p);
                continue;
            }
            auto bad = non_divisible_entry(t);
            if (!bad) return;
            add_row_multiple(t, bad->first, Integer(1));
        }
    }

    Position min_in_cross(std::size_t t) const {
        Position best{t, t};
        Integer best_abs = abs(D_(t, t));
        for (std::size_t i = t + 1; i < D_.rows(); ++i)
            if (D_(i, t) != 0 && abs(D_(i, t)) < best_abs) {
                best = {i, t};
                best_abs = abs(D_(i, t));
            }
        for (std::size_t j = t + 1; j < D_.cols(); ++j)
            if (D_(t, j) != 0 && abs(D_(t, j)) < best_abs) {
                best = {t, j};
                best_abs = abs(D_(t, j));
            }
        return best;
    }

    std::optional<Position> non_divisible_entry(std::size_t t) const {
        for (std::size_t i = t + 1; i < D_.rows(); ++i)
            for (std::size_t j = t + 1; j < D_.cols(); ++j)
                if (!mpz_divisible_p(D_(i, j).get_mpz_t(), D_(t, t).get_mpz_t()))
                    return Position{i, j};
        return std::nullopt;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        D_.swap_rows(a, b);
        P_.swap_rows(a, b);
        P_inv_.swap_cols(a, b);
    }
    void swap_cols(std::size_t a, std::size_t b) {
        D_.swap_cols(a, b);
        Q_.swap_cols(a, b);
        Q_inv_.swap_rows(a, b);
    }
    // row_target += f * row_source; inverse is col_source -= f * col_target.
    void add_row_multiple(std::size_t target, std::size_t source, const Integer& f) {
        D_.add_row_multiple(target, source, f);
        P_.add_row_multiple(target, source, f);
        P_inv_.add_col_multiple(source, target, -f);
    }
    void add_col_multiple(std::size_t target, std::size_t source, const Integer& f) {
        D_.add_col_multiple(target, source, f);
        Q_.add_col_multiple(target, source, f);
        Q_inv_.add_row_multiple(source, target, -f);
    }
    void negate_row(std::size_t r) {
        D_.negate_row(r);
        P_.negate_row(r);
        P_inv_.negate_col(r);
    }

    IntMatrix D_;
    IntMatrix P_, P_inv_;
    IntMatrix Q_, Q_inv_;
};

}  // namespace

std::vector<Integer> SmithDecomposition::diagonal() const {
    std::vector<Integer> out;
    out.reserve(rank);
    for (std::size_t i = 0; i < rank; ++i) out.push_back(D(i, i));
    return out;
}

SmithDecomposition smith_normal_form(const IntMatrix& A) { return SmithReducer(A).run(); }

// ---------------------------------------------------------------------------
// DivisibleGroup

DivisibleGroup::DivisibleGroup(std::size_t divisible_rank, const std::vector<Integer>& cyclic_orders)
    : divisible_rank_(divisible_rank) {
    std::vector<Integer> orders;
    for (const auto& d : cyclic_orders)
        if (abs(d) > 1) orders.push_back(abs(d));
    if (orders.empty()) return;
    // Smith form of the diagonal matrix regroups Z/2 + Z/3 into Z/6, etc.
    IntMatrix diag(orders.size(), orders.size());
    for (std::size_t i = 0; i < orders.size(); ++i) diag(i, i) = orders[i];
    for (const auto& d : smith_normal_form(diag).diagonal())
        if (d > 1) factors_.push_back(d);
}

Integer DivisibleGroup::finite_order() const {
    Integer n = 1;
    for (const auto& d : factors_) n *= d;
    return n;
}

Integer DivisibleGroup::exponent() const { return factors_.empty() ? Integer(1) : factors_.back(); }

Integer DivisibleGroup::torsion_order(long n) const {
    Integer order = 1;
    const Integer nn = n;
    for (std::size_t i = 0; i < divisible_rank_; ++i) order *= nn;
    for (const auto& d : factors_) order *= gcd(nn, d);
    return order;
}

DivisibleGroup DivisibleGroup::direct_sum(const DivisibleGroup& other) const {
    std::vector<Integer> orders = factors_;
    orders.insert(orders.end(), other.factors_.begin(), other.factors_.end());
    return DivisibleGroup(divisible_rank_ + other.divisible_rank_, orders);
}

std::string DivisibleGroup::to_string() const {
    if (is_trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    if (divisible_rank_ > 0) {
        os << "(Q/Z)^" << divisible_rank_;
        first = false;
    }
    for (const auto& d : factors_) {
        if (!first) os << " + ";
        os << "Z/" << d;
        first = false;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Kernels on Q/Z

DivisibleGroup qz_kernel(const IntMatrix& B) {
    // B = U D V and U is invertible, so Bx = 0 iff D(Vx) = 0: every d_i
    // contributes Z/d_i and every zero column of D a copy of Q/Z.
    const auto snf = smith_normal_form(B);
    return DivisibleGroup(B.cols() - snf.rank, snf.diagonal());
}

CokernelChart cokernel_chart(const IntMatrix& R) {
    auto snf = smith_normal_form(R);
    CokernelChart chart;
    chart.rank = snf.rank;
    chart.ambient_dim = R.rows();
    chart.basis_transform = std::move(snf.U_inverse);
    chart.basis_transform_inverse = std::move(snf.U);
    chart.source = R;
    return chart;
}

InducedKernel induced_kernel_with_generators(const IntMatrix& R, const IntMatrix& N,
                                             const IntMatrix& M0, const IntMatrix& Sigma) {
    require(N.cols() == R.rows(), "N must have as many columns as R has rows");
    require(M0.rows() == N.rows(), "M0 must have as many rows as N");
    require(Sigma.rows() == M0.cols(), "Sigma must have as many rows as M0 has columns");
    require(Sigma.cols() == R.cols(), "Sigma must have as many columns as R");
    if (!(N * R == M0 * Sigma))
        throw Error(ErrorKind::CommutationFailure,
                    "square does not commute: N*R = " + (N * R).to_string() +
                        " but M0*Sigma = " + (M0 * Sigma).to_string());

    const auto source = cokernel_chart(R);
    const auto target = cokernel_chart(M0);
    const IntMatrix full = target.basis_transform * N * source.basis_transform_inverse;

    InducedKernel out;
    out.induced = full.block(target.rank, source.rank, target.cokernel_rank(), source.cokernel_rank());

    const auto snf = smith_normal_form(out.induced);
    out.group = DivisibleGroup(out.induced.cols() - snf.rank, snf.diagonal());

    // Generator of the Z/d_i summand: w = e_i / d_i in the Smith coordinates of
    // B, pulled back through V^{-1} and then through the chart of R.
    for (std::size_t i = 0; i < snf.rank; ++i) {
        const Integer& d = snf.D(i, i);
        if (d == 1) continue;
        RationalVector x(R.rows(), Rational(0));
        for (std::size_t row = 0; row < R.rows(); ++row) {
            Integer acc = 0;
            for (std::size_t k = 0; k < source.cokernel_rank(); ++k)
                acc += source.basis_transform_inverse(row, source.rank + k) * snf.V_inverse(k, i);
            x[row] = Rational(acc, d);
            x[row].canonicalize();
        }
        out.generators.push_back(reduce_mod_one(std::move(x)));
    }
    return out;
}

DivisibleGroup induced_kernel(const IntMatrix& R, const IntMatrix& N, const IntMatrix& M0,
                              const IntMatrix& Sigma) {
    return induced_kernel_with_generators(R, N, M0, Sigma).group;
}

RationalVector reduce_mod_one(RationalVector v) {
    for (auto& q : v) {
        Integer fl;
        mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
        q -= fl;
    }
    return v;
}

bool same_class_mod_image(const RationalVector& x, const RationalVector& y, const IntMatrix& R) {
    require(x.size() == R.rows() && y.size() == R.rows(), "vector length must match rows of R");
    const auto chart = cokernel_chart(R);
    for (std::size_t i = chart.rank; i < chart.ambient_dim; ++i) {
        Rational acc = 0;
        for (std::size_t j = 0; j < x.size(); ++j)
            acc += Rational(chart.basis_transform(i, j)) * (x[j] - y[j]);
        acc.canonicalize();
        if (acc.get_den() != 1) return false;
    }
    return true;
}

namespace {

// (support, numerators) ordering for canonical_witness.
bool better_witness(const RationalVector& a, const RationalVector& b) {
    auto support = [](const RationalVector& v) {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0) s.push_back(i);
        return s;
    };
    const auto sa = support(a);
    const auto sb = support(b);
    if (sa.size() != sb.size()) return sa.size() < sb.size();
    if (sa != sb) return sa < sb;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] < b[i];
    return false;
}

}  // namespace

RationalVector canonical_witness(const RationalVector& witness, const IntMatrix& R,
                                 const Integer& order, std::size_t search_limit) {
    require(witness.size() == R.rows(), "witness length must match rows of R");
    RationalVector best = reduce_mod_one(witness);
    if (order <= 1) return best;

    const auto chart = cokernel_chart(R);
    // The order-torsion of im(R tensor Q/Z) is U_R applied to vectors supported
    // on the first `rank` coordinates with entries in (1/order)Z/Z.
    if (!order.fits_ulong_p()) return best;
    const unsigned long e = order.get_ui();
    std::size_t space = 1;
    for (std::size_t i = 0; i < chart.rank; ++i) {
        if (space > search_limit / e) return best;
        space *= e;
    }
    std::vector<unsigned long> units;
    for (unsigned long u = 1; u < e; ++u)
        if (std::gcd(u, e) == 1) units.push_back(u);
    if (space * units.size() > search_limit) return best;

    std::vector<unsigned long> digits(chart.rank, 0);
    for (std::size_t step = 0; step < space; ++step) {
        RationalVector shift(R.rows(), Rational(0));
        for (std::size_t row = 0; row < R.rows(); ++row) {
            Integer acc = 0;
            for (std::size_t k = 0; k < chart.rank; ++k)
                acc += chart.basis_transform_inverse(row, k) * digits[k];
            shift[row] = Rational(acc, order);
            shift[row].canonicalize();
        }
        for (unsigned long u : units) {
            RationalVector candidate(R.rows());
            for (std::size_t row = 0; row < R.rows(); ++row)
                candidate[row] = Rational(u) * witness[row] + shift[row];
            candidate = reduce_mod_one(std::move(candidate));
            if (better_witness(candidate, best)) best = std::move(candidate);
        }
        for (std::size_t k = 0; k < chart.rank; ++k) {
            if (++digits[k] < e) break;
            digits[k] = 0;
        }
    }
    return best;
}

std::string to_string(const RationalVector& v) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << v[i].get_str();
    }
    os << ')';
    return os.str();
}

}  // namespace ellfib
