// Complex state vectors, Hermitian operators, and exact unitary evolution.
// Dimension-agnostic and dense throughout; all types are immutable value
// types once constructed and every operation is a pure function.

#pragma once

#include <complex>
#include <span>
#include <vector>

namespace qcoarse {

using cplx = std::complex<double>;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kUnitarityTolerance = 1e-10;

// Nearest double to 1/sqrt(2). The squared norm of the equal pair lands one
// ulp above 1, and its square root rounds back to exactly 1.0.
inline constexpr double kInvSqrt2 = 0.7071067811865476;

struct PhysicalConstants {
    double hbar = 1.0;

    PhysicalConstants() = default;
    explicit PhysicalConstants(double hbar_value);
};

class StateVector {
public:
    // A basis ket |index> in a `dim`-dimensional space.
    static StateVector basis(std::size_t dim, std::size_t index);

    // Takes ownership of the amplitudes; dim is their length.
    explicit StateVector(std::vector<cplx> amplitudes);

    std::size_t dim() const { return amps_.size(); }
    const cplx& operator[](std::size_t i) const { return amps_[i]; }
    std::span<const cplx> amplitudes() const { return amps_; }

    double norm() const;
    bool is_normalized(double tol = kNormTolerance) const;

    // Returns a unit-norm copy; errors on the zero vector.
    StateVector normalized() const;

private:
    std::vector<cplx> amps_;
};

class HermitianOperator {
public:
    // Validates Hermitian symmetry of a dense row-major matrix.
    static HermitianOperator from_dense(std::size_t dim, std::vector<cplx> entries);

    // Diagonal operator; marks the diagonal fast-path flag.
    static HermitianOperator diagonal(std::vector<double> diag);

    static HermitianOperator zero(std::size_t dim);
    static HermitianOperator identity(std::size_t dim);

    std::size_t dim() const { return dim_; }
    bool is_diagonal() const { return diagonal_; }
    std::span<const cplx> entries() const { return entries_; }
    const cplx& at(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }

    // The real diagonal; valid for any Hermitian operator.
    std::vector<double> diagonal_values() const;

    // Same entries with the diagonal fast-path flag cleared, forcing the
    // general evolution path. Test hook for dual-route checks.
    HermitianOperator without_diagonal_flag() const;

private:
    HermitianOperator(std::size_t dim, std::vector<cplx> entries, bool diagonal);

    std::size_t dim_;
    std::vector<cplx> entries_;
    bool diagonal_;
};

// <a|b> = sum_j conj(a_j) b_j. Errors on dimension mismatch.
cplx inner_product(const StateVector& a, const StateVector& b);

// Row-major Kronecker product: component (j,k) at index j*b.dim + k.
StateVector tensor_product(const StateVector& a, const StateVector& b);

// Dense H|psi>.
StateVector apply_operator(const HermitianOperator& h, const StateVector& psi);

// exp(-i H t / hbar)|psi>. Diagonal operators are rotated analytically;
// general Hermitian operators go through an eigendecomposition.
StateVector evolve_exact(const HermitianOperator& h, const StateVector& psi, double t,
                         const PhysicalConstants& c = {});

} // namespace qcoarse
