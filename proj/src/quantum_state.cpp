#include "qcoarse/quantum_state.hpp"

#include "qcoarse/kernels.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace qcoarse {

namespace {

void require_finite(const std::vector<cplx>& values, const char* what) {
    for (const cplx& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw std::invalid_argument(std::string(what) + " contains a non-finite entry");
        }
    }
}

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                    std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}

} // namespace

PhysicalConstants::PhysicalConstants(double hbar_value) : hbar(hbar_value) {
    if (!(hbar > 0.0) || !std::isfinite(hbar)) {
        throw std::invalid_argument("hbar must be positive and finite (got " +
                                    std::to_string(hbar_value) + ")");
    }
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    if (dim == 0) {
        throw std::invalid_argument("state dimension must be >= 1");
    }
    if (index >= dim) {
        throw std::invalid_argument("basis index " + std::to_string(index) +
                                    " out of range for dim " + std::to_string(dim));
    }
    std::vector<cplx> amps(dim, cplx{0.0, 0.0});
    amps[index] = cplx{1.0, 0.0};
    return StateVector(std::move(amps));
}

StateVector::StateVector(std::vector<cplx> amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.empty()) {
        throw std::invalid_argument("state dimension must be >= 1");
    }
    require_finite(amps_, "state vector");
}

double StateVector::norm() const { return std::sqrt(kernels::sum_squares(amps_)); }

bool StateVector::is_normalized(double tol) const {
    return std::abs(kernels::sum_squares(amps_) - 1.0) <= tol;
}

StateVector StateVector::normalized() const {
    const double n = norm();
    if (n <= 0.0) {
        throw std::invalid_argument("cannot normalize the zero vector");
    }
    std::vector<cplx> amps(amps_);
    for (cplx& a : amps) {
        a /= n;
    }
    return StateVector(std::move(amps));
}

HermitianOperator::HermitianOperator(std::size_t dim, std::vector<cplx> entries, bool diagonal)
    : dim_(dim), entries_(std::move(entries)), diagonal_(diagonal) {}

HermitianOperator HermitianOperator::from_dense(std::size_t dim, std::vector<cplx> entries) {
    if (dim == 0) {
        throw std::invalid_argument("operator dimension must be >= 1");
    }
    if (entries.size() != dim * dim) {
        throw std::invalid_argument("operator entries size " + std::to_string(entries.size()) +
                                    " does not match dim " + std::to_string(dim));
    }
    require_finite(entries, "operator");
    bool diagonal = true;
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = r; c < dim; ++c) {
            const cplx upper = entries[r * dim + c];
            const cplx lower = entries[c * dim + r];
            if (std::abs(upper - std::conj(lower)) > kHermitianTolerance) {
                throw std::invalid_argument("matrix is not Hermitian at (" + std::to_string(r) +
                                            ", " + std::to_string(c) + ")");
            }
            if (r != c && (upper != cplx{0.0, 0.0} || lower != cplx{0.0, 0.0})) {
                diagonal = false;
            }
        }
    }
    return HermitianOperator(dim, std::move(entries), diagonal);
}

HermitianOperator HermitianOperator::diagonal(std::vector<double> diag) {
    if (diag.empty()) {
        throw std::invalid_argument("operator dimension must be >= 1");
    }
    const std::size_t dim = diag.size();
    std::vector<cplx> entries(dim * dim, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < dim; ++i) {
        if (!std::isfinite(diag[i])) {
            throw std::invalid_argument("operator diagonal contains a non-finite entry");
        }
        entries[i * dim + i] = cplx{diag[i], 0.0};
    }
    return HermitianOperator(dim, std::move(entries), true);
}

HermitianOperator HermitianOperator::zero(std::size_t dim) {
    return HermitianOperator::diagonal(std::vector<double>(dim, 0.0));
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
    return HermitianOperator::diagonal(std::vector<double>(dim, 1.0));
}

std::vector<double> HermitianOperator::diagonal_values() const {
    std::vector<double> diag(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        diag[i] = entries_[i * dim_ + i].real();
    }
    return diag;
}

HermitianOperator HermitianOperator::without_diagonal_flag() const {
    return HermitianOperator(dim_, entries_, false);
}

cplx inner_product(const StateVector& a, const StateVector& b) {
    require_same_dim(a.dim(), b.dim(), "inner_product");
    return kernels::dot_conj(a.amplitudes(), b.amplitudes());
}

StateVector tensor_product(const StateVector& a, const StateVector& b) {
    std::vector<cplx> out(a.dim() * b.dim());
    const std::size_t bd = b.dim();
    for (std::size_t j = 0; j < a.dim(); ++j) {
        for (std::size_t k = 0; k < bd; ++k) {
            out[j * bd + k] = a[j] * b[k];
        }
    }
    return StateVector(std::move(out));
}

StateVector apply_operator(const HermitianOperator& h, const StateVector& psi) {
    require_same_dim(h.dim(), psi.dim(), "apply_operator");
    std::vector<cplx> out(psi.dim());
    if (h.is_diagonal()) {
        for (std::size_t i = 0; i < psi.dim(); ++i) {
            out[i] = h.at(i, i) * psi[i];
        }
    } else {
        kernels::matvec(h.entries(), psi.amplitudes(), out);
    }
    return StateVector(std::move(out));
}

StateVector evolve_exact(const HermitianOperator& h, const StateVector& psi, double t,
                         const PhysicalConstants& c) {
    require_same_dim(h.dim(), psi.dim(), "evolve_exact");
    if (!std::isfinite(t)) {
        throw std::invalid_argument("evolution time must be finite");
    }
    const std::size_t dim = psi.dim();

    if (h.is_diagonal()) {
        const std::vector<double> energies = h.diagonal_values();
        std::vector<cplx> out(dim);
        kernels::phase_rotate(energies, t / c.hbar, psi.amplitudes(), out);
        return StateVector(std::move(out));
    }

    using Matrix = Eigen::MatrixXcd;
    using Vector = Eigen::VectorXcd;
    using RowMajorMatrix =
        Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    // Entries are stored row major; a plain Map would hand Eigen the transpose.
    Eigen::Map<const RowMajorMatrix> m(h.entries().data(), static_cast<Eigen::Index>(dim),
                                       static_cast<Eigen::Index>(dim));
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigendecomposition failed; operator is not Hermitian");
    }

    Eigen::Map<const Vector> v(psi.amplitudes().data(), static_cast<Eigen::Index>(dim));
    Vector in_eigenbasis = solver.eigenvectors().adjoint() * v;
    for (Eigen::Index i = 0; i < in_eigenbasis.size(); ++i) {
        const double theta = -solver.eigenvalues()[i] * t / c.hbar;
        in_eigenbasis[i] *= cplx{std::cos(theta), std::sin(theta)};
    }
    Vector evolved = solver.eigenvectors() * in_eigenbasis;

    std::vector<cplx> out(dim);
    Eigen::Map<Vector>(out.data(), static_cast<Eigen::Index>(dim)) = evolved;
    return StateVector(std::move(out));
}

} // namespace qcoarse
