#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "pxp/basis.hpp"

namespace pxp {

/// Sparse real symmetric matrix over a constrained basis, stored as a
/// row-sorted coordinate list with both triangles explicit. Every
/// Hamiltonian of this model is real in the z-basis.
class HamiltonianMatrix {
public:
    struct Entry {
        std::size_t row;
        std::size_t col;
        double value;
    };

    HamiltonianMatrix(const ConstrainedBasis& basis, std::vector<Entry> entries);

    const ConstrainedBasis& basis() const { return *basis_; }
    std::size_t dimension() const { return basis_->dimension(); }
    const std::vector<Entry>& entries() const { return entries_; }

    /// y = H x. Buffers must hold dimension() doubles; y is overwritten.
    void apply(const double* x, double* y) const;

    /// v . (H w), both vectors of dimension().
    double quadratic_form(const double* v, const double* w) const;

    /// Value at (row, col); zero if not stored.
    double coeff(std::size_t row, std::size_t col) const;

    /// Entries of one row as a contiguous span [begin, end) into entries().
    std::pair<std::size_t, std::size_t> row_range(std::size_t row) const;

    /// Sum of two operators over the same basis (used for the
    /// degeneracy-breaking field: H + eps * Z).
    friend HamiltonianMatrix operator+(const HamiltonianMatrix& a,
                                       const HamiltonianMatrix& b);
    /// Scalar multiple.
    friend HamiltonianMatrix operator*(double s, const HamiltonianMatrix& h);

    /// CSV dump (row, col, value) preceded by a one-line description comment.
    void dump_csv(std::ostream& out, const std::string& description) const;

private:
    const ConstrainedBasis* basis_;
    std::vector<Entry> entries_;
    std::vector<std::size_t> row_start_; // dimension()+1 offsets into entries_
    void build_row_index();
};

/// Sparse complex Hermitian observable over a constrained basis.
class ObservableMatrix {
public:
    struct Entry {
        std::size_t row;
        std::size_t col;
        std::complex<double> value;
    };

    ObservableMatrix(const ConstrainedBasis& basis, std::vector<Entry> entries);

    const ConstrainedBasis& basis() const { return *basis_; }
    std::size_t dimension() const { return basis_->dimension(); }
    const std::vector<Entry>& entries() const { return entries_; }

    /// y = O x for complex vectors of dimension().
    void apply(const std::complex<double>* x, std::complex<double>* y) const;

private:
    const ConstrainedBasis* basis_;
    std::vector<Entry> entries_;
};

/// Post-quench Hamiltonian: (Omega/2) * sum_j sigma^x_j restricted to the
/// blockaded space. A site may flip only when both cyclic neighbours are
/// down; every other image leaves the constrained space and is dropped.
HamiltonianMatrix build_pxp(const ConstrainedBasis& basis, double omega = 1.0);

/// Pre-quench Hamiltonian: (Delta/2) * sum_j sigma^z_j plus next-nearest
/// neighbour exchange sum_j (g2x sigma^x_j sigma^x_{j+2} + g2y sigma^y_j
/// sigma^y_{j+2}), all restricted to the blockaded space. Anti-aligned
/// next-nearest pairs exchange with amplitude g2x + g2y; aligned pairs
/// double-flip with amplitude g2x - g2y.
HamiltonianMatrix build_prequench(const ConstrainedBasis& basis, double delta,
                                  double g2x, double g2y);

/// Staggered potential sum_j (-1)^j sigma^z_j (site 1 carries -1); diagonal.
/// Used to select a symmetry-broken ground state from a degenerate pair.
HamiltonianMatrix build_staggered(const ConstrainedBasis& basis);

/// Uniform field sum_j sigma^z_j; diagonal value n_up - n_down. The caller
/// scales by the degeneracy-breaking strength epsilon.
HamiltonianMatrix build_zfield(const ConstrainedBasis& basis);

/// Default strength of the zero-mode splitting field added to the
/// post-quench Hamiltonian, in units of Omega.
inline constexpr double kDefaultZfieldEpsilon = 1e-9;

/// Post-quench Hamiltonian with the degeneracy-breaking field included:
/// PXP(omega) + epsilon * Z. epsilon = 0 gives the bare PXP matrix.
HamiltonianMatrix build_postquench(const ConstrainedBasis& basis, double omega = 1.0,
                                   double epsilon = kDefaultZfieldEpsilon);

enum class PauliAxis { x, y, z };

/// Single-site Pauli operator restricted to the blockaded space.
/// sigma^y uses the convention sigma^y|down> = i|up>, sigma^y|up> = -i|down>.
ObservableMatrix build_local_observable(const ConstrainedBasis& basis, int site,
                                        PauliAxis axis);

} // namespace pxp
