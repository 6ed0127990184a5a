#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "pxp/basis.hpp"
#include "pxp/operators.hpp"

namespace pxp {

/// Thrown when a request exceeds a configured resource bound (CLI exit 4).
class ResourceLimitError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Largest matrix dimension accepted by the dense full-space eigensolver.
inline constexpr std::size_t kDefaultDenseLimit = 16000;

/// Eigenvalues ascending; eigenvector columns orthonormal and gauge-fixed
/// (largest-magnitude component positive, ties broken by lowest basis index).
struct EigenSystem {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
    std::string sector_label; // empty for full-space systems

    std::size_t dimension() const { return static_cast<std::size_t>(eigenvectors.rows()); }
    std::size_t count() const { return static_cast<std::size_t>(eigenvalues.size()); }
};

/// Tolerance below which two eigenvalues are treated as equal:
/// 1e-10 * max(1, spectral radius).
double degeneracy_tolerance(const Eigen::VectorXd& eigenvalues);

/// Sign-fix a real eigenvector in place: the largest-magnitude component
/// (lowest index on ties) is made positive.
void gauge_fix(Eigen::Ref<Eigen::VectorXd> v);

/// Dense symmetric eigensolve of the full constrained-space matrix.
/// Throws ResourceLimitError above dense_limit (use the sector route).
EigenSystem diagonalize_full(const HamiltonianMatrix& h,
                             std::size_t dense_limit = kDefaultDenseLimit);

/// Verifies that h commutes with the translation permutation, and with the
/// reflection permutation when require_reflection is set. Throws
/// std::invalid_argument naming the violated symmetry.
void require_symmetries(const HamiltonianMatrix& h, bool require_reflection);

/// Per-sector eigensystems with eigenvectors embedded back into the full
/// constrained basis. Asserts the needed symmetries before projecting.
std::vector<EigenSystem> diagonalize_sectors(const HamiltonianMatrix& h,
                                             const ConstrainedBasis& basis,
                                             const std::vector<SectorBasis>& sectors);

/// Componentwise multiply by the particle-hole sign; for PXP eigenstates
/// this maps an eigenvector at energy E to one at -E.
Eigen::VectorXd particle_hole_partner(const Eigen::VectorXd& v,
                                      const ConstrainedBasis& basis);

/// Block-diagonal eigendecomposition kept in sector coordinates. The cheap
/// route for scans: block eigensolves cost far less than the full dense
/// solve, and overlaps against a full-space vector never require embedding
/// the whole eigenbasis.
class SectorDiagonalization {
public:
    struct Block {
        Eigen::VectorXd eigenvalues;       // ascending within the block
        Eigen::MatrixXd vectors;           // block coordinates, orthonormal
    };

    /// Diagonalizes every sector block of h. Sectors must cover the full
    /// space for overlap completeness; symmetry preconditions as in
    /// diagonalize_sectors. Blocks are processed with up to `threads`
    /// workers and merged in fixed sector order.
    SectorDiagonalization(const HamiltonianMatrix& h,
                          const std::vector<SectorBasis>& sectors, int threads = 1);

    const std::vector<SectorBasis>& sectors() const { return *sectors_; }
    const std::vector<Block>& blocks() const { return blocks_; }
    std::size_t total_dimension() const { return total_dimension_; }

    /// All block eigenvalues merged and sorted ascending.
    Eigen::VectorXd merged_eigenvalues() const;

    /// Amplitudes <E_n|psi0> for every eigenstate, as (energy, amplitude)
    /// sorted by energy (ties by sector order, then block column).
    std::vector<std::pair<double, double>> overlaps(const Eigen::VectorXd& psi0) const;

    /// The `count` lowest eigenpairs across all blocks, embedded into the
    /// full basis and gauge-fixed. Returns ascending eigenvalues and the
    /// matching eigenvector columns.
    std::pair<Eigen::VectorXd, Eigen::MatrixXd> lowest(std::size_t count) const;

    /// Embedded eigensystem of one sector (gauge-fixed).
    EigenSystem embed(std::size_t sector_index) const;

private:
    const std::vector<SectorBasis>* sectors_;
    std::vector<Block> blocks_;
    std::size_t full_dimension_ = 0;
    std::size_t total_dimension_ = 0;
};

/// CSV dump: sector,index,eigenvalue (one row per eigenvalue).
void dump_spectrum_csv(std::ostream& out, const std::vector<EigenSystem>& systems);

/// Simple binary container for eigenvector reuse across scans.
/// Layout: magic "PXPV", int32 L, uint64 dimension, uint64 count, then
/// dimension*count row-major doubles.
void save_eigenvectors(const std::string& path, int length, const Eigen::MatrixXd& vectors);
Eigen::MatrixXd load_eigenvectors(const std::string& path, int* length_out = nullptr);

} // namespace pxp
