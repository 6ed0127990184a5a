#pragma once

#include <Eigen/Dense>
#include <array>
#include <stdexcept>

#include "pxp/operators.hpp"
#include "pxp/spectra.hpp"

namespace pxp {

/// Thrown when a ground-state resolution violates the structure this
/// pipeline relies on (more than two degenerate levels, a degenerate pair
/// that does not split into opposite reflection parities, or a nonvanishing
/// staggered diagonal element). CLI exit 3.
class ResolutionError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Outcome of resolving the physical initial state of a pre-quench
/// Hamiltonian, including the degenerate-pair bookkeeping.
struct GroundResolution {
    double gap = 0.0;        // E1 - E0 >= 0
    bool degenerate = false;
    /// Reflection parities of the ground pair when degenerate ({+1, -1}).
    std::array<int, 2> parities{0, 0};
    /// Staggered matrix element x between the parity eigenstates.
    double off_diagonal = 0.0;
    /// Diagnostics: |<psi_p|staggered|psi_p>| for p = +1, -1 (must vanish
    /// for even chains).
    std::array<double, 2> staggered_diagonals{0.0, 0.0};
    /// Relative sign in selected = (psi_+ + s * psi_-)/sqrt(2); 0 when the
    /// ground state is unique.
    int selection_sign = 0;
    /// Distance of the selected state from the nearest excitation-parity
    /// eigenstate; nonzero values are flagged by callers that rely on the
    /// energy-pinning argument.
    double pi_deviation = 0.0;
    /// Normalized, gauge-fixed initial state in the constrained basis.
    Eigen::VectorXd state;
};

/// Gap E1 - E0 of the pre-quench Hamiltonian. Uses the full dense solve, or
/// block solves when a full sector decomposition is supplied.
double ground_gap(const HamiltonianMatrix& h_pre,
                  const std::vector<SectorBasis>* sectors = nullptr,
                  std::size_t dense_limit = kDefaultDenseLimit);

/// Reflection parity of a normalized state: +1 or -1 when |<v|Rv>| is within
/// 1e-8 of one, otherwise 0 (mixed).
int classify_parity(const Eigen::VectorXd& v, const ConstrainedBasis& basis);

/// Resolves the physical initial state of h_pre.
///
/// A unique ground level (gap above tolerance) is returned as-is. A
/// two-fold degenerate level is split with the staggered potential:
/// the pair is rotated into reflection-parity eigenstates, the vanishing of
/// both diagonal staggered elements is verified, and the combination
/// (psi_+ + s psi_-)/sqrt(2) maximizing the staggered expectation is
/// selected (the ground state of the staggered field with a fixed negative
/// coefficient, the symmetry-breaking convention used throughout).
///
/// degeneracy_tol < 0 selects the default 1e-8 * max(1, |E0|). A non-null
/// `sectors` switches the eigensolve to per-sector blocks.
GroundResolution resolve_ground_state(const HamiltonianMatrix& h_pre,
                                      const ConstrainedBasis& basis,
                                      double degeneracy_tol = -1.0,
                                      const std::vector<SectorBasis>* sectors = nullptr,
                                      std::size_t dense_limit = kDefaultDenseLimit);

/// Same resolution logic on precomputed lowest levels (>= 2, ideally 3, so
/// the two-fold bound can be checked). `evecs` columns are the ascending
/// eigenvectors in the full constrained basis. Used by scans that already
/// hold a block decomposition of the pre-quench Hamiltonian.
GroundResolution resolve_from_levels(const Eigen::VectorXd& evals,
                                     const Eigen::MatrixXd& evecs,
                                     const ConstrainedBasis& basis,
                                     double degeneracy_tol = -1.0);

} // namespace pxp
