#include "pxp/groundstate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>

namespace pxp {

namespace {

// Reflection permutation applied to a full-space vector. The blockade
// constraint is closed under reflection, so every image index exists.
Eigen::VectorXd apply_reflection(const Eigen::VectorXd& v, const ConstrainedBasis& basis) {
    Eigen::VectorXd w(v.size());
    const auto& states = basis.states();
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto j = basis.index_of(reflect(states[i], basis.length()));
        w[static_cast<Eigen::Index>(j)] = v[static_cast<Eigen::Index>(i)];
    }
    return w;
}

// Distance of v from the nearest particle-hole eigenstate (sign diagonal).
double ph_deviation(const Eigen::VectorXd& v, const ConstrainedBasis& basis) {
    Eigen::VectorXd image(v.size());
    const auto& states = basis.states();
    for (std::size_t i = 0; i < states.size(); ++i)
        image[static_cast<Eigen::Index>(i)] =
            particle_hole_sign(states[i], basis.length()) * v[static_cast<Eigen::Index>(i)];
    return std::min((image - v).norm(), (image + v).norm());
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// Lowest `count` eigenpairs of h (gauge-fixed, full-space columns).
std::pair<Eigen::VectorXd, Eigen::MatrixXd> lowest_levels(const HamiltonianMatrix& h,
                                                          const std::vector<SectorBasis>* sectors,
                                                          std::size_t count,
                                                          std::size_t dense_limit) {
    if (sectors != nullptr) {
        SectorDiagonalization blocks(h, *sectors);
        return blocks.lowest(count);
    }
    const EigenSystem full = diagonalize_full(h, dense_limit);
    const auto n = static_cast<Eigen::Index>(std::min<std::size_t>(count, full.dimension()));
    return {full.eigenvalues.head(n), full.eigenvectors.leftCols(n)};
}

} // namespace

double ground_gap(const HamiltonianMatrix& h_pre, const std::vector<SectorBasis>* sectors,
                  std::size_t dense_limit) {
    if (sectors != nullptr) {
        SectorDiagonalization blocks(h_pre, *sectors);
        const Eigen::VectorXd merged = blocks.merged_eigenvalues();
        return merged[1] - merged[0];
    }
    if (h_pre.dimension() > dense_limit)
        throw ResourceLimitError("matrix dimension " + std::to_string(h_pre.dimension()) +
                                 " exceeds dense limit " + std::to_string(dense_limit));
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(h_pre.dimension()),
                                                  static_cast<Eigen::Index>(h_pre.dimension()));
    for (const auto& e : h_pre.entries())
        dense(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) = e.value;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()[1] - solver.eigenvalues()[0];
}

int classify_parity(const Eigen::VectorXd& v, const ConstrainedBasis& basis) {
    const double r = v.dot(apply_reflection(v, basis));
    if (std::abs(r - 1.0) < 1e-8)
        return 1;
    if (std::abs(r + 1.0) < 1e-8)
        return -1;
    return 0;
}

GroundResolution resolve_ground_state(const HamiltonianMatrix& h_pre,
                                      const ConstrainedBasis& basis, double degeneracy_tol,
                                      const std::vector<SectorBasis>* sectors,
                                      std::size_t dense_limit) {
    const auto [evals, evecs] = lowest_levels(h_pre, sectors, 3, dense_limit);
    return resolve_from_levels(evals, evecs, basis, degeneracy_tol);
}

GroundResolution resolve_from_levels(const Eigen::VectorXd& evals, const Eigen::MatrixXd& evecs,
                                     const ConstrainedBasis& basis, double degeneracy_tol) {
    if (evals.size() < 2)
        throw ResolutionError("need at least two levels to resolve the ground state");

    const double e0 = evals[0];
    const double tol = degeneracy_tol < 0.0 ? 1e-8 * std::max(1.0, std::abs(e0)) : degeneracy_tol;

    GroundResolution res;
    res.gap = evals[1] - e0;

    if (res.gap > tol) {
        res.degenerate = false;
        res.state = evecs.col(0);
        gauge_fix(res.state);
        res.pi_deviation = ph_deviation(res.state, basis);
        return res;
    }

    if (evals.size() >= 3 && evals[2] - e0 <= tol)
        throw ResolutionError("ground level is more than two-fold degenerate (E2 - E0 = " +
                              format_double(evals[2] - e0) + " within tolerance " +
                              format_double(tol) + ")");

    res.degenerate = true;

    // Rotate the degenerate pair into reflection eigenstates. The 2x2 matrix
    // of R in the pair's span must have eigenvalues +1 and -1; anything else
    // means the pair is not the expected parity doublet.
    const Eigen::VectorXd v0 = evecs.col(0);
    const Eigen::VectorXd v1 = evecs.col(1);
    const Eigen::VectorXd rv0 = apply_reflection(v0, basis);
    const Eigen::VectorXd rv1 = apply_reflection(v1, basis);
    Eigen::Matrix2d r2;
    r2 << v0.dot(rv0), v0.dot(rv1), v1.dot(rv0), v1.dot(rv1);
    r2 = 0.5 * (r2 + r2.transpose().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> small(r2);
    const Eigen::Vector2d lam = small.eigenvalues(); // ascending: expect -1, +1
    if (std::abs(lam[0] + 1.0) > 1e-6 || std::abs(lam[1] - 1.0) > 1e-6)
        throw ResolutionError("degenerate ground pair does not split into opposite reflection "
                              "parities (R eigenvalues " +
                              format_double(lam[0]) + ", " + format_double(lam[1]) + ")");

    Eigen::VectorXd psi_plus = evecs.leftCols(2) * small.eigenvectors().col(1);
    Eigen::VectorXd psi_minus = evecs.leftCols(2) * small.eigenvectors().col(0);
    gauge_fix(psi_plus);
    gauge_fix(psi_minus);
    res.parities = {1, -1};

    const HamiltonianMatrix staggered = build_staggered(basis);
    res.staggered_diagonals = {
        std::abs(staggered.quadratic_form(psi_plus.data(), psi_plus.data())),
        std::abs(staggered.quadratic_form(psi_minus.data(), psi_minus.data())),
    };
    for (int p = 0; p < 2; ++p) {
        if (res.staggered_diagonals[static_cast<std::size_t>(p)] > 1e-8)
            throw ResolutionError(
                "staggered potential has a nonvanishing diagonal element " +
                format_double(res.staggered_diagonals[static_cast<std::size_t>(p)]) +
                " in the parity " + (p == 0 ? std::string("+1") : std::string("-1")) +
                " ground state; the selection rule assumes an even chain");
    }

    res.off_diagonal = staggered.quadratic_form(psi_plus.data(), psi_minus.data());
    if (std::abs(res.off_diagonal) <= 1e-10)
        throw ResolutionError("staggered potential does not split the degenerate pair "
                              "(off-diagonal element " +
                              format_double(res.off_diagonal) + ")");

    // The field enters with a fixed negative coefficient, so the physical
    // branch maximizes the staggered expectation, which is sign(x) for
    // (psi_+ + s psi_-)/sqrt(2) with cross term s*x.
    res.selection_sign = res.off_diagonal > 0.0 ? 1 : -1;
    res.state = (psi_plus + res.selection_sign * psi_minus) / std::sqrt(2.0);
    gauge_fix(res.state);

    // H_pre commutes with the particle-hole operator, so the selected state
    // should be a particle-hole eigenstate: that is what pins the post-quench
    // energy expectation to zero. Record the deviation for downstream checks.
    res.pi_deviation = ph_deviation(res.state, basis);
    return res;
}

} // namespace pxp
