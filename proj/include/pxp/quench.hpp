#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "pxp/operators.hpp"
#include "pxp/spectra.hpp"

namespace pxp {

/// Overlap amplitudes of an initial state with a post-quench eigenbasis,
/// sorted by energy. Everything in this model is real in the z-basis, so
/// the amplitudes are real; weights are their squares and sum to one.
struct OverlapDistribution {
    std::vector<double> energies;
    std::vector<double> amplitudes;
    std::vector<double> weights;

    std::size_t size() const { return energies.size(); }
};

struct TimeSeries {
    std::vector<double> times;
    std::vector<double> values;
};

/// Uniform grid 0, dt, 2*dt, ... up to and including t_max (within roundoff).
/// Defaults cover a few revival periods at the standard drive.
std::vector<double> time_grid(double t_max = 40.0, double dt = 0.02);

OverlapDistribution overlaps(const Eigen::VectorXd& psi0, const EigenSystem& eig);
OverlapDistribution overlaps(const Eigen::VectorXd& psi0,
                             const SectorDiagonalization& eig);

/// Effective dimension 1 / sum_n w_n^2. Weights of eigenvalues closer than
/// cluster_tol are summed per degenerate cluster before squaring, which
/// makes the value well-defined under exact degeneracy; pass cluster_tol = 0
/// to evaluate the bare formula. The default tolerance, 1e-12 * max(1,
/// spectral radius), sits above eigensolver noise but below the splitting
/// produced by the default zero-mode breaking field, so deliberately split
/// levels still count separately while exact degeneracies are merged.
double effective_dimension(const OverlapDistribution& ov, double cluster_tol);
double effective_dimension(const OverlapDistribution& ov);

/// Loschmidt probability |sum_n w_n exp(-i E_n t)|^2 by spectral sum.
TimeSeries loschmidt(const OverlapDistribution& ov, const std::vector<double>& times);

/// Re <psi(t)| obs |psi(t)> with psi(t) reconstructed from the eigensystem.
TimeSeries observable_evolution(const Eigen::VectorXd& psi0, const EigenSystem& eig,
                                const ObservableMatrix& obs,
                                const std::vector<double>& times);

/// psi0 . H psi0.
double energy_expectation(const Eigen::VectorXd& psi0, const HamiltonianMatrix& h);

/// CSV dumps: (t, value) and (energy, weight).
void dump_series_csv(std::ostream& out, const TimeSeries& series,
                     const std::string& value_name);
void dump_overlaps_csv(std::ostream& out, const OverlapDistribution& ov);

} // namespace pxp
