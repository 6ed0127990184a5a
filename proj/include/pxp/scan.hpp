#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pxp/groundstate.hpp"
#include "pxp/quench.hpp"
#include "pxp/spectra.hpp"

namespace pxp {

/// Parameter plane of the pre-quench deformation at fixed detuning.
struct ScanGrid {
    int length = 12;
    double delta = -1.0;
    double g2x_min = -1.0;
    double g2x_max = 1.0;
    double g2x_step = 0.02;
    double g2y_min = -1.0;
    double g2y_max = 1.0;
    double g2y_step = 0.02;

    std::vector<double> g2x_values() const;
    std::vector<double> g2y_values() const;
};

/// Axis sample points lo, lo+step, ..., up to hi (fuzzy endpoint inclusion).
/// Values snap to exact multiples of step when lo is one, so 0 is exact.
std::vector<double> grid_values(double lo, double hi, double step);

struct ScanPoint {
    double g2x = 0.0;
    double g2y = 0.0;
    double gap = 0.0;
    bool degenerate = false;
    double deff = 0.0;
    // selection diagnostics carried through from the resolution
    double off_diagonal = 0.0;
    int selection_sign = 0;
    double pi_deviation = 0.0;
    /// Larger |staggered diagonal| of the rotated degenerate pair; 0 when unique.
    double staggered_max = 0.0;
    bool failed = false;
    std::string failure;
};

struct ScanResult {
    ScanGrid grid;
    /// Row-major: g2x outer (ascending), g2y inner (ascending).
    std::vector<ScanPoint> points;
};

struct Optimum {
    double g2x = 0.0;
    double g2y = 0.0;
    double deff = 0.0;
    std::size_t index = 0; // into ScanResult::points
};

/// Shared per-L machinery: basis, sector decomposition, and the post-quench
/// eigensystem solved once and reused read-only by every grid point.
/// Self-referential (matrices point at the owned basis), so pinned in place.
class ScanContext {
public:
    explicit ScanContext(int length, double omega = 1.0,
                         double epsilon = kDefaultZfieldEpsilon, int threads = 1);
    ScanContext(const ScanContext&) = delete;
    ScanContext& operator=(const ScanContext&) = delete;

    const ConstrainedBasis& basis() const { return basis_; }
    const std::vector<SectorBasis>& sectors() const { return sectors_; }
    const SectorDiagonalization& post_blocks() const { return post_blocks_; }

private:
    ConstrainedBasis basis_;
    std::vector<SectorBasis> sectors_;
    HamiltonianMatrix post_;
    SectorDiagonalization post_blocks_;
};

/// One grid point: build the pre-quench Hamiltonian, resolve its ground
/// state, and measure the effective dimension of the resolved state against
/// the shared post-quench eigensystem. A ResolutionError is recorded in the
/// returned point (failed = true) rather than thrown; the gap survives.
ScanPoint evaluate_scan_point(const ScanContext& ctx, double delta, double g2x, double g2y,
                              double degeneracy_tol = -1.0);

/// Full sweep of the grid with up to `threads` workers writing disjoint
/// slots, so the result is identical regardless of scheduling.
ScanResult scan_grid(const ScanGrid& grid, int threads = 1, double degeneracy_tol = -1.0);

/// Sweep against an existing context (grid.length must match).
ScanResult scan_grid(const ScanContext& ctx, const ScanGrid& grid, int threads = 1,
                     double degeneracy_tol = -1.0);

/// Grid minimum of D^eff over successful points; ties broken by smaller
/// g2x, then smaller g2y. Throws std::runtime_error when every point failed.
Optimum find_optimum(const ScanResult& result);

enum class ScalingMode { fixed_params, reoptimize };

struct ScalingSpec {
    std::vector<int> lengths; // even
    double delta = -1.0;
    ScalingMode mode = ScalingMode::fixed_params;
    double g2x = 0.0; // fixed_params mode
    double g2y = 0.0;
    /// reoptimize mode: g ranges/steps applied at each length (length and
    /// delta fields of this template are ignored).
    ScanGrid grid;
};

struct ScalingRow {
    int length = 0;
    double g2x = 0.0;
    double g2y = 0.0;
    double delta = 0.0;
    double deff = 0.0;
    double deff_per_site = 0.0;
    bool failed = false;
    std::string failure;
};

/// D^eff growth with system size, either at fixed deformation parameters or
/// re-optimizing the grid at every length. Per-L failures become marked rows.
std::vector<ScalingRow> size_scaling(const ScalingSpec& spec, int threads = 1);

/// Heatmap CSVs: "g2x,g2y,delta" and "g2x,g2y,deff" (failed points print
/// nan in the deff map), row-major grid order.
void dump_delta_map(std::ostream& out, const ScanResult& result);
void dump_deff_map(std::ostream& out, const ScanResult& result);
/// "g2x,g2y,reason" rows for failed points only.
void dump_failures(std::ostream& out, const ScanResult& result);
/// "L,g2x,g2y,delta,deff,deff_per_site,status" rows.
void dump_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows);

} // namespace pxp
