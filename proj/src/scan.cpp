#include "pxp/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace pxp {

namespace {

void print_csv(std::ostream& out, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out << buf;
}

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n') c = ';';
    return s;
}

void run_slots(std::size_t count, int threads, const std::function<void(std::size_t)>& work) {
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            std::size_t i;
            while ((i = next.fetch_add(1)) < count && !failed.load()) {
                try {
                    work(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!failed.exchange(true)) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failed.load()) std::rethrow_exception(error);
}

} // namespace

std::vector<double> grid_values(double lo, double hi, double step) {
    if (step <= 0.0) throw std::invalid_argument("grid step must be positive");
    if (hi < lo) throw std::invalid_argument("grid range is empty");
    const auto count =
        static_cast<std::size_t>(std::floor((hi - lo) / step * (1.0 + 1e-12) + 1e-6)) + 1;
    std::vector<double> values;
    values.reserve(count);
    const double base = lo / step;
    const bool aligned = std::abs(base - std::round(base)) < 1e-9;
    for (std::size_t i = 0; i < count; ++i) {
        const double v = aligned ? (std::round(base) + static_cast<double>(i)) * step
                                 : lo + static_cast<double>(i) * step;
        values.push_back(v);
    }
    return values;
}

std::vector<double> ScanGrid::g2x_values() const { return grid_values(g2x_min, g2x_max, g2x_step); }
std::vector<double> ScanGrid::g2y_values() const { return grid_values(g2y_min, g2y_max, g2y_step); }

ScanContext::ScanContext(int length, double omega, double epsilon, int threads)
    : basis_(length),
      sectors_(enumerate_sectors(basis_)),
      post_(build_postquench(basis_, omega, epsilon)),
      post_blocks_(post_, sectors_, threads) {}

ScanPoint evaluate_scan_point(const ScanContext& ctx, double delta, double g2x, double g2y,
                              double degeneracy_tol) {
    ScanPoint point;
    point.g2x = g2x;
    point.g2y = g2y;

    const HamiltonianMatrix h_pre = build_prequench(ctx.basis(), delta, g2x, g2y);
    const SectorDiagonalization pre_blocks(h_pre, ctx.sectors());
    const auto [evals, evecs] = pre_blocks.lowest(3);
    point.gap = evals[1] - evals[0];

    try {
        const GroundResolution res = resolve_from_levels(evals, evecs, ctx.basis(), degeneracy_tol);
        point.degenerate = res.degenerate;
        point.off_diagonal = res.off_diagonal;
        point.selection_sign = res.selection_sign;
        point.pi_deviation = res.pi_deviation;
        point.staggered_max = std::max(std::abs(res.staggered_diagonals[0]),
                                       std::abs(res.staggered_diagonals[1]));
        point.deff = effective_dimension(overlaps(res.state, ctx.post_blocks()));
    } catch (const ResolutionError& e) {
        point.failed = true;
        point.failure = e.what();
    }
    return point;
}

ScanResult scan_grid(const ScanContext& ctx, const ScanGrid& grid, int threads,
                     double degeneracy_tol) {
    if (grid.length != ctx.basis().length())
        throw std::invalid_argument("grid length does not match the scan context");
    const std::vector<double> xs = grid.g2x_values();
    const std::vector<double> ys = grid.g2y_values();

    ScanResult result;
    result.grid = grid;
    result.points.resize(xs.size() * ys.size());
    run_slots(result.points.size(), threads, [&](std::size_t i) {
        const double g2x = xs[i / ys.size()];
        const double g2y = ys[i % ys.size()];
        result.points[i] = evaluate_scan_point(ctx, grid.delta, g2x, g2y, degeneracy_tol);
    });
    return result;
}

ScanResult scan_grid(const ScanGrid& grid, int threads, double degeneracy_tol) {
    ScanContext ctx(grid.length, 1.0, kDefaultZfieldEpsilon, threads);
    return scan_grid(ctx, grid, threads, degeneracy_tol);
}

Optimum find_optimum(const ScanResult& result) {
    const ScanPoint* best = nullptr;
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < result.points.size(); ++i) {
        const ScanPoint& p = result.points[i];
        if (p.failed) continue;
        // index order is lexicographic in (g2x, g2y), so strict < keeps the
        // required tie-breaking
        if (best == nullptr || p.deff < best->deff) {
            best = &p;
            best_index = i;
        }
    }
    if (best == nullptr) throw std::runtime_error("scan contains no successful points");
    return {best->g2x, best->g2y, best->deff, best_index};
}

std::vector<ScalingRow> size_scaling(const ScalingSpec& spec, int threads) {
    std::vector<ScalingRow> rows;
    rows.reserve(spec.lengths.size());
    for (const int length : spec.lengths) {
        ScalingRow row;
        row.length = length;
        row.delta = spec.delta;
        try {
            ScanContext ctx(length, 1.0, kDefaultZfieldEpsilon, threads);
            if (spec.mode == ScalingMode::fixed_params) {
                const ScanPoint point =
                    evaluate_scan_point(ctx, spec.delta, spec.g2x, spec.g2y);
                row.g2x = spec.g2x;
                row.g2y = spec.g2y;
                if (point.failed) {
                    row.failed = true;
                    row.failure = point.failure;
                } else {
                    row.deff = point.deff;
                }
            } else {
                ScanGrid grid = spec.grid;
                grid.length = length;
                grid.delta = spec.delta;
                const ScanResult result = scan_grid(ctx, grid, threads);
                const Optimum opt = find_optimum(result);
                row.g2x = opt.g2x;
                row.g2y = opt.g2y;
                row.deff = opt.deff;
            }
        } catch (const std::exception& e) {
            row.failed = true;
            row.failure = e.what();
        }
        if (!row.failed) row.deff_per_site = row.deff / length;
        rows.push_back(std::move(row));
    }
    return rows;
}

void dump_delta_map(std::ostream& out, const ScanResult& result) {
    out << "g2x,g2y,delta\n";
    for (const ScanPoint& p : result.points) {
        print_csv(out, p.g2x);
        out << ',';
        print_csv(out, p.g2y);
        out << ',';
        print_csv(out, p.gap);
        out << '\n';
    }
}

void dump_deff_map(std::ostream& out, const ScanResult& result) {
    out << "g2x,g2y,deff\n";
    for (const ScanPoint& p : result.points) {
        print_csv(out, p.g2x);
        out << ',';
        print_csv(out, p.g2y);
        out << ',';
        if (p.failed)
            out << "nan";
        else
            print_csv(out, p.deff);
        out << '\n';
    }
}

void dump_failures(std::ostream& out, const ScanResult& result) {
    out << "g2x,g2y,reason\n";
    for (const ScanPoint& p : result.points) {
        if (!p.failed) continue;
        print_csv(out, p.g2x);
        out << ',';
        print_csv(out, p.g2y);
        out << ',' << sanitize(p.failure) << '\n';
    }
}

void dump_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows) {
    out << "L,g2x,g2y,delta,deff,deff_per_site,status\n";
    for (const ScalingRow& r : rows) {
        out << r.length << ',';
        print_csv(out, r.g2x);
        out << ',';
        print_csv(out, r.g2y);
        out << ',';
        print_csv(out, r.delta);
        out << ',';
        if (r.failed) {
            out << "nan,nan," << sanitize(r.failure);
        } else {
            print_csv(out, r.deff);
            out << ',';
            print_csv(out, r.deff_per_site);
            out << ",ok";
        }
        out << '\n';
    }
}

} // namespace pxp
