#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "pxp/basis.hpp"
#include "pxp/groundstate.hpp"
#include "pxp/operators.hpp"
#include "pxp/quench.hpp"
#include "pxp/scan.hpp"
#include "pxp/spectra.hpp"
#include "pxp/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace pxp;

namespace {

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Options shared by every subcommand.
struct Common {
    std::string output_dir;
    int threads = 1;
    std::size_t dense_limit = kDefaultDenseLimit;
};

void add_common(CLI::App* sub, Common& c, bool with_threads) {
    sub->add_option("--output-dir", c.output_dir,
                    "Directory for output files (default: $PXP_OUTPUT_DIR or .)");
    sub->add_option("--dense-limit", c.dense_limit,
                    "Largest dimension accepted by full dense eigensolves")
        ->capture_default_str();
    if (with_threads)
        sub->add_option("--threads", c.threads, "Worker threads for the sweep")
            ->check(CLI::Range(1, 256))
            ->capture_default_str();
    // config handling lives on the top-level app; subcommand options fall
    // through so `pxp <command> --config file` reaches it
    sub->fallthrough(true);
}

// Config files are one flat key = value namespace. The stock reader maps
// flat keys onto top-level options only, so retarget them at the command
// actually being run; keys it does not define are ignored.
class FlatConfig : public CLI::ConfigBase {
public:
    std::string target;

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        auto items = CLI::ConfigBase::from_config(input);
        if (!target.empty())
            for (auto& item : items)
                if (item.parents.empty() && item.name != "--") item.parents = {target};
        return items;
    }
};

fs::path resolve_output_dir(const Common& c) {
    std::string dir = c.output_dir;
    if (dir.empty()) {
        if (const char* env = std::getenv("PXP_OUTPUT_DIR")) dir = env;
        if (dir.empty()) dir = ".";
    }
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

std::ofstream open_output(const fs::path& dir, const std::string& name,
                          const std::string& command, const std::string& echo) {
    std::ofstream out(dir / name, std::ios::binary); // no \r\n translation
    if (!out) throw std::runtime_error("cannot open output file: " + (dir / name).string());
    out << "# pxp " << kVersion << "\n# command: " << command << "\n# config: " << echo << '\n';
    return out;
}

json base_report(const std::string& command, const json& config) {
    json j;
    j["version"] = kVersion;
    j["command"] = command;
    j["config"] = config;
    return j;
}

void write_json(const fs::path& dir, const std::string& name, const json& j) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + (dir / name).string());
    out << j.dump(2) << '\n';
}

json selection_json(const GroundResolution& r) {
    json s;
    s["gap"] = r.gap;
    s["degenerate"] = r.degenerate;
    if (r.degenerate) {
        s["parities"] = {r.parities[0], r.parities[1]};
        s["off_diagonal"] = r.off_diagonal;
        s["selection_sign"] = r.selection_sign;
        s["staggered_diagonals"] = {r.staggered_diagonals[0], r.staggered_diagonals[1]};
    }
    s["pi_deviation"] = r.pi_deviation;
    return s;
}

struct ObservableSpec {
    PauliAxis axis;
    int site;
    std::string name; // e.g. z1
};

std::vector<ObservableSpec> parse_observables(const std::string& list, int length) {
    std::vector<ObservableSpec> specs;
    if (list.empty()) return specs;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        const std::size_t comma = std::min(list.find(',', pos), list.size());
        const std::string tok = list.substr(pos, comma - pos);
        pos = comma + 1;
        if (tok.empty()) continue;
        PauliAxis axis;
        switch (tok[0]) {
        case 'x': axis = PauliAxis::x; break;
        case 'y': axis = PauliAxis::y; break;
        case 'z': axis = PauliAxis::z; break;
        default: throw std::invalid_argument("observable must start with x, y or z: " + tok);
        }
        int site = 0;
        try {
            site = std::stoi(tok.substr(1));
        } catch (...) {
            throw std::invalid_argument("bad observable site in: " + tok);
        }
        if (site < 1 || site > length)
            throw std::invalid_argument("observable site out of range in: " + tok);
        specs.push_back({axis, site, tok});
    }
    return specs;
}

// ---- basis ----------------------------------------------------------------

struct BasisOpts {
    Common common;
    int length = 8;
    bool dump = false;
};

int cmd_basis(const BasisOpts& o) {
    ConstrainedBasis basis(o.length);
    std::cout << "L = " << o.length << "\ndimension = " << basis.dimension() << '\n';
    std::cout << "sectors (momentum index, parity, dimension):\n";
    const int half = o.length / 2;
    std::size_t total = 0;
    for (int n = 0; n <= half; ++n) {
        if (n == 0 || n == half) {
            for (int p : {kParityEven, kParityOdd}) {
                const std::size_t d = sector_dimension(basis, n, p);
                total += d;
                std::cout << "  k=" << n << " p=" << (p > 0 ? "+1" : "-1") << " dim=" << d << '\n';
            }
        } else {
            const std::size_t d = sector_dimension(basis, n);
            total += d;
            std::cout << "  k=+-" << n << " dim=" << d << '\n';
        }
    }
    std::cout << "sector total = " << total << '\n';
    if (o.dump) {
        const std::string echo = "L=" + std::to_string(o.length);
        auto out = open_output(resolve_output_dir(o.common), "basis.csv", "basis", echo);
        basis.dump_csv(out);
        std::cout << "wrote basis.csv\n";
    }
    return 0;
}

// ---- spectrum --------------------------------------------------------------

struct SpectrumOpts {
    Common common;
    int length = 12;
    std::string model = "pxp"; // pxp | prequench
    std::string route = "full"; // full | sectors
    double omega = 1.0;
    double epsilon = kDefaultZfieldEpsilon;
    double delta = -1.0;
    double g2x = 0.0;
    double g2y = 0.0;
    std::string save_vectors;
};

int cmd_spectrum(const SpectrumOpts& o) {
    ConstrainedBasis basis(o.length);
    HamiltonianMatrix h = o.model == "pxp"
                              ? build_postquench(basis, o.omega, o.epsilon)
                              : build_prequench(basis, o.delta, o.g2x, o.g2y);
    std::string echo = "L=" + std::to_string(o.length) + " model=" + o.model +
                       " route=" + o.route;
    if (o.model == "pxp")
        echo += " omega=" + fmt(o.omega) + " epsilon=" + fmt(o.epsilon);
    else
        echo += " delta=" + fmt(o.delta) + " g2x=" + fmt(o.g2x) + " g2y=" + fmt(o.g2y);

    const fs::path dir = resolve_output_dir(o.common);
    std::vector<EigenSystem> systems;
    if (o.route == "sectors") {
        const auto sectors = enumerate_sectors(basis);
        systems = diagonalize_sectors(h, basis, sectors);
    } else {
        systems.push_back(diagonalize_full(h, o.common.dense_limit));
    }
    auto out = open_output(dir, "spectrum.csv", "spectrum", echo);
    dump_spectrum_csv(out, systems);

    std::size_t count = 0;
    double e_min = 0.0, e_max = 0.0;
    bool first = true;
    for (const auto& es : systems) {
        if (es.count() == 0) continue;
        count += es.count();
        const double lo = es.eigenvalues[0];
        const double hi = es.eigenvalues[es.eigenvalues.size() - 1];
        e_min = first ? lo : std::min(e_min, lo);
        e_max = first ? hi : std::max(e_max, hi);
        first = false;
    }
    std::cout << "dimension = " << basis.dimension() << "\neigenvalues = " << count
              << "\nE_min = " << fmt(e_min) << "\nE_max = " << fmt(e_max)
              << "\nwrote spectrum.csv\n";

    if (!o.save_vectors.empty()) {
        if (o.route != "full")
            throw std::invalid_argument("--save-vectors requires --route full");
        save_eigenvectors((dir / o.save_vectors).string(), o.length, systems[0].eigenvectors);
        std::cout << "wrote " << o.save_vectors << '\n';
    }
    return 0;
}

// ---- groundstate -----------------------------------------------------------

struct GroundOpts {
    Common common;
    int length = 12;
    double delta = -1.0;
    double g2x = 0.0;
    double g2y = 0.0;
    double tol = -1.0;
    std::string route = "sectors";
    bool dump_state = false;
};

json ground_config(const GroundOpts& o) {
    json c;
    c["L"] = o.length;
    c["delta"] = o.delta;
    c["g2x"] = o.g2x;
    c["g2y"] = o.g2y;
    c["degeneracy_tol"] = o.tol;
    c["route"] = o.route;
    return c;
}

int cmd_groundstate(const GroundOpts& o) {
    ConstrainedBasis basis(o.length);
    const HamiltonianMatrix h = build_prequench(basis, o.delta, o.g2x, o.g2y);
    std::vector<SectorBasis> sectors;
    const std::vector<SectorBasis>* route = nullptr;
    if (o.route == "sectors") {
        sectors = enumerate_sectors(basis);
        route = &sectors;
    }
    const GroundResolution res =
        resolve_ground_state(h, basis, o.tol, route, o.common.dense_limit);

    json report = base_report("groundstate", ground_config(o));
    report["dimension"] = basis.dimension();
    report["resolution"] = selection_json(res);
    const fs::path dir = resolve_output_dir(o.common);
    write_json(dir, "groundstate.json", report);
    std::cout << "gap = " << fmt(res.gap) << "\ndegenerate = " << (res.degenerate ? 1 : 0)
              << "\nwrote groundstate.json\n";

    if (o.dump_state) {
        std::string echo = "L=" + std::to_string(o.length) + " delta=" + fmt(o.delta) +
                           " g2x=" + fmt(o.g2x) + " g2y=" + fmt(o.g2y);
        auto out = open_output(dir, "state.csv", "groundstate", echo);
        out << "index,bitstring,amplitude\n";
        for (std::size_t i = 0; i < basis.dimension(); ++i)
            out << i << ',' << to_bitstring(basis.states()[i], o.length) << ','
                << fmt(res.state[static_cast<Eigen::Index>(i)]) << '\n';
        std::cout << "wrote state.csv\n";
    }
    return 0;
}

// ---- quench ----------------------------------------------------------------

struct QuenchOpts {
    Common common;
    int length = 12;
    double delta = -1.0;
    double g2x = 0.0;
    double g2y = 0.0;
    double omega = 1.0;
    double epsilon = kDefaultZfieldEpsilon;
    double t_max = 40.0;
    double dt = 0.02;
    double tol = -1.0;
    std::string observables;
};

int cmd_quench(const QuenchOpts& o) {
    ConstrainedBasis basis(o.length);
    const auto specs = parse_observables(o.observables, o.length);
    const auto sectors = enumerate_sectors(basis);

    const HamiltonianMatrix h_pre = build_prequench(basis, o.delta, o.g2x, o.g2y);
    const GroundResolution res =
        resolve_ground_state(h_pre, basis, o.tol, &sectors, o.common.dense_limit);

    const HamiltonianMatrix h_post = build_postquench(basis, o.omega, o.epsilon);
    const SectorDiagonalization post_blocks(h_post, sectors, o.common.threads);
    const OverlapDistribution ov = overlaps(res.state, post_blocks);
    const double deff = effective_dimension(ov);
    const double energy = energy_expectation(res.state, h_post);
    const std::vector<double> times = time_grid(o.t_max, o.dt);
    const TimeSeries losch = loschmidt(ov, times);

    std::string echo = "L=" + std::to_string(o.length) + " delta=" + fmt(o.delta) +
                       " g2x=" + fmt(o.g2x) + " g2y=" + fmt(o.g2y) + " omega=" + fmt(o.omega) +
                       " epsilon=" + fmt(o.epsilon) + " tmax=" + fmt(o.t_max) +
                       " dt=" + fmt(o.dt);
    const fs::path dir = resolve_output_dir(o.common);
    {
        auto out = open_output(dir, "loschmidt.csv", "quench", echo);
        dump_series_csv(out, losch, "loschmidt");
    }
    {
        auto out = open_output(dir, "overlaps.csv", "quench", echo);
        dump_overlaps_csv(out, ov);
    }
    for (const auto& spec : specs) {
        // observables need the eigenvectors themselves, so use the dense route
        const EigenSystem full = diagonalize_full(h_post, o.common.dense_limit);
        const ObservableMatrix obs = build_local_observable(basis, spec.site, spec.axis);
        const TimeSeries series = observable_evolution(res.state, full, obs, times);
        auto out = open_output(dir, "obs_" + spec.name + ".csv", "quench", echo);
        dump_series_csv(out, series, "sigma_" + spec.name);
    }

    json config;
    config["L"] = o.length;
    config["delta"] = o.delta;
    config["g2x"] = o.g2x;
    config["g2y"] = o.g2y;
    config["omega"] = o.omega;
    config["epsilon"] = o.epsilon;
    config["t_max"] = o.t_max;
    config["dt"] = o.dt;
    config["degeneracy_tol"] = o.tol;
    config["observables"] = o.observables;
    json report = base_report("quench", config);
    report["dimension"] = basis.dimension();
    report["resolution"] = selection_json(res);
    report["deff"] = deff;
    report["energy_expectation"] = energy;
    write_json(dir, "report.json", report);
    std::cout << "deff = " << fmt(deff) << "\nenergy_expectation = " << fmt(energy)
              << "\nwrote loschmidt.csv overlaps.csv report.json\n";
    return 0;
}

// ---- scan ------------------------------------------------------------------

struct ScanOpts {
    Common common;
    ScanGrid grid;
    double tol = -1.0;
    double step = 0.0; // shorthand for both axis steps
};

std::string scan_echo(const ScanGrid& g) {
    return "L=" + std::to_string(g.length) + " delta=" + fmt(g.delta) + " g2x=[" +
           fmt(g.g2x_min) + "," + fmt(g.g2x_max) + ";" + fmt(g.g2x_step) + "] g2y=[" +
           fmt(g.g2y_min) + "," + fmt(g.g2y_max) + ";" + fmt(g.g2y_step) + "]";
}

int cmd_scan(ScanOpts& o) {
    if (o.step > 0.0) o.grid.g2x_step = o.grid.g2y_step = o.step;
    const ScanResult result = scan_grid(o.grid, o.common.threads, o.tol);
    const std::string echo = scan_echo(o.grid);
    const fs::path dir = resolve_output_dir(o.common);
    {
        auto out = open_output(dir, "delta_map.csv", "scan", echo);
        dump_delta_map(out, result);
    }
    {
        auto out = open_output(dir, "deff_map.csv", "scan", echo);
        dump_deff_map(out, result);
    }
    {
        auto out = open_output(dir, "failures.csv", "scan", echo);
        dump_failures(out, result);
    }
    std::size_t failed = 0;
    for (const auto& p : result.points) failed += p.failed ? 1 : 0;

    const Optimum opt = find_optimum(result); // throws if every point failed

    json config;
    config["L"] = o.grid.length;
    config["delta"] = o.grid.delta;
    config["g2x_range"] = {o.grid.g2x_min, o.grid.g2x_max, o.grid.g2x_step};
    config["g2y_range"] = {o.grid.g2y_min, o.grid.g2y_max, o.grid.g2y_step};
    config["degeneracy_tol"] = o.tol;
    json report = base_report("scan", config);
    report["points"] = result.points.size();
    report["failed_points"] = failed;
    report["g2x_opt"] = opt.g2x;
    report["g2y_opt"] = opt.g2y;
    report["deff_min"] = opt.deff;
    const ScanPoint& best = result.points[opt.index];
    report["gap_at_optimum"] = best.gap;
    report["degenerate_at_optimum"] = best.degenerate;
    write_json(dir, "optimum.json", report);
    std::cout << "optimum: deff = " << fmt(opt.deff) << " at (g2x, g2y) = (" << fmt(opt.g2x)
              << ", " << fmt(opt.g2y) << ")\nfailed points: " << failed
              << "\nwrote delta_map.csv deff_map.csv failures.csv optimum.json\n";
    return 0;
}

// ---- scaling ---------------------------------------------------------------

struct ScalingOpts {
    Common common;
    std::vector<int> lengths{10, 12, 14};
    std::string mode = "fixed"; // fixed | reoptimize
    double delta = -1.0;
    double g2x = 0.0;
    double g2y = 0.0;
    ScanGrid grid; // ranges/steps for reoptimize mode
};

int cmd_scaling(const ScalingOpts& o) {
    ScalingSpec spec;
    spec.lengths = o.lengths;
    spec.delta = o.delta;
    if (o.mode == "fixed") {
        spec.mode = ScalingMode::fixed_params;
        spec.g2x = o.g2x;
        spec.g2y = o.g2y;
    } else {
        spec.mode = ScalingMode::reoptimize;
        spec.grid = o.grid;
    }
    const auto rows = size_scaling(spec, o.common.threads);

    std::string echo = "Ls=";
    for (std::size_t i = 0; i < o.lengths.size(); ++i)
        echo += (i ? "," : "") + std::to_string(o.lengths[i]);
    echo += " mode=" + o.mode + " delta=" + fmt(o.delta);
    if (o.mode == "fixed")
        echo += " g2x=" + fmt(o.g2x) + " g2y=" + fmt(o.g2y);
    else
        echo += " g2x=[" + fmt(o.grid.g2x_min) + "," + fmt(o.grid.g2x_max) + ";" +
                fmt(o.grid.g2x_step) + "] g2y=[" + fmt(o.grid.g2y_min) + "," +
                fmt(o.grid.g2y_max) + ";" + fmt(o.grid.g2y_step) + "]";

    auto out = open_output(resolve_output_dir(o.common), "scaling.csv", "scaling", echo);
    dump_scaling_csv(out, rows);
    for (const auto& r : rows)
        std::cout << "L=" << r.length << " deff="
                  << (r.failed ? std::string("failed: ") + r.failure : fmt(r.deff)) << '\n';
    std::cout << "wrote scaling.csv\n";
    return 0;
}

void add_grid_options(CLI::App* sub, ScanGrid& grid) {
    sub->add_option("--g2x-min", grid.g2x_min)->capture_default_str();
    sub->add_option("--g2x-max", grid.g2x_max)->capture_default_str();
    sub->add_option("--g2x-step", grid.g2x_step)->capture_default_str();
    sub->add_option("--g2y-min", grid.g2y_min)->capture_default_str();
    sub->add_option("--g2y-max", grid.g2y_max)->capture_default_str();
    sub->add_option("--g2y-step", grid.g2y_step)->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constrained-chain quench pipeline: blockaded basis, symmetry-resolved "
                 "spectra, ground-state preparation, quench dynamics and parameter scans"};
    app.set_version_flag("--version", std::string("pxp ") + kVersion);
    app.require_subcommand(1);
    auto config_fmt = std::make_shared<FlatConfig>();
    app.config_formatter(config_fmt);
    app.set_config("--config", "", "Config file: flat key = value lines");
    app.allow_config_extras(true);

    BasisOpts basis_opts;
    auto* sub_basis = app.add_subcommand("basis", "Enumerate the blockaded basis");
    sub_basis->add_option("--L", basis_opts.length, "Chain length (even)")->required();
    sub_basis->add_flag("--dump", basis_opts.dump, "Write basis.csv");
    add_common(sub_basis, basis_opts.common, false);

    SpectrumOpts spec_opts;
    auto* sub_spec = app.add_subcommand("spectrum", "Diagonalize a Hamiltonian");
    sub_spec->add_option("--L", spec_opts.length, "Chain length (even)")->required();
    sub_spec->add_option("--model", spec_opts.model, "pxp | prequench")
        ->check(CLI::IsMember({"pxp", "prequench"}))
        ->capture_default_str();
    sub_spec->add_option("--route", spec_opts.route, "full | sectors")
        ->check(CLI::IsMember({"full", "sectors"}))
        ->capture_default_str();
    sub_spec->add_option("--omega", spec_opts.omega)->capture_default_str();
    sub_spec->add_option("--epsilon", spec_opts.epsilon, "Zero-mode splitting field")
        ->capture_default_str();
    sub_spec->add_option("--delta", spec_opts.delta)->capture_default_str();
    sub_spec->add_option("--g2x", spec_opts.g2x)->capture_default_str();
    sub_spec->add_option("--g2y", spec_opts.g2y)->capture_default_str();
    sub_spec->add_option("--save-vectors", spec_opts.save_vectors,
                         "Also write eigenvectors (binary container, full route)");
    add_common(sub_spec, spec_opts.common, false);

    GroundOpts ground_opts;
    auto* sub_ground = app.add_subcommand("groundstate", "Resolve the initial state");
    sub_ground->add_option("--L", ground_opts.length, "Chain length (even)")->required();
    sub_ground->add_option("--delta", ground_opts.delta)->capture_default_str();
    sub_ground->add_option("--g2x", ground_opts.g2x)->capture_default_str();
    sub_ground->add_option("--g2y", ground_opts.g2y)->capture_default_str();
    sub_ground->add_option("--degeneracy-tol", ground_opts.tol,
                           "Negative selects 1e-8 * max(1, |E0|)")
        ->capture_default_str();
    sub_ground->add_option("--route", ground_opts.route, "sectors | full")
        ->check(CLI::IsMember({"sectors", "full"}))
        ->capture_default_str();
    sub_ground->add_flag("--dump-state", ground_opts.dump_state, "Write state.csv");
    add_common(sub_ground, ground_opts.common, false);

    QuenchOpts quench_opts;
    auto* sub_quench = app.add_subcommand("quench", "Prepare, quench and evolve");
    sub_quench->add_option("--L", quench_opts.length, "Chain length (even)")->required();
    sub_quench->add_option("--delta", quench_opts.delta)->capture_default_str();
    sub_quench->add_option("--g2x", quench_opts.g2x)->capture_default_str();
    sub_quench->add_option("--g2y", quench_opts.g2y)->capture_default_str();
    sub_quench->add_option("--omega", quench_opts.omega)->capture_default_str();
    sub_quench->add_option("--epsilon", quench_opts.epsilon)->capture_default_str();
    sub_quench->add_option("--tmax", quench_opts.t_max)->capture_default_str();
    sub_quench->add_option("--dt", quench_opts.dt)->capture_default_str();
    sub_quench->add_option("--degeneracy-tol", quench_opts.tol)->capture_default_str();
    sub_quench->add_option("--observables", quench_opts.observables,
                           "Comma list like z1,y1 (axis + 1-based site)");
    add_common(sub_quench, quench_opts.common, false);

    ScanOpts scan_opts;
    auto* sub_scan = app.add_subcommand("scan", "Sweep the (g2x, g2y) plane");
    sub_scan->add_option("--L", scan_opts.grid.length, "Chain length (even)")->required();
    sub_scan->add_option("--delta", scan_opts.grid.delta)->capture_default_str();
    add_grid_options(sub_scan, scan_opts.grid);
    sub_scan->add_option("--step", scan_opts.step, "Shorthand: set both axis steps");
    sub_scan->add_option("--degeneracy-tol", scan_opts.tol)->capture_default_str();
    add_common(sub_scan, scan_opts.common, true);

    ScalingOpts scaling_opts;
    auto* sub_scaling = app.add_subcommand("scaling", "D^eff growth with system size");
    sub_scaling->add_option("--Ls", scaling_opts.lengths, "Chain lengths (even)")
        ->required()
        ->delimiter(',');
    sub_scaling->add_option("--mode", scaling_opts.mode, "fixed | reoptimize")
        ->check(CLI::IsMember({"fixed", "reoptimize"}))
        ->capture_default_str();
    sub_scaling->add_option("--delta", scaling_opts.delta)->capture_default_str();
    sub_scaling->add_option("--g2x", scaling_opts.g2x)->capture_default_str();
    sub_scaling->add_option("--g2y", scaling_opts.g2y)->capture_default_str();
    add_grid_options(sub_scaling, scaling_opts.grid);
    add_common(sub_scaling, scaling_opts.common, true);

    for (CLI::App* sub : app.get_subcommands(nullptr)) {
        const std::string name = sub->get_name();
        sub->preparse_callback([config_fmt, name](std::size_t) { config_fmt->target = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (sub_basis->parsed()) return cmd_basis(basis_opts);
        if (sub_spec->parsed()) return cmd_spectrum(spec_opts);
        if (sub_ground->parsed()) return cmd_groundstate(ground_opts);
        if (sub_quench->parsed()) return cmd_quench(quench_opts);
        if (sub_scan->parsed()) return cmd_scan(scan_opts);
        if (sub_scaling->parsed()) return cmd_scaling(scaling_opts);
    } catch (const ResolutionError& e) {
        json diag;
        diag["error"] = "resolution";
        diag["message"] = e.what();
        std::cerr << diag.dump(2) << '\n';
        return 3;
    } catch (const ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << '\n';
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
