#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

// PXP_CLI_PATH is injected by the build as the path of the pxp binary.

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("pxp_cli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

RunResult run(const std::string& args, const fs::path& dir, const std::string& env = "") {
    const fs::path out = dir / "_stdout.txt";
    const fs::path err = dir / "_stderr.txt";
    std::string cmd = env.empty() ? "" : env + " ";
    cmd += std::string(PXP_CLI_PATH) + " " + args + " > " + out.string() + " 2> " +
           err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

json parse_json_file(const fs::path& p) { return json::parse(slurp(p)); }

// data files open with a short '#' preamble before the CSV header
std::string csv_body(const fs::path& p) {
    std::istringstream in(slurp(p));
    std::string line, body;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') continue;
        body += line;
        body += '\n';
    }
    return body;
}

std::size_t line_count(const std::string& s) {
    std::size_t n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

} // namespace

TEST_CASE("basis command prints the constrained dimension") {
    const fs::path dir = fresh_dir("basis");
    const RunResult r = run("basis --L 8 --output-dir " + dir.string(), dir);
    CHECK(r.code == 0);
    CHECK(r.out.find("dimension = 47") != std::string::npos);
}

TEST_CASE("invalid chain lengths are usage errors") {
    const fs::path dir = fresh_dir("badlen");
    CHECK(run("basis --L 7 --output-dir " + dir.string(), dir).code == 2);
    CHECK(run("basis --L 0 --output-dir " + dir.string(), dir).code == 2);
    CHECK(run("quench --L 13 --output-dir " + dir.string(), dir).code == 2);
    // missing subcommand is also a usage error
    CHECK(run("", dir).code == 2);
    CHECK(run("frobnicate", dir).code == 2);
}

TEST_CASE("basis dump writes the configuration table") {
    const fs::path dir = fresh_dir("basisdump");
    const RunResult r = run("basis --L 4 --dump --output-dir " + dir.string(), dir);
    CHECK(r.code == 0);
    const std::string body = csv_body(dir / "basis.csv");
    CHECK(body.rfind("index,bitstring,popcount\n", 0) == 0);
    CHECK(line_count(body) == 8); // header + 7 configurations
    // preamble identifies the producing command
    CHECK(slurp(dir / "basis.csv").rfind("# pxp", 0) == 0);
}

TEST_CASE("quench at attractive detuning reproduces the frozen spread") {
    const fs::path dir = fresh_dir("quench_neel");
    const RunResult r = run("quench --L 10 --delta -1 --output-dir " + dir.string(), dir);
    REQUIRE(r.code == 0);
    const json report = parse_json_file(dir / "report.json");
    CHECK(report["dimension"] == 123);
    CHECK(report["resolution"]["degenerate"] == true);
    CHECK(std::abs(report["deff"].get<double>() - 6.7546031049544029) < 1e-9);
    CHECK(std::abs(report["energy_expectation"].get<double>()) < 1e-10);

    const std::string ls = csv_body(dir / "loschmidt.csv");
    CHECK(ls.rfind("t,loschmidt\n", 0) == 0);
    CHECK(line_count(ls) == 2002); // header + default time grid
    CHECK(csv_body(dir / "overlaps.csv").rfind("energy,weight\n", 0) == 0);
}

TEST_CASE("quench at repulsive detuning starts from the empty state") {
    const fs::path dir = fresh_dir("quench_empty");
    const RunResult r = run("quench --L 12 --delta 1 --output-dir " + dir.string(), dir);
    REQUIRE(r.code == 0);
    const json report = parse_json_file(dir / "report.json");
    CHECK(report["resolution"]["degenerate"] == false);
    CHECK(std::abs(report["deff"].get<double>() - 13.813474426146382) < 1e-9);
}

TEST_CASE("observable series are written on request") {
    const fs::path dir = fresh_dir("quench_obs");
    const RunResult r = run(
        "quench --L 8 --delta -1 --observables z1,y2 --tmax 1 --dt 0.5 --output-dir " +
            dir.string(),
        dir);
    REQUIRE(r.code == 0);
    const std::string z1 = csv_body(dir / "obs_z1.csv");
    CHECK(z1.rfind("t,sigma_z1\n", 0) == 0);
    CHECK(line_count(z1) == 4); // header + t = 0, 0.5, 1
    CHECK(fs::exists(dir / "obs_y2.csv"));
    // site 1 is down in the selected state: the first sample is -1
    CHECK(z1.find("\n0,-1") != std::string::npos);
}

TEST_CASE("unresolvable ground states abort with a diagnostic") {
    const fs::path dir = fresh_dir("abort");
    const RunResult r = run("groundstate --L 8 --delta 0 --output-dir " + dir.string(), dir);
    CHECK(r.code == 3);
    const json diag = json::parse(r.err);
    CHECK(diag["error"] == "resolution");
    CHECK(diag["message"].is_string());
}

TEST_CASE("dense-route requests over the limit are refused") {
    const fs::path dir = fresh_dir("limit");
    const RunResult r =
        run("spectrum --L 16 --route full --dense-limit 100 --output-dir " + dir.string(), dir);
    CHECK(r.code == 4);
}

TEST_CASE("groundstate report carries the selection diagnostics") {
    const fs::path dir = fresh_dir("ground");
    const RunResult r = run("groundstate --L 8 --delta -1 --output-dir " + dir.string(), dir);
    REQUIRE(r.code == 0);
    const json rep = parse_json_file(dir / "groundstate.json");
    CHECK(rep["resolution"]["degenerate"] == true);
    CHECK(rep["resolution"]["parities"] == json({1, -1}));
    CHECK(std::abs(rep["resolution"]["off_diagonal"].get<double>() + 8.0) < 1e-10);
    CHECK(rep["resolution"]["pi_deviation"].get<double>() < 1e-8);
}

TEST_CASE("spectrum command writes the merged level list") {
    const fs::path dir = fresh_dir("spectrum");
    const RunResult r = run("spectrum --L 8 --output-dir " + dir.string(), dir);
    REQUIRE(r.code == 0);
    const std::string body = csv_body(dir / "spectrum.csv");
    CHECK(body.rfind("sector,index,eigenvalue\n", 0) == 0);
    CHECK(line_count(body) == 48); // header + one row per level
}

TEST_CASE("scan outputs are byte-identical across reruns and thread counts") {
    const fs::path d1 = fresh_dir("scan1");
    const fs::path d2 = fresh_dir("scan2");
    const fs::path d3 = fresh_dir("scan3");
    const std::string args = "scan --L 8 --step 0.5 ";
    REQUIRE(run(args + "--output-dir " + d1.string(), d1).code == 0);
    REQUIRE(run(args + "--output-dir " + d2.string(), d2).code == 0);
    REQUIRE(run(args + "--threads 4 --output-dir " + d3.string(), d3).code == 0);
    for (const char* name : {"deff_map.csv", "delta_map.csv", "failures.csv"}) {
        CHECK(csv_body(d1 / name) == csv_body(d2 / name));
        CHECK(csv_body(d1 / name) == csv_body(d3 / name));
    }
    const json opt = parse_json_file(d1 / "optimum.json");
    CHECK(opt["points"] == 25);
    CHECK(opt["deff_min"].get<double>() > 0.0);
    CHECK(opt.contains("failed_points"));
    CHECK(opt.contains("gap_at_optimum"));
}

TEST_CASE("command line overrides the config file") {
    const fs::path dir = fresh_dir("config");
    {
        std::ofstream cfg(dir / "run.toml");
        cfg << "L = 8\ndelta = 1\n";
    }
    const RunResult file_only =
        run("quench --config " + (dir / "run.toml").string() + " --output-dir " + dir.string(),
            dir);
    REQUIRE(file_only.code == 0);
    const double deff_file = parse_json_file(dir / "report.json")["deff"].get<double>();

    const RunResult overridden = run("quench --config " + (dir / "run.toml").string() +
                                         " --delta -1 --output-dir " + dir.string(),
                                     dir);
    REQUIRE(overridden.code == 0);
    const double deff_cli = parse_json_file(dir / "report.json")["deff"].get<double>();

    const fs::path plain_dir = fresh_dir("config_plain");
    REQUIRE(run("quench --L 8 --delta -1 --output-dir " + plain_dir.string(), plain_dir).code ==
            0);
    const double deff_plain = parse_json_file(plain_dir / "report.json")["deff"].get<double>();

    CHECK(deff_cli == deff_plain); // flag wins over the file
    CHECK(deff_file != deff_cli);  // and the file value was actually in effect before
}

TEST_CASE("output directory: flag beats environment") {
    const fs::path env_dir = fresh_dir("env_dir");
    const fs::path flag_dir = fresh_dir("flag_dir");
    const RunResult by_env =
        run("basis --L 4 --dump", env_dir, "PXP_OUTPUT_DIR=" + env_dir.string());
    CHECK(by_env.code == 0);
    CHECK(fs::exists(env_dir / "basis.csv"));

    const RunResult by_flag = run("basis --L 4 --dump --output-dir " + flag_dir.string(),
                                  env_dir, "PXP_OUTPUT_DIR=" + env_dir.string());
    CHECK(by_flag.code == 0);
    CHECK(fs::exists(flag_dir / "basis.csv"));
}

TEST_CASE("version and help exit cleanly") {
    const fs::path dir = fresh_dir("meta");
    CHECK(run("--version", dir).code == 0);
    const RunResult help = run("--help", dir);
    CHECK(help.code == 0);
    CHECK(help.out.find("scan") != std::string::npos);
}
