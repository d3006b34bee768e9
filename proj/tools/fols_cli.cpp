// Command-line driver: runs one convergence study and writes the level table as CSV,
// or fits a rate to a column of an existing table.

#include "fols/adaptivity.hpp"
#include "fols/problems.hpp"
#include "fols/report.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

constexpr const char* kAdmissible =
    "admissible (form, set) pairs: (A,Ks) needs g in H^1_0 and continuous; (B,K0) and (B,Ks) need g in H^1, "
    "continuous, g <= 0 on the boundary; (C,K1) needs g in H^1_0; (C,Ks) needs g in H^1_0 and continuous";

struct RunOptions {
    std::string example = "smooth";
    std::string form = "A";
    std::string set = "Ks";
    double beta = 0.0;
    double theta = 0.25;
    std::string mode = "uniform";
    int max_dofs = 200000;
    int max_levels = 1000;
    int initial_n = 0;
    int max_iterations = 100;
    std::string output;
    std::string dump_mesh;
    std::string dump_prefix = "mesh";
};

int threads_from_environment()
{
    if (const char* env = std::getenv("FOLS_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

std::set<int> parse_levels(const std::string& spec)
{
    std::set<int> levels;
    std::stringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        if (item == "all") return {-1};
        levels.insert(std::stoi(item));
    }
    return levels;
}

int run(const RunOptions& opt)
{
    fols::ProblemSpec problem;
    fols::AdaptiveConfig config;
    try {
        problem = fols::example_by_name(opt.example);
        config.form = fols::parse_form(opt.form);
        config.set = fols::parse_set(opt.set);
        if (opt.mode == "uniform")
            config.mode = fols::RefinementMode::Uniform;
        else if (opt.mode == "adaptive")
            config.mode = fols::RefinementMode::Adaptive;
        else
            throw std::invalid_argument("mode must be uniform or adaptive");
        if (!(opt.theta > 0.0 && opt.theta <= 1.0)) throw std::invalid_argument("theta must lie in (0, 1]");
        if (opt.beta < 0.0) throw std::invalid_argument("beta must be positive");
        if (opt.max_iterations < 1) throw std::invalid_argument("max-iterations must be positive");
    } catch (const std::exception& e) {
        std::cerr << "fols: " << e.what() << '\n';
        return kExitConfig;
    }
    if (const auto check = fols::validate_config(config.form, config.set, problem.traits); !check) {
        std::cerr << "fols: rejected configuration: " << check.reason << "\n  " << kAdmissible << '\n';
        return kExitConfig;
    }

    if (opt.beta > 0.0) config.beta = opt.beta;
    config.theta = opt.theta;
    config.max_dofs = opt.max_dofs;
    config.max_levels = opt.max_levels;
    config.initial_subdivisions = opt.initial_n;
    config.solver.max_iterations = opt.max_iterations;
    config.threads = threads_from_environment();

    const auto dump_levels = parse_levels(opt.dump_mesh);
    if (!dump_levels.empty()) {
        config.observer = [&](int level, const fols::Mesh& mesh, const fols::FirstOrderSolution&) {
            if (!dump_levels.contains(-1) && !dump_levels.contains(level)) return;
            std::ofstream out(opt.dump_prefix + "_" + std::to_string(level) + ".txt");
            fols::write_mesh(out, mesh);
        };
    }

    const auto result = fols::run_adaptive(problem, config);
    const bool with_errors = problem.exact.has_value();
    if (opt.output.empty()) {
        fols::write_csv(std::cout, result.levels, with_errors);
    } else {
        std::ofstream out(opt.output);
        if (!out) {
            std::cerr << "fols: cannot open " << opt.output << '\n';
            return kExitConfig;
        }
        fols::write_csv(out, result.levels, with_errors);
    }
    if (result.failure) {
        std::cerr << "fols: solver failure after " << result.levels.size() << " levels: " << *result.failure << '\n';
        return kExitSolver;
    }
    return 0;
}

int rates(const std::string& path, const std::string& column, int tail)
{
    try {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open " + path);
        const auto table = fols::read_csv(in);
        std::cout << fols::table_rate(table, column, tail) << '\n';
    } catch (const std::exception& e) {
        std::cerr << "fols: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"First-order least-squares solver for the obstacle problem"};
    app.require_subcommand(1);

    RunOptions opt;
    auto* run_cmd = app.add_subcommand("run", "Run a uniform or adaptive convergence study and write CSV");
    run_cmd->add_option("--example", opt.example, "smooth | lshape | pyramid")->capture_default_str();
    run_cmd->add_option("--form", opt.form, "A | B | C")->capture_default_str();
    run_cmd->add_option("--set", opt.set, "Ks | K0 | K1")->capture_default_str();
    run_cmd->add_option("--beta", opt.beta, "weight of the divergence residual (default: problem choice)");
    run_cmd->add_option("--theta", opt.theta, "bulk marking parameter")->capture_default_str();
    run_cmd->add_option("--mode", opt.mode, "uniform | adaptive")->capture_default_str();
    run_cmd->add_option("--max-dofs", opt.max_dofs, "stop before a mesh exceeds this many dofs")->capture_default_str();
    run_cmd->add_option("--max-levels", opt.max_levels, "maximum number of levels")->capture_default_str();
    run_cmd->add_option("--initial-n", opt.initial_n, "subdivisions of the initial mesh (default: problem choice)");
    run_cmd->add_option("--max-iterations", opt.max_iterations, "active-set iteration limit per solve")
        ->capture_default_str();
    run_cmd->add_option("--output,-o", opt.output, "CSV output path (default: stdout)");
    run_cmd->add_option("--dump-mesh", opt.dump_mesh, "comma-separated levels (or 'all') whose meshes are written");
    run_cmd->add_option("--dump-prefix", opt.dump_prefix, "file prefix for mesh dumps")->capture_default_str();

    std::string csv_path, column;
    int tail = 3;
    auto* rates_cmd = app.add_subcommand("rates", "Fit the decay rate of a CSV column against nE");
    rates_cmd->add_option("csv", csv_path, "convergence table")->required();
    rates_cmd->add_option("column", column, "column name")->required();
    rates_cmd->add_option("--tail", tail, "number of trailing rows to fit")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    if (*run_cmd) return run(opt);
    return rates(csv_path, column, tail);
}
