#include "fols/adaptivity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fols {

std::vector<int> doerfler_mark(const std::vector<double>& contributions, double theta)
{
    if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("doerfler_mark: theta must lie in (0, 1]");
    std::vector<int> order(contributions.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return contributions[static_cast<std::size_t>(a)] > contributions[static_cast<std::size_t>(b)];
    });

    // Summing in the sorted order keeps the full-bulk case exact.
    double total = 0.0;
    for (int t : order) total += contributions[static_cast<std::size_t>(t)];
    const double goal = theta * total;

    std::vector<int> marked;
    double sum = 0.0;
    for (int t : order) {
        if (sum >= goal && !marked.empty()) break;
        if (contributions[static_cast<std::size_t>(t)] <= 0.0) break;
        marked.push_back(t);
        sum += contributions[static_cast<std::size_t>(t)];
    }
    std::sort(marked.begin(), marked.end());
    return marked;
}

std::vector<int> doerfler_mark(const std::vector<LocalEstimate>& local, double theta)
{
    std::vector<double> contributions(local.size());
    std::transform(local.begin(), local.end(), contributions.begin(), [](const LocalEstimate& e) { return e.total(); });
    return doerfler_mark(contributions, theta);
}

LevelRecord solve_level(const ProblemSpec& problem, const std::shared_ptr<const Mesh>& mesh,
                        const AdaptiveConfig& config, FirstOrderSolution* solution_out,
                        std::vector<LocalEstimate>* local_out)
{
    const DofMap dofs(*mesh);
    const double beta = config.beta.value_or(problem.beta());
    const SparseOperator op = assemble_form(*mesh, dofs, {config.form, beta});
    const Eigen::VectorXd load = assemble_load(*mesh, dofs, beta, problem.f, problem.g, functional_of(config.form));
    const ConstraintSet constraints = build_constraints(*mesh, dofs, config.set, problem.g);
    VISolveReport report = solve_vi(op, load, constraints, config.solver);

    FirstOrderSolution solution(mesh, std::move(report.solution));
    const auto local = local_estimates(solution, problem.f, problem.g, problem.grad_g, config.threads);
    const EstimateSummary summary = summarize(local);

    LevelRecord rec;
    rec.nE = mesh->n_elements();
    rec.nDof = dofs.n_total();
    rec.est = summary.est;
    rec.eta = summary.eta;
    rec.estContact = summary.rho;
    rec.oscF = summary.osc;
    rec.iters = report.iterations;
    rec.kkt_residual = report.kkt_residual;
    rec.load_inf = load.lpNorm<Eigen::Infinity>();
    rec.residual2 = residual_norm_squared(solution, problem.f);
    rec.negative_multiplier = summary.negative_multiplier;
    if (problem.traits.vanishes_on_boundary)
        rec.functional_J = evaluate_J(solution, problem.f, problem.g, problem.traits);

    if (problem.exact) {
        const ErrorReport err = error_U(solution, *problem.exact, problem.f);
        rec.errNormU = err.err_U;
        rec.errNormV = err.err_V;
        rec.errU = err.grad_u;
        rec.errSigma = err.sigma;
        rec.errDivSigmaLambda = err.div_sigma_lambda;
    }
    if (local_out) *local_out = local;
    if (solution_out) *solution_out = std::move(solution);
    return rec;
}

AdaptiveResult run_adaptive(const ProblemSpec& problem, const AdaptiveConfig& config)
{
    if (const auto check = validate_config(config.form, config.set, problem.traits); !check)
        throw std::invalid_argument(check.reason);
    if (!(config.theta > 0.0 && config.theta <= 1.0)) throw std::invalid_argument("theta must lie in (0, 1]");

    const int n = config.initial_subdivisions > 0 ? config.initial_subdivisions : problem.initial_subdivisions;
    auto mesh = std::make_shared<const Mesh>(create_structured(problem.domain, n));

    AdaptiveResult result;
    for (int level = 0; level < config.max_levels; ++level) {
        if (level > 0 && DofMap(*mesh).n_total() > config.max_dofs) break;

        FirstOrderSolution solution;
        std::vector<LocalEstimate> local;
        try {
            result.levels.push_back(solve_level(problem, mesh, config, &solution, &local));
        } catch (const NonConvergence& e) {
            result.failure = e.what();
            break;
        } catch (const SingularSubsystem& e) {
            result.failure = e.what();
            break;
        }
        if (config.observer) config.observer(level, *mesh, solution);

        if (config.mode == RefinementMode::Uniform)
            mesh = std::make_shared<const Mesh>(refine_uniform(*mesh));
        else {
            const auto marked = doerfler_mark(local, config.theta);
            if (marked.empty()) break; // zero estimator: nothing left to refine
            mesh = std::make_shared<const Mesh>(refine_nvb(*mesh, marked));
        }
    }
    return result;
}

double fitted_rate(const std::vector<double>& nE, const std::vector<double>& values, int tail)
{
    if (nE.size() != values.size()) throw std::invalid_argument("fitted_rate: column lengths differ");
    if (tail < 2) throw std::invalid_argument("fitted_rate: need at least two points");
    if (static_cast<int>(nE.size()) < tail) throw std::invalid_argument("fitted_rate: fewer rows than tail");

    const std::size_t start = nE.size() - static_cast<std::size_t>(tail);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = start; i < nE.size(); ++i) {
        if (!(nE[i] > 0.0) || !(values[i] > 0.0))
            throw std::invalid_argument("fitted_rate: values must be positive");
        mx += std::log(nE[i]);
        my += std::log(values[i]);
    }
    mx /= tail;
    my /= tail;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = start; i < nE.size(); ++i) {
        const double dx = std::log(nE[i]) - mx;
        sxy += dx * (std::log(values[i]) - my);
        sxx += dx * dx;
    }
    if (sxx == 0.0) throw std::invalid_argument("fitted_rate: nE does not vary");
    return -sxy / sxx;
}

} // namespace fols
