#pragma once

#include "fols/assembly.hpp"
#include "fols/estimator.hpp"
#include "fols/problems.hpp"
#include "fols/vi_solver.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fols {

/// Metrics of one SOLVE-ESTIMATE step.
struct LevelRecord {
    int nE = 0;
    int nDof = 0;
    double est = 0.0;
    double eta = 0.0;
    double estContact = 0.0;
    double oscF = 0.0;
    std::optional<double> errNormU;
    std::optional<double> errNormV;
    std::optional<double> errU;
    std::optional<double> errSigma;
    std::optional<double> errDivSigmaLambda;
    int iters = 0;

    // Diagnostics not written to the convergence table.
    double kkt_residual = 0.0;
    double load_inf = 0.0;
    double residual2 = 0.0;                 ///< ||div s_h + l_h + f||^2 + ||grad u_h - s_h||^2
    std::optional<double> functional_J;     ///< only for obstacles vanishing on the boundary
    bool negative_multiplier = false;
};

/// Minimal prefix of elements, sorted by contribution (descending, ties by id),
/// whose contributions reach theta * total.
std::vector<int> doerfler_mark(const std::vector<LocalEstimate>& local, double theta);
std::vector<int> doerfler_mark(const std::vector<double>& contributions, double theta);

enum class RefinementMode { Uniform, Adaptive };

struct AdaptiveConfig {
    Form form = Form::A;
    SetKind set = SetKind::Ks;
    std::optional<double> beta;     ///< defaults to the problem's choice
    double theta = 0.25;
    RefinementMode mode = RefinementMode::Adaptive;
    int max_dofs = 200000;
    int max_levels = 1000;
    int initial_subdivisions = 0;   ///< 0: problem default
    SolverOptions solver;
    int threads = 1;
    /// Called after each level with the level index, mesh and discrete solution.
    std::function<void(int, const Mesh&, const FirstOrderSolution&)> observer;
};

struct AdaptiveResult {
    std::vector<LevelRecord> levels;
    std::optional<std::string> failure; ///< solver failure that stopped the run
};

/// SOLVE -> ESTIMATE -> MARK -> REFINE until the dof budget or level count is hit.
/// Uniform mode replaces marking by a split of every element into four.
/// Throws std::invalid_argument if the configuration is not admissible.
AdaptiveResult run_adaptive(const ProblemSpec& problem, const AdaptiveConfig& config);

/// Solve and estimate on a fixed mesh.
LevelRecord solve_level(const ProblemSpec& problem, const std::shared_ptr<const Mesh>& mesh,
                        const AdaptiveConfig& config, FirstOrderSolution* solution_out = nullptr,
                        std::vector<LocalEstimate>* local_out = nullptr);

/// Least-squares slope of log(value) against log(nE) over the last `tail`
/// points, sign-flipped so that decaying quantities give a positive rate.
double fitted_rate(const std::vector<double>& nE, const std::vector<double>& values, int tail);

} // namespace fols
