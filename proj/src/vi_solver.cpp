#include "fols/vi_solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <set>

namespace fols {

SetKind parse_set(std::string_view name)
{
    if (name == "Ks" || name == "ks" || name == "s") return SetKind::Ks;
    if (name == "K0" || name == "k0" || name == "0") return SetKind::K0;
    if (name == "K1" || name == "k1" || name == "1") return SetKind::K1;
    throw std::invalid_argument("unknown convex set: " + std::string(name));
}

std::string_view set_name(SetKind kind)
{
    switch (kind) {
    case SetKind::Ks: return "Ks";
    case SetKind::K0: return "K0";
    case SetKind::K1: return "K1";
    }
    return "?";
}

ConfigCheck validate_config(Form form, SetKind set, const ObstacleTraits& traits)
{
    auto reject = [&](std::string why) {
        return ConfigCheck{false, "form " + std::string(form_name(form)) + " with set " + std::string(set_name(set)) +
                                      ": " + std::move(why)};
    };
    switch (form) {
    case Form::A:
        if (set != SetKind::Ks) return reject("not admissible; form A pairs only with Ks");
        if (!traits.continuous) return reject("nodal constraints need a continuous obstacle");
        if (!traits.vanishes_on_boundary) return reject("form A needs an obstacle vanishing on the boundary");
        return {};
    case Form::B:
        if (set == SetKind::K1) return reject("not admissible; form B pairs only with K0 or Ks");
        if (!traits.continuous) return reject("nodal constraints need a continuous obstacle");
        if (!traits.nonpositive_on_boundary && !traits.vanishes_on_boundary)
            return reject("form B needs an obstacle with g <= 0 on the boundary");
        return {};
    case Form::C:
        if (set == SetKind::K0) return reject("not admissible; form C pairs only with K1 or Ks");
        if (!traits.vanishes_on_boundary) return reject("form C needs an obstacle vanishing on the boundary");
        if (set == SetKind::Ks && !traits.continuous) return reject("nodal constraints need a continuous obstacle");
        return {};
    }
    return reject("unknown form");
}

ConstraintSet build_constraints(const Mesh& mesh, const DofMap& dofs, SetKind kind, const ScalarField& g)
{
    ConstraintSet set;
    set.kind = kind;
    if (kind != SetKind::K1) {
        for (int i = 0; i < dofs.n_u(); ++i) {
            set.dofs.push_back(i);
            set.bounds.push_back(g(mesh.vertex(dofs.u_vertices()[static_cast<std::size_t>(i)])));
        }
    }
    if (kind != SetKind::K0) {
        for (int t = 0; t < dofs.n_lambda(); ++t) {
            set.dofs.push_back(dofs.lambda_dof(t));
            set.bounds.push_back(0.0);
        }
    }
    return set;
}

double kkt_residual(const SparseMatrix& matrix, const Eigen::VectorXd& load, const ConstraintSet& constraints,
                    const Eigen::VectorXd& x)
{
    const Eigen::VectorXd r = matrix * x - load;
    std::vector<bool> constrained(static_cast<std::size_t>(x.size()), false);
    double res = 0.0;
    for (std::size_t k = 0; k < constraints.size(); ++k) {
        const int i = constraints.dofs[k];
        constrained[static_cast<std::size_t>(i)] = true;
        res = std::max(res, std::abs(std::min(r[i], x[i] - constraints.bounds[k])));
    }
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (!constrained[static_cast<std::size_t>(i)]) res = std::max(res, std::abs(r[i]));
    return res;
}

namespace {

// Solves the equality system with x fixed to the bounds on the active set.
Eigen::VectorXd solve_reduced(const SparseOperator& op, const Eigen::VectorXd& load,
                              const std::vector<double>& fixed_value, const std::vector<bool>& fixed)
{
    const Eigen::Index n = op.dimension();
    std::vector<int> reduced_index(static_cast<std::size_t>(n), -1);
    std::vector<int> free_dofs;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (fixed[static_cast<std::size_t>(i)]) continue;
        reduced_index[static_cast<std::size_t>(i)] = static_cast<int>(free_dofs.size());
        free_dofs.push_back(static_cast<int>(i));
    }

    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i)
        if (fixed[static_cast<std::size_t>(i)]) x[i] = fixed_value[static_cast<std::size_t>(i)];
    if (free_dofs.empty()) return x;

    const auto m = static_cast<Eigen::Index>(free_dofs.size());
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(op.matrix.nonZeros()));
    Eigen::VectorXd rhs(m);
    for (Eigen::Index r = 0; r < m; ++r) {
        const int row = free_dofs[static_cast<std::size_t>(r)];
        double b = load[row];
        for (SparseMatrix::InnerIterator it(op.matrix, row); it; ++it) {
            const auto col = static_cast<std::size_t>(it.col());
            if (fixed[col])
                b -= it.value() * fixed_value[col];
            else
                triplets.emplace_back(static_cast<int>(r), reduced_index[col], it.value());
        }
        rhs[r] = b;
    }
    Eigen::SparseMatrix<double> reduced(m, m);
    reduced.setFromTriplets(triplets.begin(), triplets.end());

    Eigen::VectorXd xr;
    if (op.symmetric) {
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(reduced);
        if (ldlt.info() != Eigen::Success) throw SingularSubsystem("reduced LDLT factorization failed");
        xr = ldlt.solve(rhs);
    } else {
        Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
        lu.analyzePattern(reduced);
        lu.factorize(reduced);
        if (lu.info() != Eigen::Success) throw SingularSubsystem("reduced LU factorization failed: " + lu.lastErrorMessage());
        xr = lu.solve(rhs);
    }
    if (!xr.allFinite()) throw SingularSubsystem("reduced solve produced non-finite values");
    for (Eigen::Index r = 0; r < m; ++r) x[free_dofs[static_cast<std::size_t>(r)]] = xr[r];
    return x;
}

} // namespace

VISolveReport solve_vi(const SparseOperator& op, const Eigen::VectorXd& load, const ConstraintSet& constraints,
                       const SolverOptions& options)
{
    const Eigen::Index n = op.dimension();
    if (op.matrix.cols() != n || load.size() != n)
        throw std::invalid_argument("solve_vi: operator and load dimensions differ");
    if (constraints.dofs.size() != constraints.bounds.size())
        throw std::invalid_argument("solve_vi: malformed constraint set");

    const std::size_t nc = constraints.size();
    const double tolerance = options.kkt_tolerance * (1.0 + load.lpNorm<Eigen::Infinity>());

    std::vector<double> fixed_value(static_cast<std::size_t>(n), 0.0);
    for (std::size_t k = 0; k < nc; ++k)
        fixed_value[static_cast<std::size_t>(constraints.dofs[k])] = constraints.bounds[k];

    std::vector<bool> active(nc, false);
    std::set<std::vector<bool>> visited;
    VISolveReport report;

    for (int iteration = 1; iteration <= options.max_iterations; ++iteration) {
        visited.insert(active);
        std::vector<bool> fixed(static_cast<std::size_t>(n), false);
        for (std::size_t k = 0; k < nc; ++k)
            if (active[k]) fixed[static_cast<std::size_t>(constraints.dofs[k])] = true;

        Eigen::VectorXd x = solve_reduced(op, load, fixed_value, fixed);
        const Eigen::VectorXd r = op.matrix * x - load;

        // Multipliers vanish on the inactive set; complementarity function
        // mu_i + c (c_i - x_i) decides the next active set.
        Eigen::VectorXd mu(static_cast<Eigen::Index>(nc));
        std::vector<bool> next(nc, false);
        int active_count = 0;
        for (std::size_t k = 0; k < nc; ++k) {
            const int i = constraints.dofs[k];
            mu[static_cast<Eigen::Index>(k)] = active[k] ? r[i] : 0.0;
            next[k] = mu[static_cast<Eigen::Index>(k)] + options.c_pdas * (constraints.bounds[k] - x[i]) > 0.0;
            active_count += next[k] ? 1 : 0;
        }

        const double residual = kkt_residual(op.matrix, load, constraints, x);
        if (next == active) {
            if (residual > tolerance)
                throw NonConvergence("active set settled but KKT residual " + std::to_string(residual) +
                                     " exceeds tolerance " + std::to_string(tolerance));
            report.solution = std::move(x);
            report.multipliers = std::move(mu);
            report.iterations = iteration;
            report.active_set_size = active_count;
            report.kkt_residual = residual;
            return report;
        }
        if (visited.count(next) != 0)
            throw NonConvergence("active-set iteration cycled after " + std::to_string(iteration) + " iterations");
        active = std::move(next);
    }
    throw NonConvergence("active-set iteration did not converge in " + std::to_string(options.max_iterations) +
                         " iterations");
}

} // namespace fols
