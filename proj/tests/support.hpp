#pragma once

#include "fols/mesh.hpp"
#include "fols/spaces.hpp"
#include "fols/vi_solver.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <random>

namespace fols::testing {

inline Mesh reference_triangle(double scale = 1.0)
{
    return Mesh({Point(0, 0), Point(scale, 0), Point(0, scale)}, {{0, 1, 2}}, {0});
}

inline std::shared_ptr<const Mesh> shared(Mesh mesh) { return std::make_shared<const Mesh>(std::move(mesh)); }

/// Barycentric coordinates of x with respect to element t.
inline Eigen::Vector3d barycentric(const Mesh& mesh, int t, const Point& x)
{
    const auto& tri = mesh.triangle(t);
    const Point a = mesh.vertex(tri[0]), b = mesh.vertex(tri[1]), c = mesh.vertex(tri[2]);
    Eigen::Matrix2d m;
    m.col(0) = b - a;
    m.col(1) = c - a;
    const Eigen::Vector2d st = m.lu().solve(x - a);
    return {1.0 - st.x() - st.y(), st.x(), st.y()};
}

/// First element containing x (with a small tolerance), if any.
inline std::optional<int> locate(const Mesh& mesh, const Point& x)
{
    for (int t = 0; t < mesh.n_elements(); ++t)
        if (barycentric(mesh, t, x).minCoeff() >= -1e-12) return t;
    return std::nullopt;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

inline Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937& rng)
{
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = d(rng);
    return v;
}

// Every active set: fix the active dofs at their bounds, solve for the rest,
// keep candidates that are primal and dual feasible.
inline std::vector<Eigen::VectorXd> enumerate_lcp(const Eigen::MatrixXd& a, const Eigen::VectorXd& load,
                                                  const ConstraintSet& constraints)
{
    const int n = static_cast<int>(a.rows());
    const int m = static_cast<int>(constraints.size());
    std::vector<Eigen::VectorXd> feasible;
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        std::vector<bool> fixed(static_cast<std::size_t>(n), false);
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
        for (int k = 0; k < m; ++k)
            if (mask & (1u << k)) {
                fixed[static_cast<std::size_t>(constraints.dofs[static_cast<std::size_t>(k)])] = true;
                x[constraints.dofs[static_cast<std::size_t>(k)]] = constraints.bounds[static_cast<std::size_t>(k)];
            }
        std::vector<int> free;
        for (int i = 0; i < n; ++i)
            if (!fixed[static_cast<std::size_t>(i)]) free.push_back(i);
        const int nf = static_cast<int>(free.size());
        Eigen::MatrixXd aff(nf, nf);
        Eigen::VectorXd rhs(nf);
        for (int i = 0; i < nf; ++i) {
            rhs[i] = load[free[static_cast<std::size_t>(i)]] - a.row(free[static_cast<std::size_t>(i)]).dot(x);
            for (int j = 0; j < nf; ++j) aff(i, j) = a(free[static_cast<std::size_t>(i)], free[static_cast<std::size_t>(j)]);
        }
        const Eigen::VectorXd xf = aff.fullPivLu().solve(rhs);
        for (int i = 0; i < nf; ++i) x[free[static_cast<std::size_t>(i)]] = xf[i];
        const Eigen::VectorXd r = a * x - load;
        bool ok = true;
        for (int k = 0; k < m && ok; ++k) {
            const int i = constraints.dofs[static_cast<std::size_t>(k)];
            const double c = constraints.bounds[static_cast<std::size_t>(k)];
            if (mask & (1u << k))
                ok = r[i] >= -1e-11;
            else
                ok = x[i] >= c - 1e-11;
        }
        if (ok) feasible.push_back(x);
    }
    return feasible;
}

} // namespace fols::testing
