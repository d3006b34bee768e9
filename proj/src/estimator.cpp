#include "fols/estimator.hpp"

#include "fols/quadrature.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace fols {

namespace {

LocalEstimate estimate_element(const FirstOrderSolution& solution, int t, const ScalarField& f, const ScalarField& g,
                               const VectorField& grad_g)
{
    const LocalFields local(*solution.mesh, solution.dofs, solution.coefficients, t);
    const double area = local.geometry().area;
    const auto data_rule = quadrature::data();

    std::array<double, 7> f_values{};
    double f_mean = 0.0;
    for (std::size_t q = 0; q < data_rule.size(); ++q) {
        f_values[q] = f(local.point(data_rule[q].barycentric));
        f_mean += data_rule[q].weight * f_values[q];
    }

    LocalEstimate est;
    const double residual = local.div_sigma() + local.lambda() + f_mean;
    est.eta2_div = area * residual * residual;
    for (const auto& q : quadrature::discrete()) {
        const FieldValues v = local.at(q.barycentric);
        est.eta2_grad += q.weight * area * (v.grad_u - v.sigma).squaredNorm();
    }

    const double lambda = local.lambda();
    est.negative_multiplier = lambda < 0.0;
    double positive_gap = 0.0;
    for (std::size_t q = 0; q < data_rule.size(); ++q) {
        const auto& qp = data_rule[q];
        const Point x = local.point(qp.barycentric);
        const FieldValues v = local.at(qp.barycentric);
        const double gap = v.u - g(x);
        const double w = qp.weight * area;
        positive_gap += w * std::max(gap, 0.0);
        if (gap < 0.0) est.rho2_penetration += w * (grad_g(x) - v.grad_u).squaredNorm();
        const double dev = f_values[q] - f_mean;
        est.osc2 += w * dev * dev;
    }
    est.rho2_contact = std::max(lambda, 0.0) * positive_gap;
    return est;
}

} // namespace

std::vector<LocalEstimate> local_estimates(const FirstOrderSolution& solution, const ScalarField& f,
                                           const ScalarField& g, const VectorField& grad_g, int threads)
{
    const int nt = solution.mesh->n_elements();
    std::vector<LocalEstimate> out(static_cast<std::size_t>(nt));
    auto work = [&](int begin, int end) {
        for (int t = begin; t < end; ++t) out[static_cast<std::size_t>(t)] = estimate_element(solution, t, f, g, grad_g);
    };

    threads = std::clamp(threads, 1, std::max(1, nt / 256));
    if (threads == 1) {
        work(0, nt);
        return out;
    }
    // Each element writes only its own slot, so the result does not depend on scheduling.
    std::vector<std::jthread> pool;
    const int chunk = (nt + threads - 1) / threads;
    for (int begin = 0; begin < nt; begin += chunk) pool.emplace_back(work, begin, std::min(nt, begin + chunk));
    return out;
}

EstimateSummary summarize(const std::vector<LocalEstimate>& local)
{
    double eta2 = 0.0, rho2 = 0.0, osc2 = 0.0;
    EstimateSummary s;
    for (const auto& e : local) {
        eta2 += e.eta2_div + e.eta2_grad;
        rho2 += e.rho2_contact + e.rho2_penetration;
        osc2 += e.osc2;
        s.negative_multiplier = s.negative_multiplier || e.negative_multiplier;
    }
    s.eta = std::sqrt(eta2);
    s.rho = std::sqrt(rho2);
    s.osc = std::sqrt(osc2);
    s.est = std::sqrt(eta2 + rho2 + osc2);
    return s;
}

double residual_norm_squared(const FirstOrderSolution& solution, const ScalarField& f)
{
    const Mesh& mesh = *solution.mesh;
    double sum = 0.0;
    for (int t = 0; t < mesh.n_elements(); ++t) {
        const LocalFields local(mesh, solution.dofs, solution.coefficients, t);
        const double area = local.geometry().area;
        for (const auto& q : quadrature::data()) {
            const double r = local.div_sigma() + local.lambda() + f(local.point(q.barycentric));
            sum += q.weight * area * r * r;
        }
        for (const auto& q : quadrature::discrete()) {
            const FieldValues v = local.at(q.barycentric);
            sum += q.weight * area * (v.grad_u - v.sigma).squaredNorm();
        }
    }
    return sum;
}

std::array<double, 2> discrete_h_minus1_terms(const Mesh& mesh, const DofMap& dofs, const ElementScalarField& mu)
{
    double h_term = 0.0;
    Eigen::VectorXd load = Eigen::VectorXd::Zero(dofs.n_u());
    for (int t = 0; t < mesh.n_elements(); ++t) {
        const auto geo = element_geometry(mesh, t);
        const auto& tri = mesh.triangle(t);
        for (const auto& q : quadrature::data()) {
            const double value = mu(t, mesh.map_to_element(t, q.barycentric));
            const double w = q.weight * geo.area;
            h_term += w * geo.diameter * geo.diameter * value * value;
            for (std::size_t i = 0; i < 3; ++i) {
                const int di = dofs.u_dof(tri[i]);
                if (di >= 0) load[di] += w * value * q.barycentric[static_cast<Eigen::Index>(i)];
            }
        }
    }
    double lift = 0.0;
    if (dofs.n_u() > 0) {
        const Eigen::SparseMatrix<double> stiffness = p1_stiffness_matrix(mesh, dofs);
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(stiffness);
        if (solver.info() != Eigen::Success) throw std::logic_error("discrete Poisson lift: singular stiffness matrix");
        const Eigen::VectorXd z = solver.solve(load);
        lift = std::max(0.0, z.dot(load));
    }
    return {std::sqrt(h_term), std::sqrt(lift)};
}

double discrete_h_minus1_norm(const Mesh& mesh, const DofMap& dofs, const ElementScalarField& mu)
{
    const auto [h_term, lift] = discrete_h_minus1_terms(mesh, dofs, mu);
    return std::hypot(h_term, lift);
}

double discrete_h_minus1_norm(const Mesh& mesh, const DofMap& dofs, const ScalarField& mu)
{
    return discrete_h_minus1_norm(mesh, dofs, ElementScalarField([&mu](int, const Point& x) { return mu(x); }));
}

ErrorReport error_U(const FirstOrderSolution& solution, const ExactSolution& exact, const ScalarField& f)
{
    if (!exact.u || !exact.grad_u) throw std::invalid_argument("error_U: exact solution missing");
    const Mesh& mesh = *solution.mesh;
    double grad2 = 0.0, sigma2 = 0.0, div2 = 0.0;
    for (int t = 0; t < mesh.n_elements(); ++t) {
        const LocalFields local(mesh, solution.dofs, solution.coefficients, t);
        const double area = local.geometry().area;
        for (const auto& q : quadrature::data()) {
            const Point x = local.point(q.barycentric);
            const FieldValues v = local.at(q.barycentric);
            const Point grad = exact.grad_u(x);
            const double w = q.weight * area;
            grad2 += w * (grad - v.grad_u).squaredNorm();
            sigma2 += w * (grad - v.sigma).squaredNorm();
            const double r = v.div_sigma + v.lambda + f(x);
            div2 += w * r * r;
        }
    }
    ErrorReport report;
    report.grad_u = std::sqrt(grad2);
    report.sigma = std::sqrt(sigma2);
    report.div_sigma_lambda = std::sqrt(div2);
    report.err_U = std::sqrt(grad2 + sigma2 + div2);

    if (exact.lambda) {
        const auto lambda_h = solution.lambda();
        const double minus1 = discrete_h_minus1_norm(
            mesh, solution.dofs,
            ElementScalarField([&](int t, const Point& x) { return exact.lambda(x) - lambda_h[t]; }));
        report.lambda_minus1 = minus1;
        report.err_V = std::sqrt(grad2 + sigma2 + minus1 * minus1);
    }
    return report;
}

} // namespace fols
