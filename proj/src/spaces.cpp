#include "fols/spaces.hpp"

#include "fols/quadrature.hpp"

#include <Eigen/SparseCholesky>

#include <stdexcept>

namespace fols {

DofMap::DofMap(const Mesh& mesh)
    : n_sigma_(mesh.n_edges()), n_lambda_(mesh.n_elements())
{
    vertex_dof_.assign(static_cast<std::size_t>(mesh.n_vertices()), -1);
    for (int v = 0; v < mesh.n_vertices(); ++v) {
        if (mesh.boundary_vertex()[static_cast<std::size_t>(v)]) continue;
        vertex_dof_[static_cast<std::size_t>(v)] = n_u_++;
        dof_vertex_.push_back(v);
    }
}

FirstOrderSolution::FirstOrderSolution(std::shared_ptr<const Mesh> m, Eigen::VectorXd c)
    : mesh(std::move(m)), dofs(*mesh), coefficients(std::move(c))
{
    if (coefficients.size() != dofs.n_total())
        throw std::invalid_argument("coefficient vector does not match the dof layout");
}

Point rt_basis(const ElementGeometry& geo, const std::array<Point, 3>& p, int k, const Point& x)
{
    const auto kk = static_cast<std::size_t>(k);
    return (geo.edge_signs[kk] * geo.edge_lengths[kk] / (2.0 * geo.area)) * (x - p[kk]);
}

LocalFields::LocalFields(const Mesh& mesh, const DofMap& dofs, const Eigen::VectorXd& coefficients, int t)
    : geo_(element_geometry(mesh, t))
{
    if (t < 0 || t >= mesh.n_elements()) throw std::out_of_range("element id out of range");
    const auto& tri = mesh.triangle(t);
    const auto& edges = mesh.element_edges()[static_cast<std::size_t>(t)];
    for (std::size_t k = 0; k < 3; ++k) {
        p_[k] = mesh.vertex(tri[k]);
        const int dof = dofs.u_dof(tri[k]);
        u_[k] = dof >= 0 ? coefficients[dof] : 0.0;
        grad_u_ += u_[k] * geo_.barycentric_gradients[k];
        flux_[k] = geo_.edge_signs[k] * coefficients[dofs.sigma_dof(edges[k])];
        div_sigma_ += flux_[k] * geo_.edge_lengths[k] / geo_.area;
    }
    lambda_ = coefficients[dofs.lambda_dof(t)];
}

Point LocalFields::point(const Eigen::Vector3d& b) const
{
    return b[0] * p_[0] + b[1] * p_[1] + b[2] * p_[2];
}

FieldValues LocalFields::at(const Eigen::Vector3d& b) const
{
    FieldValues values;
    const Point x = point(b);
    values.u = b[0] * u_[0] + b[1] * u_[1] + b[2] * u_[2];
    values.grad_u = grad_u_;
    for (std::size_t k = 0; k < 3; ++k)
        values.sigma += flux_[k] * geo_.edge_lengths[k] / (2.0 * geo_.area) * (x - p_[k]);
    values.div_sigma = div_sigma_;
    values.lambda = lambda_;
    return values;
}

FieldValues evaluate(const FirstOrderSolution& solution, int t, const Eigen::Vector3d& barycentric)
{
    if (t < 0 || t >= solution.mesh->n_elements()) throw std::out_of_range("evaluate: invalid element id");
    return LocalFields(*solution.mesh, solution.dofs, solution.coefficients, t).at(barycentric);
}

Point edge_normal(const Mesh& mesh, int e)
{
    const auto& edge = mesh.edges()[static_cast<std::size_t>(e)];
    const Point t = (mesh.vertex(edge[1]) - mesh.vertex(edge[0])).normalized();
    return {t.y(), -t.x()};
}

Eigen::VectorXd nodal_interpolate(const Mesh& mesh, const DofMap& dofs, const ScalarField& v)
{
    Eigen::VectorXd out(dofs.n_u());
    for (int i = 0; i < dofs.n_u(); ++i) out[i] = v(mesh.vertex(dofs.u_vertices()[static_cast<std::size_t>(i)]));
    return out;
}

Eigen::VectorXd rt_interpolate(const Mesh& mesh, const VectorField& tau)
{
    Eigen::VectorXd out(mesh.n_edges());
    for (int e = 0; e < mesh.n_edges(); ++e) {
        const auto& edge = mesh.edges()[static_cast<std::size_t>(e)];
        const Point& a = mesh.vertex(edge[0]);
        const Point& b = mesh.vertex(edge[1]);
        const Point n = edge_normal(mesh, e);
        double mean = 0.0;
        for (const auto& q : quadrature::edge()) mean += q.weight * tau(a + q.s * (b - a)).dot(n);
        out[e] = mean;
    }
    return out;
}

Eigen::VectorXd project_p0(const Mesh& mesh, const ScalarField& mu)
{
    Eigen::VectorXd out(mesh.n_elements());
    for (int t = 0; t < mesh.n_elements(); ++t) {
        double mean = 0.0;
        for (const auto& q : quadrature::data()) mean += q.weight * mu(mesh.map_to_element(t, q.barycentric));
        out[t] = mean;
    }
    return out;
}

SparseMatrix p1_mass_matrix(const Mesh& mesh, const DofMap& dofs)
{
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(9 * static_cast<std::size_t>(mesh.n_elements()));
    for (int t = 0; t < mesh.n_elements(); ++t) {
        const double area = element_geometry(mesh, t).area;
        const auto& tri = mesh.triangle(t);
        for (std::size_t i = 0; i < 3; ++i) {
            const int di = dofs.u_dof(tri[i]);
            if (di < 0) continue;
            for (std::size_t j = 0; j < 3; ++j) {
                const int dj = dofs.u_dof(tri[j]);
                if (dj < 0) continue;
                triplets.emplace_back(di, dj, area * (i == j ? 1.0 / 6.0 : 1.0 / 12.0));
            }
        }
    }
    SparseMatrix m(dofs.n_u(), dofs.n_u());
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
}

SparseMatrix p1_stiffness_matrix(const Mesh& mesh, const DofMap& dofs)
{
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(9 * static_cast<std::size_t>(mesh.n_elements()));
    for (int t = 0; t < mesh.n_elements(); ++t) {
        const auto geo = element_geometry(mesh, t);
        const auto& tri = mesh.triangle(t);
        for (std::size_t i = 0; i < 3; ++i) {
            const int di = dofs.u_dof(tri[i]);
            if (di < 0) continue;
            for (std::size_t j = 0; j < 3; ++j) {
                const int dj = dofs.u_dof(tri[j]);
                if (dj < 0) continue;
                triplets.emplace_back(di, dj,
                                      geo.area * geo.barycentric_gradients[i].dot(geo.barycentric_gradients[j]));
            }
        }
    }
    SparseMatrix k(dofs.n_u(), dofs.n_u());
    k.setFromTriplets(triplets.begin(), triplets.end());
    return k;
}

Eigen::VectorXd p1_load(const Mesh& mesh, const DofMap& dofs, const ScalarField& mu)
{
    Eigen::VectorXd load = Eigen::VectorXd::Zero(dofs.n_u());
    for (int t = 0; t < mesh.n_elements(); ++t) {
        const double area = element_geometry(mesh, t).area;
        const auto& tri = mesh.triangle(t);
        for (const auto& q : quadrature::data()) {
            const double value = q.weight * area * mu(mesh.map_to_element(t, q.barycentric));
            for (std::size_t i = 0; i < 3; ++i) {
                const int di = dofs.u_dof(tri[i]);
                if (di >= 0) load[di] += value * q.barycentric[static_cast<Eigen::Index>(i)];
            }
        }
    }
    return load;
}

Eigen::VectorXd q_h_project(const Mesh& mesh, const DofMap& dofs, const ScalarField& mu)
{
    if (dofs.n_u() == 0) return {};
    const Eigen::SparseMatrix<double> mass = p1_mass_matrix(mesh, dofs);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(mass);
    if (solver.info() != Eigen::Success) throw std::logic_error("q_h_project: singular mass matrix");
    return solver.solve(p1_load(mesh, dofs, mu));
}

Eigen::VectorXd combine(const DofMap& dofs, const Eigen::VectorXd& u, const Eigen::VectorXd& sigma,
                        const Eigen::VectorXd& lambda)
{
    if (u.size() != dofs.n_u() || sigma.size() != dofs.n_sigma() || lambda.size() != dofs.n_lambda())
        throw std::invalid_argument("combine: block sizes do not match the dof layout");
    Eigen::VectorXd out(dofs.n_total());
    out << u, sigma, lambda;
    return out;
}

} // namespace fols
