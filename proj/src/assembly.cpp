#include "fols/assembly.hpp"

#include "fols/quadrature.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace fols {

Form parse_form(std::string_view name)
{
    if (name == "A" || name == "a") return Form::A;
    if (name == "B" || name == "b") return Form::B;
    if (name == "C" || name == "c") return Form::C;
    throw std::invalid_argument("unknown form: " + std::string(name));
}

std::string_view form_name(Form form)
{
    switch (form) {
    case Form::A: return "A";
    case Form::B: return "B";
    case Form::C: return "C";
    }
    return "?";
}

Functional functional_of(Form form)
{
    switch (form) {
    case Form::A: return Functional::F;
    case Form::B: return Functional::G;
    case Form::C: return Functional::H;
    }
    return Functional::G;
}

namespace {

constexpr int kLocal = 7; // three vertices, three edges, one element

using LocalMatrix = Eigen::Matrix<double, kLocal, kLocal>;

struct LocalElement {
    ElementGeometry geo;
    std::array<Point, 3> p;
    std::array<int, kLocal> dof{};
    Eigen::Matrix<double, kLocal, 1> div; // div of each local basis function, plus 1 for lambda
};

LocalElement local_element(const Mesh& mesh, const DofMap& dofs, int t)
{
    LocalElement el;
    el.geo = element_geometry(mesh, t);
    const auto& tri = mesh.triangle(t);
    const auto& edges = mesh.element_edges()[static_cast<std::size_t>(t)];
    el.div.setZero();
    for (std::size_t k = 0; k < 3; ++k) {
        el.p[k] = mesh.vertex(tri[k]);
        el.dof[k] = dofs.u_dof(tri[k]);
        el.dof[3 + k] = dofs.sigma_dof(edges[k]);
        el.div[static_cast<Eigen::Index>(3 + k)] = el.geo.edge_signs[k] * el.geo.edge_lengths[k] / el.geo.area;
    }
    el.dof[6] = dofs.lambda_dof(t);
    el.div[6] = 1.0;
    return el;
}

// Integrals of vector-valued parts: grad of hats (u slots), sign * RT basis
// (sigma slots), zero (lambda slot). `sigma_sign` is -1 for the residual
// grad u - sigma and +1 for the plain L2 Gram.
LocalMatrix vector_block(const LocalElement& el, double sigma_sign, bool include_grad)
{
    LocalMatrix m = LocalMatrix::Zero();
    for (const auto& q : quadrature::discrete()) {
        const Point x = q.barycentric[0] * el.p[0] + q.barycentric[1] * el.p[1] + q.barycentric[2] * el.p[2];
        Eigen::Matrix<double, 2, kLocal> r = Eigen::Matrix<double, 2, kLocal>::Zero();
        for (int k = 0; k < 3; ++k) {
            if (include_grad) r.col(k) = el.geo.barycentric_gradients[static_cast<std::size_t>(k)];
            r.col(3 + k) = sigma_sign * rt_basis(el.geo, el.p, k, x);
        }
        m.noalias() += (q.weight * el.geo.area) * r.transpose() * r;
    }
    return m;
}

void scatter(const LocalElement& el, const LocalMatrix& m, std::vector<Eigen::Triplet<double>>& triplets)
{
    for (int i = 0; i < kLocal; ++i) {
        const int gi = el.dof[static_cast<std::size_t>(i)];
        if (gi < 0) continue;
        for (int j = 0; j < kLocal; ++j) {
            const int gj = el.dof[static_cast<std::size_t>(j)];
            if (gj < 0) continue;
            triplets.emplace_back(gi, gj, m(i, j));
        }
    }
}

} // namespace

SparseOperator assemble_form(const Mesh& mesh, const DofMap& dofs, const FormConfig& config)
{
    if (!dofs.matches(mesh)) throw std::invalid_argument("assemble_form: dof map does not belong to mesh");
    if (!(config.beta >= 0.0)) throw std::invalid_argument("assemble_form: beta must be nonnegative");

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(kLocal * kLocal) * static_cast<std::size_t>(mesh.n_elements()));
    for (int t = 0; t < mesh.n_elements(); ++t) {
        const LocalElement el = local_element(mesh, dofs, t);
        LocalMatrix m = vector_block(el, -1.0, true);
        m.noalias() += (config.beta * el.geo.area) * el.div * el.div.transpose();

        // Coupling between the hat functions and the element constant.
        const double hat_integral = el.geo.area / 3.0;
        for (int i = 0; i < 3; ++i) {
            switch (config.form) {
            case Form::A:
                m(i, 6) += 0.5 * hat_integral;
                m(6, i) += 0.5 * hat_integral;
                break;
            case Form::B: m(i, 6) += hat_integral; break;
            case Form::C: m(6, i) += hat_integral; break;
            }
        }
        scatter(el, m, triplets);
    }
    SparseOperator op;
    op.matrix.resize(dofs.n_total(), dofs.n_total());
    op.matrix.setFromTriplets(triplets.begin(), triplets.end());
    op.symmetric = config.form == Form::A;
    return op;
}

Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& dofs, double beta, const ScalarField& f,
                              const ScalarField& g, Functional functional)
{
    if (!dofs.matches(mesh)) throw std::invalid_argument("assemble_load: dof map does not belong to mesh");
    const double obstacle_weight = functional == Functional::F ? 0.5 : functional == Functional::H ? 1.0 : 0.0;

    Eigen::VectorXd load = Eigen::VectorXd::Zero(dofs.n_total());
    for (int t = 0; t < mesh.n_elements(); ++t) {
        const LocalElement el = local_element(mesh, dofs, t);
        double f_integral = 0.0;
        double g_integral = 0.0;
        for (const auto& q : quadrature::data()) {
            const Point x = mesh.map_to_element(t, q.barycentric);
            f_integral += q.weight * f(x);
            if (obstacle_weight != 0.0) g_integral += q.weight * g(x);
        }
        f_integral *= el.geo.area;
        g_integral *= el.geo.area;
        for (int k = 3; k < kLocal; ++k)
            load[el.dof[static_cast<std::size_t>(k)]] -= beta * f_integral * el.div[k];
        load[el.dof[6]] += obstacle_weight * g_integral;
    }
    return load;
}

SparseOperator assemble_u_gram(const Mesh& mesh, const DofMap& dofs)
{
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(kLocal * kLocal) * static_cast<std::size_t>(mesh.n_elements()));
    for (int t = 0; t < mesh.n_elements(); ++t) {
        const LocalElement el = local_element(mesh, dofs, t);
        LocalMatrix m = vector_block(el, 1.0, false);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                m(i, j) += el.geo.area * el.geo.barycentric_gradients[static_cast<std::size_t>(i)].dot(
                                             el.geo.barycentric_gradients[static_cast<std::size_t>(j)]);
        m.noalias() += el.geo.area * el.div * el.div.transpose();
        scatter(el, m, triplets);
    }
    SparseOperator op;
    op.matrix.resize(dofs.n_total(), dofs.n_total());
    op.matrix.setFromTriplets(triplets.begin(), triplets.end());
    op.symmetric = true;
    return op;
}

double evaluate_J(const FirstOrderSolution& solution, const ScalarField& f, const ScalarField& g,
                  const ObstacleTraits& traits)
{
    if (!traits.vanishes_on_boundary)
        throw std::invalid_argument("evaluate_J: the functional requires an obstacle vanishing on the boundary");
    const Mesh& mesh = *solution.mesh;
    double j = 0.0;
    for (int t = 0; t < mesh.n_elements(); ++t) {
        const LocalFields local(mesh, solution.dofs, solution.coefficients, t);
        const double area = local.geometry().area;
        const double div_plus_lambda = local.div_sigma() + local.lambda();
        for (const auto& q : quadrature::discrete()) {
            const FieldValues v = local.at(q.barycentric);
            j += q.weight * area * (v.grad_u - v.sigma).squaredNorm();
        }
        for (const auto& q : quadrature::data()) {
            const Point x = local.point(q.barycentric);
            const FieldValues v = local.at(q.barycentric);
            const double residual = div_plus_lambda + f(x);
            j += q.weight * area * (residual * residual + local.lambda() * (v.u - g(x)));
        }
    }
    return j;
}

double l2_norm_squared(const Mesh& mesh, const ScalarField& f)
{
    double sum = 0.0;
    for (int t = 0; t < mesh.n_elements(); ++t) {
        const double area = element_geometry(mesh, t).area;
        for (const auto& q : quadrature::data()) {
            const double v = f(mesh.map_to_element(t, q.barycentric));
            sum += q.weight * area * v * v;
        }
    }
    return sum;
}

} // namespace fols
