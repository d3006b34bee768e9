#include "fols/assembly.hpp"
#include "fols/estimator.hpp"
#include "fols/quadrature.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace fols;
using namespace fols::testing;

namespace {

// form(trial, test) by pointwise evaluation of both arguments.
double form_value(Form form, double beta, const FieldValues& w, const FieldValues& v)
{
    double value = beta * (w.div_sigma + w.lambda) * (v.div_sigma + v.lambda) +
                   (w.grad_u - w.sigma).dot(v.grad_u - v.sigma);
    switch (form) {
    case Form::A: value += 0.5 * (v.lambda * w.u + w.lambda * v.u); break;
    case Form::B: value += w.lambda * v.u; break;
    case Form::C: value += v.lambda * w.u; break;
    }
    return value;
}

// Dense Galerkin matrix from basis evaluations at the data quadrature points.
Eigen::MatrixXd brute_force_matrix(const Mesh& mesh, Form form, double beta)
{
    auto m = shared(mesh);
    const DofMap dofs(mesh);
    const int n = dofs.n_total();
    const auto rule = quadrature::data();
    std::vector<std::vector<FieldValues>> values(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const FirstOrderSolution basis(m, Eigen::VectorXd::Unit(n, j));
        for (int t = 0; t < mesh.n_elements(); ++t)
            for (const auto& q : rule) values[static_cast<std::size_t>(j)].push_back(evaluate(basis, t, q.barycentric));
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::size_t k = 0;
            for (int t = 0; t < mesh.n_elements(); ++t) {
                const double area = element_geometry(mesh, t).area;
                for (const auto& q : rule) {
                    a(i, j) += q.weight * area *
                               form_value(form, beta, values[static_cast<std::size_t>(j)][k],
                                          values[static_cast<std::size_t>(i)][k]);
                    ++k;
                }
            }
        }
    return a;
}

double quad(const Eigen::VectorXd& w, const SparseMatrix& a) { return w.dot(a * w); }

} // namespace

TEST_CASE("forms and functionals parse")
{
    for (Form f : {Form::A, Form::B, Form::C}) CHECK(parse_form(form_name(f)) == f);
    CHECK(functional_of(Form::A) == Functional::F);
    CHECK(functional_of(Form::B) == Functional::G);
    CHECK(functional_of(Form::C) == Functional::H);
    CHECK_THROWS_AS(parse_form("D"), std::invalid_argument);
}

TEST_CASE("assembled matrices agree with pointwise integration of the basis")
{
    const Mesh mesh = refine_nvb(create_structured(Domain::UnitSquare, 2), {2});
    const DofMap dofs(mesh);
    for (Form form : {Form::A, Form::B, Form::C}) {
        const double beta = 2.5;
        const Eigen::MatrixXd oracle = brute_force_matrix(mesh, form, beta);
        const Eigen::MatrixXd assembled(assemble_form(mesh, dofs, {form, beta}).matrix);
        CHECK((assembled - oracle).lpNorm<Eigen::Infinity>() < 1e-12 * oracle.lpNorm<Eigen::Infinity>());
    }
}

TEST_CASE("symmetry and the shared quadratic form")
{
    std::mt19937 rng(5);
    for (Domain d : {Domain::UnitSquare, Domain::LShapeSmall}) {
        const Mesh mesh = refine_uniform(create_structured(d, 2));
        const DofMap dofs(mesh);
        const double beta = 1.0 + std::pow(domain_diameter(d), 2);
        const auto a = assemble_form(mesh, dofs, {Form::A, beta});
        const auto b = assemble_form(mesh, dofs, {Form::B, beta});
        const auto c = assemble_form(mesh, dofs, {Form::C, beta});
        CHECK(a.symmetric);
        CHECK_FALSE(b.symmetric);
        CHECK_FALSE(c.symmetric);
        const SparseMatrix at = a.matrix.transpose();
        CHECK(SparseMatrix(a.matrix - at).coeffs().cwiseAbs().maxCoeff() <= 1e-12);
        // B and C are transposes of each other.
        const SparseMatrix ct = c.matrix.transpose();
        CHECK(SparseMatrix(b.matrix - ct).coeffs().cwiseAbs().maxCoeff() <= 1e-12);

        for (int trial = 0; trial < 100; ++trial) {
            const Eigen::VectorXd w = random_vector(dofs.n_total(), rng);
            const double qa = quad(w, a.matrix), qb = quad(w, b.matrix), qc = quad(w, c.matrix);
            CHECK(std::abs(qa - qb) <= 1e-12 * std::abs(qa));
            CHECK(std::abs(qa - qc) <= 1e-12 * std::abs(qa));
        }
    }
}

TEST_CASE("multiplier diagonal entry")
{
    const Mesh mesh = create_structured(Domain::UnitSquare, 1);
    const DofMap dofs(mesh);
    const double beta = 3.0;
    const auto a = assemble_form(mesh, dofs, {Form::A, beta});
    for (int t = 0; t < 2; ++t) {
        const int i = dofs.lambda_dof(t);
        CHECK(a.matrix.coeff(i, i) == doctest::Approx(beta * 0.5));
    }
}

TEST_CASE("assembly is deterministic")
{
    const Mesh mesh = refine_uniform(create_structured(Domain::LShapeBartels, 1));
    const DofMap dofs(mesh);
    const auto first = assemble_form(mesh, dofs, {Form::B, 17.0});
    const auto second = assemble_form(mesh, dofs, {Form::B, 17.0});
    CHECK((first.matrix - second.matrix).norm() == 0.0);
}

TEST_CASE("load vectors")
{
    const Mesh mesh = create_structured(Domain::UnitSquare, 2);
    const DofMap dofs(mesh);
    const double beta = 3.0;
    const ScalarField zero = [](const Point&) { return 0.0; };
    const ScalarField one = [](const Point&) { return 1.0; };

    for (Functional fn : {Functional::F, Functional::G, Functional::H})
        CHECK(assemble_load(mesh, dofs, beta, zero, zero, fn).isZero());

    const Eigen::VectorXd g = assemble_load(mesh, dofs, beta, one, zero, Functional::G);
    CHECK(g.head(dofs.n_u()).isZero());
    for (int t = 0; t < mesh.n_elements(); ++t)
        CHECK(g[dofs.lambda_dof(t)] == doctest::Approx(-beta * element_geometry(mesh, t).area));
    // Integrated divergence of an edge basis: the flux through the boundary of its support.
    for (int e = 0; e < mesh.n_edges(); ++e) {
        const auto& ed = mesh.edges()[static_cast<std::size_t>(e)];
        const double len = (mesh.vertex(ed[1]) - mesh.vertex(ed[0])).norm();
        const double value = g[dofs.sigma_dof(e)];
        if (mesh.is_boundary_edge(e))
            CHECK(std::abs(std::abs(value) - beta * len) < 1e-13);
        else
            CHECK(std::abs(value) < 1e-13);
    }

    const ScalarField bump = [](const Point& x) { return x.x() * x.x() + x.y(); };
    const Eigen::VectorXd h = assemble_load(mesh, dofs, beta, one, bump, Functional::H);
    const Eigen::VectorXd f = assemble_load(mesh, dofs, beta, one, bump, Functional::F);
    const Eigen::VectorXd means = project_p0(mesh, bump);
    for (int t = 0; t < mesh.n_elements(); ++t) {
        const double integral = means[t] * element_geometry(mesh, t).area;
        CHECK(h[dofs.lambda_dof(t)] - g[dofs.lambda_dof(t)] == doctest::Approx(integral).epsilon(1e-12));
        CHECK(f[dofs.lambda_dof(t)] - g[dofs.lambda_dof(t)] == doctest::Approx(0.5 * integral).epsilon(1e-12));
        CHECK(h[dofs.lambda_dof(t)] - g[dofs.lambda_dof(t)] >= 0.0);
    }
    CHECK((h - g).head(dofs.lambda_offset()).isZero());
}

TEST_CASE("Gram matrix of the U norm")
{
    const Mesh mesh = create_structured(Domain::Square2, 2);
    const DofMap dofs(mesh);
    const auto gram = assemble_u_gram(mesh, dofs);
    CHECK(quad(Eigen::VectorXd::Zero(dofs.n_total()), gram.matrix) == 0.0);
    const Eigen::VectorXd single = Eigen::VectorXd::Unit(dofs.n_total(), dofs.lambda_dof(2));
    CHECK(quad(single, gram.matrix) == doctest::Approx(element_geometry(mesh, 2).area));
    std::mt19937 rng(9);
    for (int k = 0; k < 50; ++k) CHECK(quad(random_vector(dofs.n_total(), rng), gram.matrix) >= 0.0);
}

TEST_CASE("coercivity is robust under refinement")
{
    std::mt19937 rng(21);
    Mesh mesh = create_structured(Domain::UnitSquare, 2);
    const double beta = 3.0;
    double c0 = 0.0;
    for (int level = 0; level <= 4; ++level) {
        const DofMap dofs(mesh);
        const auto a = assemble_form(mesh, dofs, {Form::A, beta});
        const auto g = assemble_u_gram(mesh, dofs);
        double lowest = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 100; ++k) {
            const Eigen::VectorXd w = random_vector(dofs.n_total(), rng);
            lowest = std::min(lowest, quad(w, a.matrix) / quad(w, g.matrix));
        }
        CHECK(lowest > 0.0);
        if (level == 0)
            c0 = lowest;
        else
            CHECK(lowest >= 0.5 * c0);
        mesh = refine_uniform(mesh);
    }
}

TEST_CASE("least-squares functional")
{
    const Mesh mesh = refine_uniform(create_structured(Domain::UnitSquare, 2));
    auto m = shared(mesh);
    const DofMap dofs(mesh);
    const ScalarField zero = [](const Point&) { return 0.0; };
    const ScalarField neg_bubble = [](const Point& x) { return -(1 - x.x()) * x.x() * (1 - x.y()) * x.y(); };

    const FirstOrderSolution nothing(m, Eigen::VectorXd::Zero(dofs.n_total()));
    CHECK(evaluate_J(nothing, zero, neg_bubble) == 0.0);

    ObstacleTraits nonvanishing;
    nonvanishing.vanishes_on_boundary = false;
    CHECK_THROWS_AS(evaluate_J(nothing, zero, neg_bubble, nonvanishing), std::invalid_argument);

    // J(v) = a_1(v, v) - 2 F_1(v) + <f, f>
    std::mt19937 rng(4);
    const ScalarField f = [](const Point& x) { return std::sin(3 * x.x()) + x.y(); };
    const auto a1 = assemble_form(mesh, dofs, {Form::A, 1.0});
    const Eigen::VectorXd f1 = assemble_load(mesh, dofs, 1.0, f, neg_bubble, Functional::F);
    for (int k = 0; k < 20; ++k) {
        const Eigen::VectorXd v = random_vector(dofs.n_total(), rng);
        const FirstOrderSolution s(m, v);
        const double identity = quad(v, a1.matrix) - 2.0 * f1.dot(v) + l2_norm_squared(mesh, f);
        CHECK(rel_diff(evaluate_J(s, f, neg_bubble), identity) <= 1e-10);
    }

    // Nonnegative for any admissible triple when the obstacle vanishes.
    for (int k = 0; k < 20; ++k) {
        Eigen::VectorXd v = random_vector(dofs.n_total(), rng);
        v.head(dofs.n_u()) = v.head(dofs.n_u()).cwiseAbs();
        v.tail(dofs.n_lambda()) = v.tail(dofs.n_lambda()).cwiseAbs();
        CHECK(evaluate_J(FirstOrderSolution(m, v), f, zero) >= 0.0);
    }
}
