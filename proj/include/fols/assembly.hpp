#pragma once

#include "fols/problems.hpp"
#include "fols/spaces.hpp"

#include <string_view>

namespace fols {

/// Bilinear forms sharing the weighted residual part
///   beta <div s + l, div t + m> + <grad u - s, grad v - t>
/// and differing in the coupling term:
///   A: (<m, u> + <l, v>) / 2   (symmetric, least-squares)
///   B: <l, v>
///   C: <m, u>
/// Trial functions are (u, s, l), test functions (v, t, m).
enum class Form { A, B, C };

/// Load functionals: G = -beta <f, div t + m>, F = G + <m, g>/2, H = G + <m, g>.
enum class Functional { F, G, H };

Form parse_form(std::string_view name);
std::string_view form_name(Form form);
/// The load functional that pairs with each form.
Functional functional_of(Form form);

struct FormConfig {
    Form form = Form::A;
    double beta = 1.0;
};

struct SparseOperator {
    SparseMatrix matrix;
    bool symmetric = false;

    Eigen::Index dimension() const { return matrix.rows(); }
};

/// Galerkin matrix with entries form(phi_j, phi_i) at (i, j).
SparseOperator assemble_form(const Mesh& mesh, const DofMap& dofs, const FormConfig& config);

/// Functional applied to every basis function. The u-block is always zero.
Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& dofs, double beta, const ScalarField& f,
                              const ScalarField& g, Functional functional);

/// Gram matrix of ||grad u||^2 + ||s||^2 + ||div s + l||^2.
SparseOperator assemble_u_gram(const Mesh& mesh, const DofMap& dofs);

/// ||div s + l + f||^2 + ||grad u - s||^2 + <l, u - g>. Only defined for obstacles
/// vanishing on the boundary; throws std::invalid_argument otherwise.
double evaluate_J(const FirstOrderSolution& solution, const ScalarField& f, const ScalarField& g,
                  const ObstacleTraits& traits = {});

/// Quadrature of the squared L2 norm of f, with the data rule.
double l2_norm_squared(const Mesh& mesh, const ScalarField& f);

} // namespace fols
