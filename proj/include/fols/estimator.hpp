#pragma once

#include "fols/problems.hpp"
#include "fols/spaces.hpp"

#include <array>
#include <functional>
#include <optional>
#include <vector>

namespace fols {

/// Squared local contributions of the estimator on one element.
struct LocalEstimate {
    double eta2_div = 0.0;         ///< ||div s_h + l_h + Pi_h f||_T^2
    double eta2_grad = 0.0;        ///< ||grad u_h - s_h||_T^2
    double rho2_contact = 0.0;     ///< <l_h, (u_h - g)_+>_T
    double rho2_penetration = 0.0; ///< ||grad (g - u_h)_+||_T^2
    double osc2 = 0.0;             ///< ||(1 - Pi_h) f||_T^2
    bool negative_multiplier = false; ///< l_h < 0 here; the contact term is reported as zero

    double total() const { return eta2_div + eta2_grad + rho2_contact + rho2_penetration + osc2; }
};

/// Global sums (square roots of the squared totals).
struct EstimateSummary {
    double est = 0.0;
    double eta = 0.0;
    double rho = 0.0;
    double osc = 0.0;
    bool negative_multiplier = false; ///< some l_h < 0; the contact term was clamped at zero
};

/// Per-element estimator contributions. Elements are processed independently;
/// `threads` > 1 splits the element range across worker threads.
std::vector<LocalEstimate> local_estimates(const FirstOrderSolution& solution, const ScalarField& f,
                                           const ScalarField& g, const VectorField& grad_g, int threads = 1);

EstimateSummary summarize(const std::vector<LocalEstimate>& local);

/// ||div s_h + l_h + f||^2 + ||grad u_h - s_h||^2, the right-hand side of the
/// orthogonal splitting eta^2 + osc^2.
double residual_norm_squared(const FirstOrderSolution& solution, const ScalarField& f);

struct ErrorReport {
    double err_U = 0.0;
    std::optional<double> err_V;
    double grad_u = 0.0;             ///< ||grad(u - u_h)||
    double sigma = 0.0;              ///< ||s - s_h||
    double div_sigma_lambda = 0.0;   ///< ||div s_h + l_h + f||
    std::optional<double> lambda_minus1; ///< ||l - l_h||_{-1,h}, when the exact multiplier is known
};

/// Errors in the U norm (and the V surrogate when the exact multiplier is known).
ErrorReport error_U(const FirstOrderSolution& solution, const ExactSolution& exact, const ScalarField& f);

/// Integrand that may depend on the element it is evaluated on (e.g. l - l_h).
using ElementScalarField = std::function<double(int element, const Point& x)>;

/// sqrt(||h_T mu||^2 + ||grad u_h[mu]||^2) where u_h[mu] in the interior affine
/// space solves <grad u_h[mu], grad v_h> = <mu, v_h> for all v_h.
double discrete_h_minus1_norm(const Mesh& mesh, const DofMap& dofs, const ScalarField& mu);
double discrete_h_minus1_norm(const Mesh& mesh, const DofMap& dofs, const ElementScalarField& mu);

/// The two terms separately: (||h_T mu||, ||grad u_h[mu]||).
std::array<double, 2> discrete_h_minus1_terms(const Mesh& mesh, const DofMap& dofs, const ElementScalarField& mu);

} // namespace fols
