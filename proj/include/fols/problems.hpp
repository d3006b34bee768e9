#pragma once

#include "fols/mesh.hpp"
#include "fols/spaces.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fols {

/// Regularity facts about the obstacle that decide which discrete sets apply.
struct ObstacleTraits {
    bool continuous = true;
    bool vanishes_on_boundary = true;
    bool nonpositive_on_boundary = true;
};

/// Exact triple (u, sigma = grad u, lambda = -Laplace u - f).
struct ExactSolution {
    ScalarField u;
    VectorField grad_u;
    ScalarField lambda;
};

/// Data of an obstacle problem -Laplace u >= f, u >= g, (u - g)(-Laplace u - f) = 0, u = 0 on the boundary.
struct ProblemSpec {
    std::string name;
    Domain domain = Domain::UnitSquare;
    ScalarField f;
    ScalarField g;
    VectorField grad_g;
    std::optional<ExactSolution> exact;
    ObstacleTraits traits;
    double default_beta = 0.0;   ///< 0 means 1 + diam(domain)^2
    int initial_subdivisions = 2;

    double diameter() const { return domain_diameter(domain); }
    double beta() const;
};

/// u = (1-x)x(1-y)y on the unit square, contact on x < 1/2.
ProblemSpec example_smooth();

/// Manufactured singular solution on (-2,2)^2 minus [0,2]^2 with zero obstacle.
ProblemSpec example_lshape_bartels();

/// Pyramid obstacle over (0,1)^2 on (-1,1)^2 minus [-1,0]^2, f = 1, unknown solution.
ProblemSpec example_pyramid();

ProblemSpec example_by_name(std::string_view name);
std::vector<std::string> example_names();

/// Cubic blend on [1/2, 3/4] with value 1/4 and zero slope at 1/2, value and slope zero at 3/4.
double smooth_blend(double x);
double smooth_blend_derivative(double x);

/// Radial cutoff of the L-shape example with r_* = 2(r - 1/4); returns (gamma, gamma', gamma'').
std::array<double, 3> lshape_cutoff(double r);

} // namespace fols
