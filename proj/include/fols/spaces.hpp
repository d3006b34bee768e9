#pragma once

#include "fols/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>
#include <memory>

namespace fols {

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Point(const Point&)>;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Global numbering of the lowest-order product space: continuous piecewise
/// affine functions vanishing on the boundary, lowest-order Raviart-Thomas
/// fields (one dof per edge), and piecewise constants. The combined vector is
/// laid out as [u | sigma | lambda].
class DofMap {
public:
    DofMap() = default;
    explicit DofMap(const Mesh& mesh);

    int n_u() const { return n_u_; }
    int n_sigma() const { return n_sigma_; }
    int n_lambda() const { return n_lambda_; }
    int n_total() const { return n_u_ + n_sigma_ + n_lambda_; }

    int sigma_offset() const { return n_u_; }
    int lambda_offset() const { return n_u_ + n_sigma_; }

    /// Global u-dof of a vertex, or -1 on the boundary.
    int u_dof(int vertex) const { return vertex_dof_[static_cast<std::size_t>(vertex)]; }
    int sigma_dof(int edge) const { return n_u_ + edge; }
    int lambda_dof(int element) const { return n_u_ + n_sigma_ + element; }

    /// Vertex carrying each u-dof.
    const std::vector<int>& u_vertices() const { return dof_vertex_; }

    bool matches(const Mesh& mesh) const
    {
        return n_sigma_ == mesh.n_edges() && n_lambda_ == mesh.n_elements() &&
               static_cast<int>(vertex_dof_.size()) == mesh.n_vertices();
    }

private:
    int n_u_ = 0;
    int n_sigma_ = 0;
    int n_lambda_ = 0;
    std::vector<int> vertex_dof_;
    std::vector<int> dof_vertex_;
};

/// Discrete triple (u_h, sigma_h, lambda_h).
struct FirstOrderSolution {
    std::shared_ptr<const Mesh> mesh;
    DofMap dofs;
    Eigen::VectorXd coefficients;

    FirstOrderSolution() = default;
    FirstOrderSolution(std::shared_ptr<const Mesh> m, Eigen::VectorXd c);

    auto u() const { return coefficients.head(dofs.n_u()); }
    auto sigma() const { return coefficients.segment(dofs.sigma_offset(), dofs.n_sigma()); }
    auto lambda() const { return coefficients.tail(dofs.n_lambda()); }
};

/// Pointwise values of the three components on one element.
struct FieldValues {
    double u = 0.0;
    Point grad_u = Point::Zero();
    Point sigma = Point::Zero();
    double div_sigma = 0.0;
    double lambda = 0.0;
};

/// Element-local view of a solution: evaluates the affine / Raviart-Thomas /
/// constant representatives on a fixed element.
class LocalFields {
public:
    LocalFields(const Mesh& mesh, const DofMap& dofs, const Eigen::VectorXd& coefficients, int t);

    FieldValues at(const Eigen::Vector3d& barycentric) const;
    const ElementGeometry& geometry() const { return geo_; }
    const std::array<double, 3>& vertex_u() const { return u_; }
    double div_sigma() const { return div_sigma_; }
    double lambda() const { return lambda_; }
    Point point(const Eigen::Vector3d& barycentric) const;

private:
    ElementGeometry geo_;
    std::array<Point, 3> p_;
    std::array<double, 3> u_{};
    std::array<double, 3> flux_{}; // signed RT coefficients
    Point grad_u_ = Point::Zero();
    double div_sigma_ = 0.0;
    double lambda_ = 0.0;
};

/// Raviart-Thomas basis function of local edge k on element geometry `geo`
/// with vertices p: sign_k |e_k| / (2|T|) (x - p_k). Its normal component is one
/// on the edge and its divergence is sign_k |e_k| / |T|.
Point rt_basis(const ElementGeometry& geo, const std::array<Point, 3>& p, int k, const Point& x);

FieldValues evaluate(const FirstOrderSolution& solution, int t, const Eigen::Vector3d& barycentric);

/// Unit normal of a global edge: the tangent (low -> high vertex) rotated clockwise.
Point edge_normal(const Mesh& mesh, int e);

/// Vertex values at interior vertices.
Eigen::VectorXd nodal_interpolate(const Mesh& mesh, const DofMap& dofs, const ScalarField& v);

/// Edge dofs: mean normal component, by three-point Gauss quadrature per edge.
Eigen::VectorXd rt_interpolate(const Mesh& mesh, const VectorField& tau);

/// Element means.
Eigen::VectorXd project_p0(const Mesh& mesh, const ScalarField& mu);

/// L2 projection onto the interior affine space.
Eigen::VectorXd q_h_project(const Mesh& mesh, const DofMap& dofs, const ScalarField& mu);

/// Mass and stiffness matrices of the interior affine space (u-block numbering).
SparseMatrix p1_mass_matrix(const Mesh& mesh, const DofMap& dofs);
SparseMatrix p1_stiffness_matrix(const Mesh& mesh, const DofMap& dofs);

/// Load vector (integral of mu times hat function) with the data quadrature rule.
Eigen::VectorXd p1_load(const Mesh& mesh, const DofMap& dofs, const ScalarField& mu);

/// Combine the three blocks into a coefficient vector.
Eigen::VectorXd combine(const DofMap& dofs, const Eigen::VectorXd& u, const Eigen::VectorXd& sigma,
                        const Eigen::VectorXd& lambda);

} // namespace fols
