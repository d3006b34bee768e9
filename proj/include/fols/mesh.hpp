#pragma once

#include <Eigen/Core>

#include <array>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace fols {

using Point = Eigen::Vector2d;

/// Polygonal domains with a structured initial triangulation.
enum class Domain {
    UnitSquare,     ///< (0,1)^2
    Square2,        ///< (-1,1)^2
    LShapeBartels,  ///< (-2,2)^2 minus [0,2]^2
    LShapeSmall     ///< (-1,1)^2 minus [-1,0]^2
};

Domain parse_domain(std::string_view name);
std::string_view domain_name(Domain domain);
double domain_area(Domain domain);
double domain_diameter(Domain domain);

/// Affine element data. Local edge k is the edge opposite local vertex k,
/// running from vertex k+1 to vertex k+2 (mod 3).
struct ElementGeometry {
    double area = 0.0;
    double diameter = 0.0;
    std::array<Point, 3> barycentric_gradients;
    std::array<double, 3> edge_lengths{};
    /// +1 if the global edge orientation (low -> high vertex index) agrees with the
    /// counter-clockwise local orientation, i.e. the global normal points outward.
    std::array<int, 3> edge_signs{};
};

/// Conforming, counter-clockwise oriented triangulation with newest-vertex
/// bisection bookkeeping. Immutable once constructed.
class Mesh {
public:
    using Triangle = std::array<int, 3>;
    using Edge = std::array<int, 2>;

    Mesh() = default;

    /// Validates orientation and edge adjacency and derives the edge tables.
    /// Throws std::invalid_argument on a malformed triangulation.
    Mesh(std::vector<Point> vertices, std::vector<Triangle> triangles,
         std::vector<int> refinement_edge, std::vector<int> parent = {});

    int n_vertices() const { return static_cast<int>(vertices_.size()); }
    int n_elements() const { return static_cast<int>(triangles_.size()); }
    int n_edges() const { return static_cast<int>(edges_.size()); }

    const std::vector<Point>& vertices() const { return vertices_; }
    const std::vector<Triangle>& triangles() const { return triangles_; }
    const std::vector<int>& refinement_edge() const { return refinement_edge_; }
    const std::vector<bool>& boundary_vertex() const { return boundary_vertex_; }
    /// Edges oriented from the lower to the higher vertex index.
    const std::vector<Edge>& edges() const { return edges_; }
    /// Global edge index of local edge k of each element.
    const std::vector<Triangle>& element_edges() const { return element_edges_; }
    /// Adjacent elements of each edge; second entry is -1 on the boundary.
    const std::vector<Edge>& edge_elements() const { return edge_elements_; }
    /// Parent element in the mesh this one was refined from (empty for initial meshes).
    const std::vector<int>& parent() const { return parent_; }

    const Point& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
    const Triangle& triangle(int t) const { return triangles_[static_cast<std::size_t>(t)]; }

    bool is_boundary_edge(int e) const { return edge_elements_[static_cast<std::size_t>(e)][1] < 0; }

    Point map_to_element(int t, const Eigen::Vector3d& barycentric) const;

private:
    std::vector<Point> vertices_;
    std::vector<Triangle> triangles_;
    std::vector<int> refinement_edge_;
    std::vector<int> parent_;
    std::vector<bool> boundary_vertex_;
    std::vector<Edge> edges_;
    std::vector<Triangle> element_edges_;
    std::vector<Edge> edge_elements_;
};

ElementGeometry element_geometry(const Mesh& mesh, int t);

double signed_area(const Point& a, const Point& b, const Point& c);

/// Tensor-product triangulation: n x n squares per unit block of the domain,
/// each square split along one diagonal. Refinement edges are the diagonals.
Mesh create_structured(Domain domain, int n);

/// Newest-vertex bisection. Every marked element is bisected at least once;
/// further bisections close hanging nodes.
Mesh refine_nvb(const Mesh& mesh, const std::vector<int>& marked);

/// Two mark-all bisection passes: every element is split into four.
Mesh refine_uniform(const Mesh& mesh);

/// Refinement edge chosen as the longest edge, ties by smallest opposite vertex index.
std::vector<int> longest_edge_refinement(const std::vector<Point>& vertices,
                                         const std::vector<Mesh::Triangle>& triangles);

/// Independent audit of the edge structure: no hanging vertex lies in the
/// interior of an edge with a single neighbor. Returns true when conforming.
bool audit_conformity(const Mesh& mesh);

/// max_T diam(T)^2 / |T|
double shape_regularity(const Mesh& mesh);

/// Bisection generation of each element, log2(|T_0| / |T|), for meshes refined
/// from an initial mesh with uniform element area |T_0|.
std::vector<int> bisection_depth(const Mesh& mesh, double initial_element_area);

/// Plain-text dump: header `V E`, V lines `x y boundary_flag`, E lines `v0 v1 v2 refedge`.
void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_mesh(std::istream& in);

} // namespace fols
