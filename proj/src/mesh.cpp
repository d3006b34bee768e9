#include "fols/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace fols {

namespace {

std::uint64_t edge_key(int a, int b)
{
    const auto lo = static_cast<std::uint64_t>(std::min(a, b));
    const auto hi = static_cast<std::uint64_t>(std::max(a, b));
    return (lo << 32) | hi;
}

struct Block {
    double x0, y0; // lower-left corner
};

struct BlockLayout {
    double side;
    std::vector<Block> blocks;
};

BlockLayout layout_of(Domain domain)
{
    switch (domain) {
    case Domain::UnitSquare: return {1.0, {{0.0, 0.0}}};
    case Domain::Square2: return {2.0, {{-1.0, -1.0}}};
    case Domain::LShapeBartels: return {2.0, {{-2.0, 0.0}, {-2.0, -2.0}, {0.0, -2.0}}};
    case Domain::LShapeSmall: return {1.0, {{-1.0, 0.0}, {0.0, 0.0}, {0.0, -1.0}}};
    }
    throw std::invalid_argument("unknown domain");
}

} // namespace

Domain parse_domain(std::string_view name)
{
    if (name == "unit_square") return Domain::UnitSquare;
    if (name == "square2") return Domain::Square2;
    if (name == "lshape_bartels") return Domain::LShapeBartels;
    if (name == "lshape_small") return Domain::LShapeSmall;
    throw std::invalid_argument("unknown domain tag: " + std::string(name));
}

std::string_view domain_name(Domain domain)
{
    switch (domain) {
    case Domain::UnitSquare: return "unit_square";
    case Domain::Square2: return "square2";
    case Domain::LShapeBartels: return "lshape_bartels";
    case Domain::LShapeSmall: return "lshape_small";
    }
    return "unknown";
}

double domain_area(Domain domain)
{
    const auto layout = layout_of(domain);
    return static_cast<double>(layout.blocks.size()) * layout.side * layout.side;
}

double domain_diameter(Domain domain)
{
    switch (domain) {
    case Domain::UnitSquare: return std::sqrt(2.0);
    case Domain::Square2: return 2.0 * std::sqrt(2.0);
    case Domain::LShapeBartels: return 4.0 * std::sqrt(2.0);
    case Domain::LShapeSmall: return 2.0 * std::sqrt(2.0);
    }
    throw std::invalid_argument("unknown domain");
}

double signed_area(const Point& a, const Point& b, const Point& c)
{
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

Mesh::Mesh(std::vector<Point> vertices, std::vector<Triangle> triangles,
           std::vector<int> refinement_edge, std::vector<int> parent)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      refinement_edge_(std::move(refinement_edge)),
      parent_(std::move(parent))
{
    const auto nt = triangles_.size();
    if (refinement_edge_.size() != nt)
        throw std::invalid_argument("refinement_edge size does not match triangle count");
    if (!parent_.empty() && parent_.size() != nt)
        throw std::invalid_argument("parent size does not match triangle count");

    const int nv = n_vertices();
    std::unordered_map<std::uint64_t, int> edge_index;
    edge_index.reserve(3 * nt);
    element_edges_.resize(nt);

    for (std::size_t t = 0; t < nt; ++t) {
        const auto& tri = triangles_[t];
        for (int v : tri)
            if (v < 0 || v >= nv) throw std::invalid_argument("triangle references missing vertex");
        if (refinement_edge_[t] < 0 || refinement_edge_[t] > 2)
            throw std::invalid_argument("refinement edge index out of range");
        const double area = signed_area(vertex(tri[0]), vertex(tri[1]), vertex(tri[2]));
        if (!(area > 0.0))
            throw std::invalid_argument("triangle " + std::to_string(t) + " is not counter-clockwise");

        for (int k = 0; k < 3; ++k) {
            const int a = tri[static_cast<std::size_t>((k + 1) % 3)];
            const int b = tri[static_cast<std::size_t>((k + 2) % 3)];
            const auto [it, inserted] = edge_index.try_emplace(edge_key(a, b), n_edges());
            if (inserted) {
                edges_.push_back({std::min(a, b), std::max(a, b)});
                edge_elements_.push_back({static_cast<int>(t), -1});
            } else {
                auto& adj = edge_elements_[static_cast<std::size_t>(it->second)];
                if (adj[1] >= 0)
                    throw std::invalid_argument("edge shared by more than two triangles");
                adj[1] = static_cast<int>(t);
            }
            element_edges_[t][static_cast<std::size_t>(k)] = it->second;
        }
    }

    boundary_vertex_.assign(static_cast<std::size_t>(nv), false);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        if (edge_elements_[e][1] < 0) {
            boundary_vertex_[static_cast<std::size_t>(edges_[e][0])] = true;
            boundary_vertex_[static_cast<std::size_t>(edges_[e][1])] = true;
        }
    }
}

Point Mesh::map_to_element(int t, const Eigen::Vector3d& barycentric) const
{
    const auto& tri = triangle(t);
    return barycentric[0] * vertex(tri[0]) + barycentric[1] * vertex(tri[1]) +
           barycentric[2] * vertex(tri[2]);
}

ElementGeometry element_geometry(const Mesh& mesh, int t)
{
    const auto& tri = mesh.triangle(t);
    const std::array<Point, 3> p{mesh.vertex(tri[0]), mesh.vertex(tri[1]), mesh.vertex(tri[2])};

    ElementGeometry geo;
    geo.area = signed_area(p[0], p[1], p[2]);
    for (std::size_t k = 0; k < 3; ++k) {
        const Point& a = p[(k + 1) % 3];
        const Point& b = p[(k + 2) % 3];
        const Point d = b - a;
        geo.barycentric_gradients[k] = Point(-d.y(), d.x()) / (2.0 * geo.area);
        geo.edge_lengths[k] = d.norm();
        geo.edge_signs[k] = tri[(k + 1) % 3] < tri[(k + 2) % 3] ? 1 : -1;
    }
    geo.diameter = std::max({geo.edge_lengths[0], geo.edge_lengths[1], geo.edge_lengths[2]});
    return geo;
}

std::vector<int> longest_edge_refinement(const std::vector<Point>& vertices,
                                         const std::vector<Mesh::Triangle>& triangles)
{
    std::vector<int> ref(triangles.size(), 0);
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        const auto& tri = triangles[t];
        int best = 0;
        double best_len = -1.0;
        for (int k = 0; k < 3; ++k) {
            const auto& a = vertices[static_cast<std::size_t>(tri[static_cast<std::size_t>((k + 1) % 3)])];
            const auto& b = vertices[static_cast<std::size_t>(tri[static_cast<std::size_t>((k + 2) % 3)])];
            const double len = (b - a).norm();
            const double tol = 1e-12 * std::max(len, best_len);
            if (len > best_len + tol ||
                (std::abs(len - best_len) <= tol && tri[static_cast<std::size_t>(k)] < tri[static_cast<std::size_t>(best)])) {
                best = k;
                best_len = std::max(len, best_len);
            }
        }
        ref[t] = best;
    }
    return ref;
}

Mesh create_structured(Domain domain, int n)
{
    if (n < 1) throw std::invalid_argument("create_structured: n must be >= 1");
    const auto layout = layout_of(domain);
    const double h = layout.side / n;

    // Vertices are keyed by integer lattice coordinates relative to the domain's lower-left corner.
    double xmin = 0.0, ymin = 0.0;
    for (std::size_t b = 0; b < layout.blocks.size(); ++b) {
        if (b == 0 || layout.blocks[b].x0 < xmin) xmin = layout.blocks[b].x0;
        if (b == 0 || layout.blocks[b].y0 < ymin) ymin = layout.blocks[b].y0;
    }

    std::map<std::pair<long, long>, int> lattice;
    std::vector<Point> vertices;
    auto vertex_at = [&](long i, long j) {
        const auto [it, inserted] = lattice.try_emplace({i, j}, static_cast<int>(vertices.size()));
        if (inserted) vertices.emplace_back(xmin + static_cast<double>(i) * h, ymin + static_cast<double>(j) * h);
        return it->second;
    };

    std::vector<Mesh::Triangle> triangles;
    for (const auto& block : layout.blocks) {
        const long i0 = std::lround((block.x0 - xmin) / h);
        const long j0 = std::lround((block.y0 - ymin) / h);
        for (long j = j0; j < j0 + n; ++j) {
            for (long i = i0; i < i0 + n; ++i) {
                const int p00 = vertex_at(i, j);
                const int p10 = vertex_at(i + 1, j);
                const int p11 = vertex_at(i + 1, j + 1);
                const int p01 = vertex_at(i, j + 1);
                triangles.push_back({p00, p10, p11});
                triangles.push_back({p00, p11, p01});
            }
        }
    }
    auto ref = longest_edge_refinement(vertices, triangles);
    return Mesh(std::move(vertices), std::move(triangles), std::move(ref));
}

Mesh refine_nvb(const Mesh& mesh, const std::vector<int>& marked)
{
    const int ne = mesh.n_edges();
    const int nt = mesh.n_elements();
    std::vector<bool> edge_marked(static_cast<std::size_t>(ne), false);
    std::vector<int> work;

    auto mark = [&](int e) {
        if (edge_marked[static_cast<std::size_t>(e)]) return;
        edge_marked[static_cast<std::size_t>(e)] = true;
        for (int t : mesh.edge_elements()[static_cast<std::size_t>(e)])
            if (t >= 0) work.push_back(t);
    };
    auto ref_edge_of = [&](int t) {
        return mesh.element_edges()[static_cast<std::size_t>(t)]
                                   [static_cast<std::size_t>(mesh.refinement_edge()[static_cast<std::size_t>(t)])];
    };

    for (int t : marked) {
        if (t < 0 || t >= nt) throw std::invalid_argument("refine_nvb: marked element out of range");
        mark(ref_edge_of(t));
    }
    while (!work.empty()) {
        const int t = work.back();
        work.pop_back();
        const auto& edges = mesh.element_edges()[static_cast<std::size_t>(t)];
        if (edge_marked[static_cast<std::size_t>(edges[0])] || edge_marked[static_cast<std::size_t>(edges[1])] ||
            edge_marked[static_cast<std::size_t>(edges[2])])
            mark(ref_edge_of(t));
    }

    std::vector<Point> vertices = mesh.vertices();
    std::unordered_map<std::uint64_t, int> midpoint;
    for (int e = 0; e < ne; ++e) {
        if (!edge_marked[static_cast<std::size_t>(e)]) continue;
        const auto& edge = mesh.edges()[static_cast<std::size_t>(e)];
        midpoint.emplace(edge_key(edge[0], edge[1]), static_cast<int>(vertices.size()));
        vertices.push_back(0.5 * (mesh.vertex(edge[0]) + mesh.vertex(edge[1])));
    }

    std::vector<Mesh::Triangle> triangles;
    std::vector<int> ref;
    std::vector<int> parent;
    triangles.reserve(static_cast<std::size_t>(nt) + 2 * midpoint.size());

    // Bisect across the refinement edge (opposite local vertex k); the new
    // vertex becomes the newest vertex of both children.
    auto bisect = [&](auto&& self, const Mesh::Triangle& tri, int k, int origin) -> void {
        const int c = tri[static_cast<std::size_t>(k)];
        const int a = tri[static_cast<std::size_t>((k + 1) % 3)];
        const int b = tri[static_cast<std::size_t>((k + 2) % 3)];
        const auto it = midpoint.find(edge_key(a, b));
        if (it == midpoint.end()) {
            triangles.push_back(tri);
            ref.push_back(k);
            parent.push_back(origin);
            return;
        }
        const int m = it->second;
        self(self, Mesh::Triangle{c, a, m}, 2, origin);
        self(self, Mesh::Triangle{c, m, b}, 1, origin);
    };
    for (int t = 0; t < nt; ++t)
        bisect(bisect, mesh.triangle(t), mesh.refinement_edge()[static_cast<std::size_t>(t)], t);

    return Mesh(std::move(vertices), std::move(triangles), std::move(ref), std::move(parent));
}

Mesh refine_uniform(const Mesh& mesh)
{
    std::vector<int> all(static_cast<std::size_t>(mesh.n_elements()));
    for (int t = 0; t < mesh.n_elements(); ++t) all[static_cast<std::size_t>(t)] = t;
    const Mesh once = refine_nvb(mesh, all);
    all.resize(static_cast<std::size_t>(once.n_elements()));
    for (int t = 0; t < once.n_elements(); ++t) all[static_cast<std::size_t>(t)] = t;
    Mesh twice = refine_nvb(once, all);

    std::vector<int> parent(twice.parent().size());
    for (std::size_t t = 0; t < parent.size(); ++t)
        parent[t] = once.parent()[static_cast<std::size_t>(twice.parent()[t])];
    return Mesh(twice.vertices(), twice.triangles(), twice.refinement_edge(), std::move(parent));
}

bool audit_conformity(const Mesh& mesh)
{
    // A hanging vertex shows up as a vertex lying strictly inside an edge that
    // has only one neighbor. Both the long edge and the two halves have a single
    // neighbor, so only endpoints of such edges need to be tested.
    std::vector<int> single;
    std::vector<bool> candidate(static_cast<std::size_t>(mesh.n_vertices()), false);
    for (int e = 0; e < mesh.n_edges(); ++e) {
        if (!mesh.is_boundary_edge(e)) continue;
        single.push_back(e);
        for (int v : mesh.edges()[static_cast<std::size_t>(e)]) candidate[static_cast<std::size_t>(v)] = true;
    }
    for (int e : single) {
        const auto& edge = mesh.edges()[static_cast<std::size_t>(e)];
        const Point& a = mesh.vertex(edge[0]);
        const Point& b = mesh.vertex(edge[1]);
        const double len = (b - a).norm();
        for (int v = 0; v < mesh.n_vertices(); ++v) {
            if (!candidate[static_cast<std::size_t>(v)] || v == edge[0] || v == edge[1]) continue;
            const Point& p = mesh.vertex(v);
            const double cross = std::abs(signed_area(a, b, p)) * 2.0 / len;
            const double s = (p - a).dot(b - a) / (len * len);
            if (cross < 1e-12 * len && s > 1e-12 && s < 1.0 - 1e-12) return false;
        }
    }
    // Every vertex must be used, and each element's edges must be consistent.
    std::vector<bool> used(static_cast<std::size_t>(mesh.n_vertices()), false);
    for (const auto& tri : mesh.triangles())
        for (int v : tri) used[static_cast<std::size_t>(v)] = true;
    return std::all_of(used.begin(), used.end(), [](bool u) { return u; });
}

double shape_regularity(const Mesh& mesh)
{
    double kappa = 0.0;
    for (int t = 0; t < mesh.n_elements(); ++t) {
        const auto geo = element_geometry(mesh, t);
        kappa = std::max(kappa, geo.diameter * geo.diameter / geo.area);
    }
    return kappa;
}

std::vector<int> bisection_depth(const Mesh& mesh, double initial_element_area)
{
    std::vector<int> depth(static_cast<std::size_t>(mesh.n_elements()));
    for (int t = 0; t < mesh.n_elements(); ++t) {
        const double area = element_geometry(mesh, t).area;
        depth[static_cast<std::size_t>(t)] = static_cast<int>(std::lround(std::log2(initial_element_area / area)));
    }
    return depth;
}

void write_mesh(std::ostream& out, const Mesh& mesh)
{
    out.precision(17);
    out << mesh.n_vertices() << ' ' << mesh.n_elements() << '\n';
    for (int v = 0; v < mesh.n_vertices(); ++v)
        out << mesh.vertex(v).x() << ' ' << mesh.vertex(v).y() << ' '
            << (mesh.boundary_vertex()[static_cast<std::size_t>(v)] ? 1 : 0) << '\n';
    for (int t = 0; t < mesh.n_elements(); ++t) {
        const auto& tri = mesh.triangle(t);
        out << tri[0] << ' ' << tri[1] << ' ' << tri[2] << ' '
            << mesh.refinement_edge()[static_cast<std::size_t>(t)] << '\n';
    }
}

Mesh read_mesh(std::istream& in)
{
    int nv = 0, ne = 0;
    if (!(in >> nv >> ne) || nv < 0 || ne < 0) throw std::invalid_argument("read_mesh: bad header");
    std::vector<Point> vertices(static_cast<std::size_t>(nv));
    for (auto& p : vertices) {
        int flag = 0;
        if (!(in >> p.x() >> p.y() >> flag)) throw std::invalid_argument("read_mesh: truncated vertex list");
    }
    std::vector<Mesh::Triangle> triangles(static_cast<std::size_t>(ne));
    std::vector<int> ref(static_cast<std::size_t>(ne));
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        auto& tri = triangles[t];
        if (!(in >> tri[0] >> tri[1] >> tri[2] >> ref[t]))
            throw std::invalid_argument("read_mesh: truncated element list");
    }
    return Mesh(std::move(vertices), std::move(triangles), std::move(ref));
}

} // namespace fols
