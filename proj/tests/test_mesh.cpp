#include "fols/mesh.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

using namespace fols;
using fols::testing::reference_triangle;

namespace {

// Brute force: no vertex may sit strictly inside an edge of the mesh.
bool no_vertex_inside_an_edge(const Mesh& mesh)
{
    for (const auto& e : mesh.edges()) {
        const Point a = mesh.vertex(e[0]), b = mesh.vertex(e[1]);
        for (int v = 0; v < mesh.n_vertices(); ++v) {
            if (v == e[0] || v == e[1]) continue;
            const Point p = mesh.vertex(v);
            const double cross = (b - a).x() * (p - a).y() - (b - a).y() * (p - a).x();
            const double s = (p - a).dot(b - a) / (b - a).squaredNorm();
            if (std::abs(cross) < 1e-12 && s > 1e-12 && s < 1 - 1e-12) return false;
        }
    }
    return true;
}

double total_area(const Mesh& mesh)
{
    double sum = 0.0;
    for (int t = 0; t < mesh.n_elements(); ++t) sum += element_geometry(mesh, t).area;
    return sum;
}

int count_boundary_vertices(const Mesh& mesh)
{
    const auto& b = mesh.boundary_vertex();
    return static_cast<int>(std::count(b.begin(), b.end(), true));
}

} // namespace

TEST_CASE("structured meshes have the expected sizes")
{
    const Mesh one = create_structured(Domain::UnitSquare, 1);
    CHECK(one.n_elements() == 2);
    CHECK(one.n_vertices() == 4);
    CHECK(count_boundary_vertices(one) == 4);

    const Mesh two = create_structured(Domain::UnitSquare, 2);
    CHECK(two.n_elements() == 8);
    CHECK(two.n_vertices() == 9);
    CHECK(count_boundary_vertices(two) == 8);

    const Mesh ell = create_structured(Domain::LShapeSmall, 1);
    CHECK(ell.n_elements() == 6);
    CHECK(ell.n_vertices() == 8);
}

TEST_CASE("element areas sum to the domain area")
{
    for (Domain d : {Domain::UnitSquare, Domain::Square2, Domain::LShapeBartels, Domain::LShapeSmall}) {
        for (int n : {1, 2, 3}) {
            const Mesh mesh = create_structured(d, n);
            CHECK(std::abs(total_area(mesh) - domain_area(d)) <= 1e-12 * domain_area(d));
            CHECK(audit_conformity(mesh));
            CHECK(no_vertex_inside_an_edge(mesh));
        }
    }
}

TEST_CASE("domain names round trip and unknown tags are rejected")
{
    for (Domain d : {Domain::UnitSquare, Domain::Square2, Domain::LShapeBartels, Domain::LShapeSmall})
        CHECK(parse_domain(domain_name(d)) == d);
    CHECK_THROWS_AS(parse_domain("disk"), std::invalid_argument);
}

TEST_CASE("edge tables are consistent")
{
    const Mesh mesh = create_structured(Domain::LShapeBartels, 2);
    int boundary = 0;
    for (int e = 0; e < mesh.n_edges(); ++e) {
        const auto& edge = mesh.edges()[static_cast<std::size_t>(e)];
        CHECK(edge[0] < edge[1]);
        if (mesh.is_boundary_edge(e)) ++boundary;
        for (int t : mesh.edge_elements()[static_cast<std::size_t>(e)]) {
            if (t < 0) continue;
            const auto& ee = mesh.element_edges()[static_cast<std::size_t>(t)];
            CHECK(std::find(ee.begin(), ee.end(), e) != ee.end());
        }
    }
    // Euler: V - E + F = 1 for a simply connected polygon.
    CHECK(mesh.n_vertices() - mesh.n_edges() + mesh.n_elements() == 1);
    CHECK(boundary > 0);
}

TEST_CASE("geometry of the reference triangle")
{
    const Mesh mesh = reference_triangle();
    const ElementGeometry g = element_geometry(mesh, 0);
    CHECK(g.area == doctest::Approx(0.5));
    CHECK(g.diameter == doctest::Approx(std::sqrt(2.0)));
    CHECK(g.barycentric_gradients[0].isApprox(Point(-1, -1)));
    CHECK(g.barycentric_gradients[1].isApprox(Point(1, 0)));
    CHECK(g.barycentric_gradients[2].isApprox(Point(0, 1)));

    const ElementGeometry big = element_geometry(reference_triangle(2.0), 0);
    CHECK(big.area == doctest::Approx(2.0));
    for (int k = 0; k < 3; ++k)
        CHECK((big.barycentric_gradients[k] - 0.5 * g.barycentric_gradients[k]).norm() < 1e-14);
}

TEST_CASE("barycentric gradients sum to zero and respect the shape bound")
{
    const Mesh mesh = refine_uniform(create_structured(Domain::LShapeSmall, 2));
    const double kappa = shape_regularity(mesh);
    for (int t = 0; t < mesh.n_elements(); ++t) {
        const auto g = element_geometry(mesh, t);
        const Point s = g.barycentric_gradients[0] + g.barycentric_gradients[1] + g.barycentric_gradients[2];
        CHECK(s.norm() < 1e-12);
        CHECK(g.area > 0.0);
        CHECK(g.diameter * g.diameter / g.area <= kappa * (1 + 1e-12));
    }
}

TEST_CASE("malformed triangulations are rejected")
{
    CHECK_THROWS_AS(Mesh({Point(0, 0), Point(0, 1), Point(1, 0)}, {{0, 1, 2}}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(Mesh({Point(0, 0), Point(1, 0), Point(0, 1)}, {{0, 1, 2}}, {3}), std::invalid_argument);
}

TEST_CASE("bisection of the two-triangle square")
{
    const Mesh square = create_structured(Domain::UnitSquare, 1);

    const Mesh both = refine_nvb(square, {0, 1});
    CHECK(both.n_elements() == 4);
    CHECK(both.n_vertices() == 5);

    const Mesh none = refine_nvb(square, {});
    CHECK(none.n_elements() == square.n_elements());
    CHECK(none.triangles() == square.triangles());
    CHECK(none.vertices() == square.vertices());

    // The shared diagonal is the refinement edge of both, so the neighbour is closed.
    const Mesh one = refine_nvb(square, {0});
    CHECK(one.n_elements() == 4);
    CHECK(audit_conformity(one));
    CHECK(no_vertex_inside_an_edge(one));
}

TEST_CASE("random bisection sequences stay conforming")
{
    std::mt19937 rng(7);
    Mesh mesh = create_structured(Domain::LShapeBartels, 1);
    for (int step = 0; step < 12; ++step) {
        std::vector<int> marked;
        std::bernoulli_distribution pick(0.15);
        for (int t = 0; t < mesh.n_elements(); ++t)
            if (pick(rng)) marked.push_back(t);
        if (marked.empty()) marked.push_back(0);
        const Mesh next = refine_nvb(mesh, marked);
        CHECK(next.n_elements() >= mesh.n_elements() + static_cast<int>(marked.size()));
        CHECK(audit_conformity(next));
        CHECK(no_vertex_inside_an_edge(next));
        CHECK(std::abs(total_area(next) - domain_area(Domain::LShapeBartels)) <= 1e-12 * 12.0);
        // Every marked element lost its identity: no child has the parent's area.
        for (int t = 0; t < next.n_elements(); ++t) {
            const int p = next.parent()[static_cast<std::size_t>(t)];
            if (std::binary_search(marked.begin(), marked.end(), p))
                CHECK(element_geometry(next, t).area < element_geometry(mesh, p).area * (1 - 1e-12));
        }
        mesh = next;
    }
}

TEST_CASE("uniform refinement splits every element into four and keeps the shapes")
{
    Mesh mesh = create_structured(Domain::LShapeSmall, 1);
    const double kappa0 = shape_regularity(mesh);
    for (int level = 0; level < 6; ++level) {
        const Mesh fine = refine_uniform(mesh);
        REQUIRE(fine.n_elements() == 4 * mesh.n_elements());
        std::map<int, int> children;
        for (int t = 0; t < fine.n_elements(); ++t) {
            const int p = fine.parent()[static_cast<std::size_t>(t)];
            ++children[p];
            CHECK(element_geometry(fine, t).area == doctest::Approx(element_geometry(mesh, p).area / 4));
        }
        for (const auto& [p, n] : children) CHECK(n == 4);
        CHECK(shape_regularity(fine) <= 2.0 * kappa0);
        CHECK(audit_conformity(fine));
        mesh = fine;
    }
    const auto depth = bisection_depth(mesh, 0.5);
    CHECK(*std::min_element(depth.begin(), depth.end()) == 12);
    CHECK(*std::max_element(depth.begin(), depth.end()) == 12);
}

TEST_CASE("longest-edge refinement breaks ties by the smallest opposite vertex")
{
    // Right isosceles: the hypotenuse is opposite vertex 0.
    const auto ref = longest_edge_refinement({Point(0, 0), Point(1, 0), Point(0, 1)}, {{0, 1, 2}});
    CHECK(ref[0] == 0);
    // Equilateral: all edges tie, vertex 0 wins.
    const auto eq = longest_edge_refinement({Point(0, 0), Point(1, 0), Point(0.5, std::sqrt(0.75))}, {{0, 1, 2}});
    CHECK(eq[0] == 0);
}

TEST_CASE("mesh text format round trips")
{
    const Mesh mesh = refine_nvb(create_structured(Domain::UnitSquare, 2), {3});
    std::stringstream buffer;
    write_mesh(buffer, mesh);
    std::string header;
    std::getline(buffer, header);
    CHECK(header == std::to_string(mesh.n_vertices()) + " " + std::to_string(mesh.n_elements()));
    buffer.seekg(0);
    const Mesh back = read_mesh(buffer);
    CHECK(back.triangles() == mesh.triangles());
    CHECK(back.refinement_edge() == mesh.refinement_edge());
    CHECK(back.boundary_vertex() == mesh.boundary_vertex());
    for (int v = 0; v < mesh.n_vertices(); ++v) CHECK((back.vertex(v) - mesh.vertex(v)).norm() < 1e-15);
}
