#include "fols/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fols {

double ProblemSpec::beta() const
{
    if (default_beta > 0.0) return default_beta;
    const double d = diameter();
    return 1.0 + d * d;
}

double smooth_blend(double x)
{
    const double s = 4.0 * (x - 0.5);
    return 0.25 * (1.0 - 3.0 * s * s + 2.0 * s * s * s);
}

double smooth_blend_derivative(double x)
{
    const double s = 4.0 * (x - 0.5);
    return 6.0 * (s * s - s);
}

std::array<double, 3> lshape_cutoff(double r)
{
    const double rs = 2.0 * (r - 0.25);
    if (rs < 0.0) return {1.0, 0.0, 0.0};
    if (rs >= 1.0) return {0.0, 0.0, 0.0};
    const double rs2 = rs * rs;
    const double rs3 = rs2 * rs;
    const double value = -6.0 * rs3 * rs2 + 15.0 * rs2 * rs2 - 10.0 * rs3 + 1.0;
    const double d1 = -30.0 * rs2 * rs2 + 60.0 * rs3 - 30.0 * rs2;
    const double d2 = -120.0 * rs3 + 180.0 * rs2 - 60.0 * rs;
    return {value, 2.0 * d1, 4.0 * d2};
}

ProblemSpec example_smooth()
{
    ProblemSpec p;
    p.name = "smooth";
    p.domain = Domain::UnitSquare;
    p.initial_subdivisions = 4;

    auto bubble_laplacian = [](const Point& x) {
        return 2.0 * ((1.0 - x.x()) * x.x() + (1.0 - x.y()) * x.y());
    };
    p.f = [bubble_laplacian](const Point& x) { return x.x() < 0.5 ? 0.0 : bubble_laplacian(x); };
    p.g = [](const Point& x) {
        const double py = (1.0 - x.y()) * x.y();
        if (x.x() <= 0.5) return (1.0 - x.x()) * x.x() * py;
        if (x.x() < 0.75) return smooth_blend(x.x()) * py;
        return 0.0;
    };
    p.grad_g = [](const Point& x) -> Point {
        const double py = (1.0 - x.y()) * x.y();
        const double dpy = 1.0 - 2.0 * x.y();
        if (x.x() <= 0.5) {
            const double px = (1.0 - x.x()) * x.x();
            return {(1.0 - 2.0 * x.x()) * py, px * dpy};
        }
        if (x.x() < 0.75) return {smooth_blend_derivative(x.x()) * py, smooth_blend(x.x()) * dpy};
        return Point::Zero();
    };

    ExactSolution exact;
    exact.u = [](const Point& x) { return (1.0 - x.x()) * x.x() * (1.0 - x.y()) * x.y(); };
    exact.grad_u = [](const Point& x) -> Point {
        return {(1.0 - 2.0 * x.x()) * (1.0 - x.y()) * x.y(), (1.0 - x.x()) * x.x() * (1.0 - 2.0 * x.y())};
    };
    exact.lambda = [bubble_laplacian](const Point& x) { return x.x() < 0.5 ? bubble_laplacian(x) : 0.0; };
    p.exact = std::move(exact);
    return p;
}

namespace {

struct Polar {
    double r;
    double phi;   // angle measured from the positive y-axis, in [0, 3pi/2] on the L-shape
    double theta; // standard angle, continuous over the L-shape
};

Polar to_polar(const Point& x)
{
    double theta = std::atan2(x.y(), x.x());
    if (theta < 0.25 * std::numbers::pi) theta += 2.0 * std::numbers::pi;
    return {x.norm(), theta - 0.5 * std::numbers::pi, theta};
}

double jump(double r) { return r > 1.25 ? 1.0 : 0.0; }

} // namespace

ProblemSpec example_lshape_bartels()
{
    ProblemSpec p;
    p.name = "lshape";
    p.domain = Domain::LShapeBartels;
    p.default_beta = 3.0;
    p.initial_subdivisions = 4;

    p.f = [](const Point& x) {
        const auto [r, phi, theta] = to_polar(x);
        const auto [gamma, d1, d2] = lshape_cutoff(r);
        if (d1 == 0.0 && d2 == 0.0) return -jump(r);
        const double s = std::sin(2.0 * phi / 3.0);
        return -std::pow(r, 2.0 / 3.0) * s * (d1 / r + d2) - 4.0 / 3.0 * std::pow(r, -1.0 / 3.0) * d1 * s - jump(r);
    };
    p.g = [](const Point&) { return 0.0; };
    p.grad_g = [](const Point&) -> Point { return Point::Zero(); };

    ExactSolution exact;
    exact.u = [](const Point& x) {
        const auto [r, phi, theta] = to_polar(x);
        const double gamma = lshape_cutoff(r)[0];
        if (gamma == 0.0) return 0.0;
        return std::pow(r, 2.0 / 3.0) * std::sin(2.0 * phi / 3.0) * gamma;
    };
    exact.grad_u = [](const Point& x) -> Point {
        const auto [r, phi, theta] = to_polar(x);
        if (r == 0.0) return Point::Zero();
        const auto [gamma, d1, d2] = lshape_cutoff(r);
        if (gamma == 0.0 && d1 == 0.0) return Point::Zero();
        const double s = std::sin(2.0 * phi / 3.0);
        const double c = std::cos(2.0 * phi / 3.0);
        const double du_dr = 2.0 / 3.0 * std::pow(r, -1.0 / 3.0) * s * gamma + std::pow(r, 2.0 / 3.0) * s * d1;
        const double du_dphi_over_r = 2.0 / 3.0 * std::pow(r, -1.0 / 3.0) * c * gamma;
        const Point er(std::cos(theta), std::sin(theta));
        const Point etheta(-std::sin(theta), std::cos(theta));
        return du_dr * er + du_dphi_over_r * etheta;
    };
    // u vanishes wherever the jump is active, so -Laplace u - f reduces to the jump itself.
    exact.lambda = [](const Point& x) { return jump(x.norm()); };
    p.exact = std::move(exact);
    return p;
}

ProblemSpec example_pyramid()
{
    ProblemSpec p;
    p.name = "pyramid";
    p.domain = Domain::LShapeSmall;
    p.initial_subdivisions = 2;

    p.f = [](const Point&) { return 1.0; };
    // Unsigned distance to the boundary of (0,1)^2 inside the square, zero outside.
    p.g = [](const Point& x) {
        if (x.x() <= 0.0 || x.x() >= 1.0 || x.y() <= 0.0 || x.y() >= 1.0) return 0.0;
        const double d = std::min({x.x(), 1.0 - x.x(), x.y(), 1.0 - x.y()});
        return std::max(0.0, d - 0.25);
    };
    p.grad_g = [](const Point& x) -> Point {
        if (x.x() <= 0.0 || x.x() >= 1.0 || x.y() <= 0.0 || x.y() >= 1.0) return Point::Zero();
        const std::array<double, 4> dist{x.x(), 1.0 - x.x(), x.y(), 1.0 - x.y()};
        const std::array<Point, 4> grad{Point(1.0, 0.0), Point(-1.0, 0.0), Point(0.0, 1.0), Point(0.0, -1.0)};
        std::size_t best = 0;
        for (std::size_t i = 1; i < 4; ++i)
            if (dist[i] < dist[best]) best = i;
        if (dist[best] <= 0.25) return Point::Zero();
        return grad[best];
    };
    return p;
}

ProblemSpec example_by_name(std::string_view name)
{
    if (name == "smooth") return example_smooth();
    if (name == "lshape") return example_lshape_bartels();
    if (name == "pyramid") return example_pyramid();
    throw std::invalid_argument("unknown example: " + std::string(name) + " (expected smooth, lshape or pyramid)");
}

std::vector<std::string> example_names() { return {"smooth", "lshape", "pyramid"}; }

} // namespace fols
