#pragma once

#include <Eigen/Core>

#include <array>
#include <span>

namespace fols::quadrature {

/// Barycentric point and weight; weights sum to one (multiply by |T|).
struct TrianglePoint {
    Eigen::Vector3d barycentric;
    double weight;
};

/// Parameter on [0,1] along an edge; weights sum to one (multiply by |e|).
struct EdgePoint {
    double s;
    double weight;
};

namespace detail {

inline const std::array<TrianglePoint, 3>& degree2_rule()
{
    static const std::array<TrianglePoint, 3> rule{{
        {{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0}, 1.0 / 3.0},
        {{1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}, 1.0 / 3.0},
        {{1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}, 1.0 / 3.0},
    }};
    return rule;
}

// Radon's seven-point rule, exact for polynomials of degree five.
inline const std::array<TrianglePoint, 7>& degree5_rule()
{
    static const std::array<TrianglePoint, 7> rule = [] {
        const double s15 = 3.872983346207416885179265399782399611; // sqrt(15)
        const double a1 = (6.0 - s15) / 21.0;
        const double b1 = (9.0 + 2.0 * s15) / 21.0;
        const double a2 = (6.0 + s15) / 21.0;
        const double b2 = (9.0 - 2.0 * s15) / 21.0;
        const double w1 = (155.0 - s15) / 1200.0;
        const double w2 = (155.0 + s15) / 1200.0;
        return std::array<TrianglePoint, 7>{{
            {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 9.0 / 40.0},
            {{b1, a1, a1}, w1},
            {{a1, b1, a1}, w1},
            {{a1, a1, b1}, w1},
            {{b2, a2, a2}, w2},
            {{a2, b2, a2}, w2},
            {{a2, a2, b2}, w2},
        }};
    }();
    return rule;
}

inline const std::array<EdgePoint, 3>& gauss3_rule()
{
    static const std::array<EdgePoint, 3> rule = [] {
        const double r = 0.5 * 0.774596669241483377035853079956479922; // sqrt(3/5)/2
        return std::array<EdgePoint, 3>{{{0.5 - r, 5.0 / 18.0}, {0.5, 8.0 / 18.0}, {0.5 + r, 5.0 / 18.0}}};
    }();
    return rule;
}

} // namespace detail

/// Exact for products of lowest-order discrete functions.
inline std::span<const TrianglePoint> discrete() { return detail::degree2_rule(); }
/// Used for data terms (f, g, exact solutions).
inline std::span<const TrianglePoint> data() { return detail::degree5_rule(); }
/// Normal moments of vector fields along edges.
inline std::span<const EdgePoint> edge() { return detail::gauss3_rule(); }

} // namespace fols::quadrature
