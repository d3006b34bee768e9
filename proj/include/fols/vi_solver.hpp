#pragma once

#include "fols/assembly.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fols {

/// Discrete convex sets: nodal obstacle on u and sign of lambda (Ks), nodal
/// obstacle only (K0), sign of lambda only (K1).
enum class SetKind { Ks, K0, K1 };

SetKind parse_set(std::string_view name);
std::string_view set_name(SetKind kind);

/// Result of checking a (form, set, obstacle) combination against the table of
/// admissible discretizations.
struct ConfigCheck {
    bool ok = true;
    std::string reason;

    explicit operator bool() const { return ok; }
};

/// Admissible combinations:
///   (A, Ks): g in H^1_0 and continuous
///   (B, K0), (B, Ks): g in H^1 and continuous with g <= 0 on the boundary
///   (C, K1): g in H^1_0
///   (C, Ks): g in H^1_0 and continuous
ConfigCheck validate_config(Form form, SetKind set, const ObstacleTraits& traits);

/// Lower bounds x_i >= bound_i on a subset of dofs, sorted by dof index.
struct ConstraintSet {
    SetKind kind = SetKind::Ks;
    std::vector<int> dofs;
    std::vector<double> bounds;

    std::size_t size() const { return dofs.size(); }
    bool empty() const { return dofs.empty(); }
};

/// u-dofs get g at their vertex (for Ks, K0); lambda-dofs get 0 (for Ks, K1).
ConstraintSet build_constraints(const Mesh& mesh, const DofMap& dofs, SetKind kind, const ScalarField& g);

struct SolverOptions {
    int max_iterations = 100;
    double kkt_tolerance = 1e-9; ///< relative to 1 + ||F||_inf
    double c_pdas = 1.0;
};

struct VISolveReport {
    Eigen::VectorXd solution;
    Eigen::VectorXd multipliers; ///< on the constrained dofs, in constraint order
    int iterations = 0;
    int active_set_size = 0;
    double kkt_residual = 0.0;
};

class NonConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularSubsystem : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Solves  find x with x_i >= c_i on constrained dofs and
///   (A x - F)_j = 0 on free dofs, (A x - F)_i >= 0, (A x - F)_i (x_i - c_i) = 0
/// by a primal-dual active-set iteration.
VISolveReport solve_vi(const SparseOperator& op, const Eigen::VectorXd& load, const ConstraintSet& constraints,
                       const SolverOptions& options = {});

/// max(||r_free||_inf, max_i |min(r_i, x_i - c_i)|) with r = A x - F.
double kkt_residual(const SparseMatrix& matrix, const Eigen::VectorXd& load, const ConstraintSet& constraints,
                    const Eigen::VectorXd& x);

} // namespace fols
