#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "ratjac/mapping.hpp"

namespace ratjac {

/// ũ(point) = value (derivative_order 0) or ũ'(point) = value (order 1).
/// A condition at infinity uses the t = 1 limit of the basis and must have
/// derivative_order 0.
struct Condition {
    double point = 0.0;
    bool at_infinity = false;
    int derivative_order = 0;
    double value = 0.0;

    static Condition value_at(double x, double v) { return {x, false, 0, v}; }
    static Condition slope_at(double x, double v) { return {x, false, 1, v}; }
    static Condition value_at_infinity(double v) { return {0.0, true, 0, v}; }

    void validate() const;
};

/// Local state of the trial solution at a collocation node.
struct State {
    double x;
    double u;
    double du;
    double d2u;
};

using ResidualFn = std::function<double(const State&)>;
/// (dr/du, dr/du', dr/du'').
using ResidualGradientFn = std::function<std::array<double, 3>(const State&)>;
/// Symmetric 3x3 Hessian of r in (u, u', u''), row-major.
using ResidualHessianFn = std::function<std::array<double, 9>(const State&)>;

struct ProblemSpec {
    std::string name;
    ResidualFn residual;
    ResidualGradientFn residual_jacobian;
    /// Optional. Without it the Newton matrix drops the second-order
    /// multiplier term and convergence degrades to linear.
    ResidualHessianFn residual_hessian;
    std::vector<Condition> conditions;
    /// Optional rough profile of the solution used to seed Newton.
    std::function<double(double)> initial_guess;
    /// Default collocation count is m + collocation_offset.
    int collocation_offset = 0;
};

enum class JacobianMode { Analytic, FiniteDifference };

struct SolverConfig {
    double gamma = 1e10;
    double newton_tol = 1e-12;
    std::size_t newton_max_iter = 50;
    double damping = 0.5;
    double min_step = 0x1p-30;
    /// 0 selects m + problem.collocation_offset.
    std::size_t n_collocation = 0;
    JacobianMode jacobian = JacobianMode::Analytic;

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Why newton_solve stopped. The two tolerance reasons count as converged.
///  ResidualTolerance  ||F|| <= newton_tol.
///  StepTolerance      the line search can no longer reduce ||F||, the
///                     collocation and condition rows are <= newton_tol and
///                     the Newton correction to (w, b) is <= newton_tol
///                     relative to (w, b); the remaining rows (which carry
///                     gamma e and G^T alpha) sit at their rounding floor.
enum class StopReason { ResidualTolerance, StepTolerance, LineSearchStall, IterationLimit };

struct Solution {
    std::vector<double> weights;  // length m
    double bias = 0.0;
    std::vector<double> slacks;       // e, length n
    std::vector<double> duals_alpha;  // length n
    std::vector<double> duals_beta;   // length d
    bool converged = false;
    StopReason stop_reason = StopReason::IterationLimit;
    double final_residual_norm = 0.0;
    std::size_t newton_iterations = 0;
    /// ||F|| at the start and after every accepted step.
    std::vector<double> residual_history;
};

/// Flat point of the KKT system: (w, b, e, alpha, beta).
struct KktState {
    std::vector<double> w;
    double b = 0.0;
    std::vector<double> e;
    std::vector<double> alpha;
    std::vector<double> beta;
};

/// Mapped roots of the kernel's degree-n polynomial, ascending.
std::vector<double> collocation_grid(const RationalBasis& basis, std::size_t n);

/// Effective collocation count for this problem/basis/config.
std::size_t collocation_count(const ProblemSpec& problem, const RationalBasis& basis,
                              const SolverConfig& config);

/// Gradient of the Lagrangian, stacked as [d/dw, d/db, d/de, d/dalpha, d/dbeta].
std::vector<double> kkt_residual(const ProblemSpec& problem, const RationalBasis& basis,
                                 const SolverConfig& config, const KktState& state);

/// Dense row-major Jacobian of kkt_residual.
std::vector<double> kkt_jacobian(const ProblemSpec& problem, const RationalBasis& basis,
                                 const SolverConfig& config, const KktState& state,
                                 JacobianMode mode);

/// Damped Newton on kkt_residual. Always returns a Solution unless the
/// residual cannot be evaluated at the seed (EvaluationError) or a Newton
/// matrix is singular (StepFailure).
Solution newton_solve(const ProblemSpec& problem, const RationalBasis& basis,
                      const SolverConfig& config);

struct Evaluation {
    double u;
    double du;
    double d2u;
};

Evaluation evaluate(const Solution& solution, const RationalBasis& basis, double x);

/// Signed violation ũ^(k)(point) - value of one condition.
double condition_violation(const Solution& solution, const RationalBasis& basis,
                           const Condition& condition);

}  // namespace ratjac
