#pragma once

#include <functional>
#include <optional>
#include <string>

#include "ratjac/solver.hpp"

namespace ratjac {

/// Population model kappa u'' = u' - u'^2 - u u' with u(0) = 0, u'(0) = u0.
/// u is the accumulated population; the population itself is u'.
struct VolterraParams {
    double kappa = 0.5;
    double u0 = 0.1;

    void validate() const;
};

/// Gas flow through a porous medium: u'' + 2x u' / sqrt(1 - kappa u) = 0
/// with u(0) = 1, u(inf) = 0.
struct KidderParams {
    double kappa = 0.5;

    void validate() const;
};

/// Accuracy of one solve against a reference. Failed solves carry
/// value = +inf and achieved = NaN.
struct CriterionResult {
    double value;
    double reference;
    double achieved;
    std::string detail;

    [[nodiscard]] bool failed() const;
    static CriterionResult failure(double reference, std::string detail);
};

ProblemSpec volterra_problem(const VolterraParams& params);

/// Closed-form peak of the population u' (TeBeest).
double tebeest_umax(const VolterraParams& params);

/// |u_max - max_x ũ'(x)| with the max located by a dense scan in the mapped
/// variable followed by golden-section refinement.
CriterionResult volterra_criterion(const Solution& solution, const RationalBasis& basis,
                                   const VolterraParams& params);

/// Location and value of the global maximum of ũ' (used by the criterion,
/// exposed for testing).
struct PeakLocation {
    double x;
    double value;
};
PeakLocation locate_peak(const Solution& solution, const RationalBasis& basis);

/// Multiplied-through form r = sqrt(1 - kappa u) u'' + 2x u'.
ProblemSpec kidder_problem(const KidderParams& params);

/// Tabulated initial slope u'(0) for kappa in {0.1, 0.3, 0.5, 0.9}.
std::optional<double> kidder_reference_slope(double kappa);

/// |reference_slope - ũ'(0)|.
CriterionResult kidder_criterion(const Solution& solution, const RationalBasis& basis,
                                 const KidderParams& params, double reference_slope);

using CriterionFn = std::function<CriterionResult(const Solution&, const RationalBasis&)>;

/// A problem bundled with its accuracy criterion, the unit that hpo and the
/// CLI run trials against.
struct Benchmark {
    std::string name;
    double kappa;
    double reference;
    ProblemSpec spec;
    CriterionFn criterion;
};

Benchmark volterra_benchmark(const VolterraParams& params);
/// Uses the built-in slope unless `reference_slope` is given; throws
/// ConfigError when kappa has no tabulated slope and none is supplied.
Benchmark kidder_benchmark(const KidderParams& params,
                           std::optional<double> reference_slope = std::nullopt);

}  // namespace ratjac
