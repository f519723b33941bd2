#include "ratjac/problems.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <vector>

#include "ratjac/error.hpp"

namespace ratjac {
namespace {

constexpr std::size_t kScanPoints = 4096;
constexpr double kScanLastT = 0.9999;
constexpr double kGoldenTol = 1e-12;

// Seed profile for the population model: the initial-value problem
// integrated once with an adaptive Dormand-Prince scheme, then read back by
// cubic Hermite interpolation (u and u' are both stored). Past the last
// stored point the profile is held at its final value.
class VolterraProfile {
public:
    explicit VolterraProfile(const VolterraParams& p) {
        namespace odeint = boost::numeric::odeint;
        using StateT = std::array<double, 2>;
        const double kappa = p.kappa;
        auto rhs = [kappa](const StateT& y, StateT& dy, double /*x*/) {
            dy[0] = y[1];
            dy[1] = (y[1] - y[1] * y[1] - y[0] * y[1]) / kappa;
        };
        StateT y{0.0, p.u0};
        auto stepper = odeint::make_dense_output(1e-12, 1e-10, odeint::runge_kutta_dopri5<StateT>());
        odeint::integrate_adaptive(stepper, rhs, y, 0.0, kHorizon, 1e-4 * kappa,
                                   [this](const StateT& s, double x) {
                                       xs_.push_back(x);
                                       u_.push_back(s[0]);
                                       du_.push_back(s[1]);
                                   });
    }

    double operator()(double x) const {
        if (x <= xs_.front()) return u_.front();
        if (x >= xs_.back()) return u_.back();
        const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
        const double h = xs_[i + 1] - xs_[i];
        const double s = (x - xs_[i]) / h;
        const double s2 = s * s;
        const double s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * u_[i] + (s3 - 2 * s2 + s) * h * du_[i] +
               (-2 * s3 + 3 * s2) * u_[i + 1] + (s3 - s2) * h * du_[i + 1];
    }

private:
    static constexpr double kHorizon = 400.0;
    std::vector<double> xs_, u_, du_;
};

struct KidderTableEntry {
    double kappa;
    double slope;
};
constexpr std::array<KidderTableEntry, 4> kKidderSlopes{{
    {0.1, -1.13900720617830},
    {0.3, -1.16294145829591},
    {0.5, -1.19179064971942},
    {0.9, -1.28188132220336},
}};

double kidder_root(double kappa, const State& s) {
    const double q = 1.0 - kappa * s.u;
    if (!(q > 0.0)) {
        throw EvaluationError("1 - kappa*u is not positive at x = " + std::to_string(s.x), s.x);
    }
    return std::sqrt(q);
}

}  // namespace

void VolterraParams::validate() const {
    if (!std::isfinite(kappa) || !(kappa > 0.0)) throw ConfigError("kappa must be positive");
    if (!(u0 > 0.0 && u0 < 1.0)) throw ConfigError("u0 must lie in (0, 1)");
}

void KidderParams::validate() const {
    if (!(kappa > 0.0 && kappa < 1.0)) throw ConfigError("kappa must lie in (0, 1)");
}

bool CriterionResult::failed() const { return std::isinf(value); }

CriterionResult CriterionResult::failure(double reference, std::string detail) {
    return {std::numeric_limits<double>::infinity(), reference,
            std::numeric_limits<double>::quiet_NaN(), std::move(detail)};
}

ProblemSpec volterra_problem(const VolterraParams& params) {
    params.validate();
    const double k = params.kappa;
    ProblemSpec spec;
    spec.name = "volterra";
    spec.residual = [k](const State& s) {
        return k * s.d2u - s.du + s.du * s.du + s.u * s.du;
    };
    spec.residual_jacobian = [k](const State& s) {
        return std::array<double, 3>{s.du, -1.0 + 2.0 * s.du + s.u, k};
    };
    spec.residual_hessian = [](const State&) {
        return std::array<double, 9>{0.0, 1.0, 0.0,
                                     1.0, 2.0, 0.0,
                                     0.0, 0.0, 0.0};
    };
    spec.conditions = {Condition::value_at(0.0, 0.0), Condition::slope_at(0.0, params.u0)};
    auto profile = std::make_shared<const VolterraProfile>(params);
    spec.initial_guess = [profile](double x) { return (*profile)(x); };
    spec.collocation_offset = 0;
    return spec;
}

double tebeest_umax(const VolterraParams& params) {
    params.validate();
    const double arg = params.kappa / (1.0 + params.kappa - params.u0);
    if (!(arg > 0.0)) throw DomainError("TeBeest logarithm argument is not positive");
    return 1.0 + params.kappa * std::log(arg);
}

PeakLocation locate_peak(const Solution& solution, const RationalBasis& basis) {
    if (solution.weights.size() != basis.m) {
        throw DomainError("solution and basis sizes differ");
    }
    std::vector<double> v(basis.m), d1(basis.m), d2(basis.m);
    auto slope = [&](double x) {
        eval_rational_into(basis, x, v, d1, d2);
        double du = 0.0;
        for (std::size_t i = 0; i < basis.m; ++i) du += solution.weights[i] * d1[i];
        return du;
    };

    std::vector<double> xs(kScanPoints);
    std::size_t best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < kScanPoints; ++j) {
        const double t = -1.0 + (kScanLastT + 1.0) * static_cast<double>(j) /
                                    static_cast<double>(kScanPoints - 1);
        xs[j] = inverse(basis.map, t);
        const double val = slope(xs[j]);
        if (val > best_val) {
            best_val = val;
            best = j;
        }
    }

    double a = xs[best == 0 ? 0 : best - 1];
    double b = xs[std::min(best + 1, kScanPoints - 1)];
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = slope(c);
    double fd = slope(d);
    while (b - a > kGoldenTol * std::max(1.0, std::abs(a))) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = slope(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = slope(d);
        }
    }
    const double xm = 0.5 * (a + b);
    const double fm = slope(xm);
    if (fm >= best_val) return {xm, fm};
    return {xs[best], best_val};
}

CriterionResult volterra_criterion(const Solution& solution, const RationalBasis& basis,
                                   const VolterraParams& params) {
    const double ref = tebeest_umax(params);
    if (!solution.converged) return CriterionResult::failure(ref, "solve did not converge");
    const PeakLocation peak = locate_peak(solution, basis);
    if (!std::isfinite(peak.value)) return CriterionResult::failure(ref, "non-finite peak");
    return {std::abs(ref - peak.value), ref, peak.value,
            "peak of u' at x = " + std::to_string(peak.x)};
}

ProblemSpec kidder_problem(const KidderParams& params) {
    params.validate();
    const double k = params.kappa;
    ProblemSpec spec;
    spec.name = "kidder";
    spec.residual = [k](const State& s) { return kidder_root(k, s) * s.d2u + 2.0 * s.x * s.du; };
    spec.residual_jacobian = [k](const State& s) {
        const double r = kidder_root(k, s);
        return std::array<double, 3>{-k * s.d2u / (2.0 * r), 2.0 * s.x, r};
    };
    spec.residual_hessian = [k](const State& s) {
        const double r = kidder_root(k, s);
        const double uu = -k * k * s.d2u / (4.0 * r * r * r);
        const double uw = -k / (2.0 * r);
        return std::array<double, 9>{uu, 0.0, uw,
                                     0.0, 0.0, 0.0,
                                     uw, 0.0, 0.0};
    };
    spec.conditions = {Condition::value_at(0.0, 1.0), Condition::value_at_infinity(0.0)};
    // kappa = 0 reduces the equation to u'' + 2x u' = 0, solved by erfc.
    spec.initial_guess = [](double x) { return std::erfc(x); };
    spec.collocation_offset = -static_cast<int>(spec.conditions.size());
    return spec;
}

std::optional<double> kidder_reference_slope(double kappa) {
    for (const auto& e : kKidderSlopes) {
        if (std::abs(e.kappa - kappa) <= 1e-12) return e.slope;
    }
    return std::nullopt;
}

CriterionResult kidder_criterion(const Solution& solution, const RationalBasis& basis,
                                 const KidderParams& params, double reference_slope) {
    params.validate();
    if (!solution.converged) {
        return CriterionResult::failure(reference_slope, "solve did not converge");
    }
    const double slope = evaluate(solution, basis, 0.0).du;
    if (!std::isfinite(slope)) return CriterionResult::failure(reference_slope, "non-finite slope");
    return {std::abs(reference_slope - slope), reference_slope, slope, "u'(0)"};
}

Benchmark volterra_benchmark(const VolterraParams& params) {
    Benchmark bm{"volterra", params.kappa, tebeest_umax(params), volterra_problem(params), {}};
    bm.criterion = [params](const Solution& s, const RationalBasis& b) {
        return volterra_criterion(s, b, params);
    };
    return bm;
}

Benchmark kidder_benchmark(const KidderParams& params, std::optional<double> reference_slope) {
    params.validate();
    if (!reference_slope) reference_slope = kidder_reference_slope(params.kappa);
    if (!reference_slope) {
        throw ConfigError("kappa: no tabulated Kidder slope for kappa = " +
                          std::to_string(params.kappa) + " (tabulated: 0.1, 0.3, 0.5, 0.9)");
    }
    const double ref = *reference_slope;
    Benchmark bm{"kidder", params.kappa, ref, kidder_problem(params), {}};
    bm.criterion = [params, ref](const Solution& s, const RationalBasis& b) {
        return kidder_criterion(s, b, params, ref);
    };
    return bm;
}

}  // namespace ratjac
