#include "ratjac/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ratjac/error.hpp"

namespace ratjac {
namespace {

void require_finite(double t) {
    if (!std::isfinite(t)) {
        throw DomainError("polynomial argument is not finite");
    }
}

void check_spans(std::span<double> values, std::span<double> d1, std::span<double> d2) {
    if (values.empty()) {
        throw DomainError("at least one degree must be requested");
    }
    if ((!d1.empty() && d1.size() != values.size()) ||
        (!d2.empty() && d2.size() != values.size()) || (!d2.empty() && d1.empty())) {
        throw DomainError("derivative buffers must match the value buffer");
    }
}

// Three-term recurrences, carrying (value, d/dt, d2/dt2) through every step.

void legendre_into(double t, std::span<double> v, std::span<double> d1, std::span<double> d2) {
    const std::size_t count = v.size();
    v[0] = 1.0;
    if (!d1.empty()) d1[0] = 0.0;
    if (!d2.empty()) d2[0] = 0.0;
    if (count == 1) return;
    v[1] = t;
    if (!d1.empty()) d1[1] = 1.0;
    if (!d2.empty()) d2[1] = 0.0;
    for (std::size_t n = 1; n + 1 < count; ++n) {
        const double a = static_cast<double>(2 * n + 1);
        const double b = static_cast<double>(n);
        const double c = static_cast<double>(n + 1);
        v[n + 1] = (a * t * v[n] - b * v[n - 1]) / c;
        if (!d1.empty()) d1[n + 1] = (a * (v[n] + t * d1[n]) - b * d1[n - 1]) / c;
        if (!d2.empty()) d2[n + 1] = (a * (2.0 * d1[n] + t * d2[n]) - b * d2[n - 1]) / c;
    }
}

void chebyshev_into(double t, std::span<double> v, std::span<double> d1, std::span<double> d2) {
    const std::size_t count = v.size();
    v[0] = 1.0;
    if (!d1.empty()) d1[0] = 0.0;
    if (!d2.empty()) d2[0] = 0.0;
    if (count == 1) return;
    v[1] = t;
    if (!d1.empty()) d1[1] = 1.0;
    if (!d2.empty()) d2[1] = 0.0;
    for (std::size_t n = 1; n + 1 < count; ++n) {
        v[n + 1] = 2.0 * t * v[n] - v[n - 1];
        if (!d1.empty()) d1[n + 1] = 2.0 * v[n] + 2.0 * t * d1[n] - d1[n - 1];
        if (!d2.empty()) d2[n + 1] = 4.0 * d1[n] + 2.0 * t * d2[n] - d2[n - 1];
    }
}

// J_i = A_i J_{i-2} + (B_i + C_i t) J_{i-1}, i >= 2.
void jacobi_into(const JacobiParams& p, double t, std::span<double> v, std::span<double> d1,
                 std::span<double> d2) {
    const double al = p.alpha;
    const double be = p.beta;
    const std::size_t count = v.size();
    v[0] = 1.0;
    if (!d1.empty()) d1[0] = 0.0;
    if (!d2.empty()) d2[0] = 0.0;
    if (count > 1) {
        const double slope = 0.5 * (al + be + 2.0);
        v[1] = slope * t + 0.5 * (al - be);
        if (!d1.empty()) d1[1] = slope;
        if (!d2.empty()) d2[1] = 0.0;
    }
    for (std::size_t i = 2; i < count; ++i) {
        const double di = static_cast<double>(i);
        const double s = al + be + 2.0 * di;
        const double denom = di * (al + be + di) * (s - 2.0);
        const double A = -(al + di - 1.0) * (be + di - 1.0) * s / denom;
        const double B = (s - 1.0) * (al * al - be * be) / (2.0 * denom);
        const double C = (s - 1.0) * s * (s - 2.0) / (2.0 * denom);
        const double lin = B + C * t;
        v[i] = A * v[i - 2] + lin * v[i - 1];
        if (!d1.empty()) d1[i] = A * d1[i - 2] + C * v[i - 1] + lin * d1[i - 1];
        if (!d2.empty()) d2[i] = A * d2[i - 2] + 2.0 * C * d1[i - 1] + lin * d2[i - 1];
    }
}

PolyValues make_values(std::size_t m, int derivatives) {
    if (derivatives < 0 || derivatives > 2) {
        throw DomainError("derivative order must be 0, 1 or 2");
    }
    PolyValues out;
    out.values.resize(m + 1);
    if (derivatives >= 1) out.d1.resize(m + 1);
    if (derivatives >= 2) out.d2.resize(m + 1);
    return out;
}

bool all_finite(const PolyValues& pv) {
    auto finite = [](double x) { return std::isfinite(x); };
    return std::all_of(pv.values.begin(), pv.values.end(), finite) &&
           std::all_of(pv.d1.begin(), pv.d1.end(), finite) &&
           std::all_of(pv.d2.begin(), pv.d2.end(), finite);
}

// P_n(x) and P_n'(x) for Newton on the Legendre roots.
std::pair<double, double> legendre_with_derivative(std::size_t n, double x) {
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 1; k < n; ++k) {
        const double pk = (static_cast<double>(2 * k + 1) * x * p1 - static_cast<double>(k) * p0) /
                          static_cast<double>(k + 1);
        p0 = p1;
        p1 = pk;
    }
    // n >= 1 here and |x| < 1 strictly for every Newton iterate we accept.
    const double dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

// Fill the upper half from `positive` (descending, > 0) and mirror.
std::vector<double> symmetric_from_positive(const std::vector<double>& positive, std::size_t n) {
    std::vector<double> out(n);
    const std::size_t half = n / 2;
    for (std::size_t k = 0; k < half; ++k) {
        out[k] = -positive[k];
        out[n - 1 - k] = positive[k];
    }
    if (n % 2 == 1) out[half] = 0.0;
    return out;
}

std::vector<double> legendre_roots(std::size_t n) {
    constexpr double kTol = 1e-14;
    constexpr int kMaxIter = 100;
    const std::size_t half = n / 2;
    std::vector<double> positive(half);
    for (std::size_t k = 1; k <= half; ++k) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(k) - 0.25) /
                            (static_cast<double>(n) + 0.5));
        bool done = false;
        for (int it = 0; it < kMaxIter; ++it) {
            const auto [p, dp] = legendre_with_derivative(n, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) <= kTol) {
                done = true;
                break;
            }
        }
        if (!done || !std::isfinite(x)) {
            throw RootFinderError("Legendre root iteration did not converge for root " +
                                      std::to_string(k - 1) + " of degree " + std::to_string(n),
                                  k - 1);
        }
        positive[k - 1] = x;
    }
    return symmetric_from_positive(positive, n);
}

std::vector<double> chebyshev_roots(std::size_t n) {
    const std::size_t half = n / 2;
    std::vector<double> positive(half);
    for (std::size_t k = 1; k <= half; ++k) {
        positive[k - 1] = std::cos(static_cast<double>(2 * k - 1) * std::numbers::pi /
                                   static_cast<double>(2 * n));
    }
    return symmetric_from_positive(positive, n);
}

}  // namespace

void JacobiParams::validate() const {
    if (!(alpha > -1.0) || !(beta > -1.0)) {
        throw DomainError("Jacobi parameters require alpha > -1 and beta > -1");
    }
}

Kernel Kernel::jacobi(JacobiParams params) {
    params.validate();
    return Kernel(KernelTag::Jacobi, params);
}

std::string_view kernel_tag(const Kernel& kernel) {
    switch (kernel.tag()) {
        case KernelTag::Legendre: return "legendre";
        case KernelTag::Chebyshev: return "chebyshev";
        case KernelTag::Jacobi: return "jacobi";
    }
    return "unknown";
}

Kernel parse_kernel(std::string_view tag) {
    if (tag == "legendre") return Kernel::legendre();
    if (tag == "chebyshev") return Kernel::chebyshev();
    throw ConfigError("kernel: unknown tag '" + std::string(tag) + "' (expected legendre|chebyshev)");
}

void eval_kernel_into(const Kernel& kernel, double t, std::span<double> values,
                      std::span<double> d1, std::span<double> d2) {
    require_finite(t);
    check_spans(values, d1, d2);
    switch (kernel.tag()) {
        case KernelTag::Legendre: legendre_into(t, values, d1, d2); break;
        case KernelTag::Chebyshev: chebyshev_into(t, values, d1, d2); break;
        case KernelTag::Jacobi: jacobi_into(kernel.params(), t, values, d1, d2); break;
    }
}

PolyValues eval_jacobi(const JacobiParams& params, std::size_t m, double t, int derivatives) {
    params.validate();
    require_finite(t);
    PolyValues out = make_values(m, derivatives);
    jacobi_into(params, t, out.values, out.d1, out.d2);
    if (!all_finite(out)) {
        throw NumericalOverflow("Jacobi recurrence overflowed (alpha=" + std::to_string(params.alpha) +
                                ", beta=" + std::to_string(params.beta) + ")");
    }
    return out;
}

PolyValues eval_legendre(std::size_t m, double t, int derivatives) {
    require_finite(t);
    PolyValues out = make_values(m, derivatives);
    legendre_into(t, out.values, out.d1, out.d2);
    return out;
}

PolyValues eval_chebyshev(std::size_t m, double t, int derivatives) {
    require_finite(t);
    PolyValues out = make_values(m, derivatives);
    chebyshev_into(t, out.values, out.d1, out.d2);
    return out;
}

PolyValues eval_kernel(const Kernel& kernel, std::size_t m, double t, int derivatives) {
    switch (kernel.tag()) {
        case KernelTag::Legendre: return eval_legendre(m, t, derivatives);
        case KernelTag::Chebyshev: return eval_chebyshev(m, t, derivatives);
        case KernelTag::Jacobi: return eval_jacobi(kernel.params(), m, t, derivatives);
    }
    throw ConfigError("unknown kernel");
}

std::vector<double> roots(const Kernel& kernel, std::size_t n) {
    if (n == 0) {
        throw DomainError("roots: n must be at least 1");
    }
    switch (kernel.tag()) {
        case KernelTag::Legendre: return legendre_roots(n);
        case KernelTag::Chebyshev: return chebyshev_roots(n);
        case KernelTag::Jacobi: break;
    }
    throw ConfigError("roots: general Jacobi kernels are not supported");
}

QuadratureRule gauss_weights(const Kernel& kernel, std::size_t n) {
    QuadratureRule rule;
    rule.nodes = roots(kernel, n);
    rule.weights.resize(n);
    if (kernel.tag() == KernelTag::Chebyshev) {
        std::fill(rule.weights.begin(), rule.weights.end(), std::numbers::pi / static_cast<double>(n));
        return rule;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double x = rule.nodes[k];
        const double dp = legendre_with_derivative(n, x).second;
        rule.weights[k] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

}  // namespace ratjac
