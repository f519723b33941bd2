#include "ratjac/mapping.hpp"

#include <cmath>
#include <string>

#include "ratjac/error.hpp"

namespace ratjac {
namespace {

void check_x(double x) {
    if (!std::isfinite(x) || x < 0.0) {
        throw DomainError("mapping argument must be finite and non-negative, got " + std::to_string(x));
    }
}

double sech2(double z) {
    // 1/cosh^2 underflows gracefully to 0 for large z.
    const double c = std::cosh(z);
    return 1.0 / (c * c);
}

}  // namespace

std::string_view mapping_tag(MappingKind kind) {
    switch (kind) {
        case MappingKind::Algebraic: return "algebraic";
        case MappingKind::Exponential: return "exponential";
        case MappingKind::Logarithmic: return "logarithmic";
    }
    return "unknown";
}

MappingKind parse_mapping(std::string_view tag) {
    if (tag == "algebraic") return MappingKind::Algebraic;
    if (tag == "exponential") return MappingKind::Exponential;
    if (tag == "logarithmic") return MappingKind::Logarithmic;
    throw ConfigError("mapping: unknown tag '" + std::string(tag) +
                      "' (expected algebraic|exponential|logarithmic)");
}

Mapping::Mapping(MappingKind kind, double theta) : kind_(kind), theta_(theta) {
    if (!std::isfinite(theta) || !(theta > 0.0)) {
        throw DomainError("mapping length scale theta must be positive, got " + std::to_string(theta));
    }
}

double forward(const Mapping& map, double x) {
    check_x(x);
    const double th = map.theta();
    switch (map.kind()) {
        case MappingKind::Algebraic: return (x - th) / (x + th);
        case MappingKind::Exponential: return 1.0 - 2.0 * std::exp(-x / th);
        case MappingKind::Logarithmic: return 2.0 * std::tanh(x / th) - 1.0;
    }
    return 0.0;
}

double inverse(const Mapping& map, double t) {
    if (!(t >= -1.0)) {
        throw DomainError("inverse mapping needs t >= -1, got " + std::to_string(t));
    }
    if (!(t < 1.0)) {
        throw DomainError("inverse mapping of t >= 1 lies at infinity");
    }
    const double th = map.theta();
    switch (map.kind()) {
        case MappingKind::Algebraic: return th * (1.0 + t) / (1.0 - t);
        // + 0.0 turns the -0 produced at t = -1 into +0.
        case MappingKind::Exponential: return -th * std::log(0.5 * (1.0 - t)) + 0.0;
        case MappingKind::Logarithmic: {
            // atanh(s) = 0.5 log((1+s)/(1-s)) with s = (1+t)/2, so 1-s = (1-t)/2
            // is formed without cancellation as t -> 1.
            const double s = 0.5 * (1.0 + t);
            return 0.5 * th * std::log((1.0 + s) / (0.5 * (1.0 - t)));
        }
    }
    return 0.0;
}

MapDerivatives derivatives(const Mapping& map, double x) {
    check_x(x);
    const double th = map.theta();
    switch (map.kind()) {
        case MappingKind::Algebraic: {
            const double d = x + th;
            return {2.0 * th / (d * d), -4.0 * th / (d * d * d)};
        }
        case MappingKind::Exponential: {
            const double e = std::exp(-x / th);
            return {2.0 / th * e, -2.0 / (th * th) * e};
        }
        case MappingKind::Logarithmic: {
            const double z = x / th;
            const double s2 = sech2(z);
            return {2.0 / th * s2, -4.0 / (th * th) * s2 * std::tanh(z)};
        }
    }
    return {0.0, 0.0};
}

void eval_rational_into(const RationalBasis& basis, double x, std::span<double> values,
                        std::span<double> d1x, std::span<double> d2x) {
    const double t = forward(basis.map, x);
    const auto [p1, p2] = derivatives(basis.map, x);
    // d1x/d2x first receive dJ/dt and d2J/dt2, then get the chain rule in place.
    eval_kernel_into(basis.kernel, t, values, d1x, d2x);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double jt = d1x[i];
        const double jtt = d2x[i];
        d1x[i] = jt * p1;
        d2x[i] = jtt * p1 * p1 + jt * p2;
    }
}

BasisValues eval_rational(const RationalBasis& basis, double x) {
    if (basis.m == 0) {
        throw DomainError("rational basis needs m >= 1");
    }
    BasisValues out{std::vector<double>(basis.m), std::vector<double>(basis.m),
                    std::vector<double>(basis.m)};
    eval_rational_into(basis, x, out.values, out.d1x, out.d2x);
    return out;
}

BasisValues eval_rational_at_infinity(const RationalBasis& basis) {
    if (basis.m == 0) {
        throw DomainError("rational basis needs m >= 1");
    }
    BasisValues out{std::vector<double>(basis.m), std::vector<double>(basis.m, 0.0),
                    std::vector<double>(basis.m, 0.0)};
    eval_kernel_into(basis.kernel, 1.0, out.values, {}, {});
    return out;
}

}  // namespace ratjac
