#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "ratjac/basis.hpp"

namespace ratjac {

enum class MappingKind { Algebraic, Exponential, Logarithmic };

std::string_view mapping_tag(MappingKind kind);
MappingKind parse_mapping(std::string_view tag);

/// Map phi: [0, inf) -> [-1, 1) with length scale theta.
///   Algebraic    (x - theta) / (x + theta)
///   Exponential  1 - 2 exp(-x / theta)
///   Logarithmic  2 tanh(x / theta) - 1
class Mapping {
public:
    /// Throws DomainError unless theta is finite and positive.
    Mapping(MappingKind kind, double theta);

    [[nodiscard]] MappingKind kind() const noexcept { return kind_; }
    [[nodiscard]] double theta() const noexcept { return theta_; }

    friend bool operator==(const Mapping&, const Mapping&) = default;

private:
    MappingKind kind_;
    double theta_;
};

/// phi(x). Throws DomainError for x < 0 or non-finite x.
double forward(const Mapping& map, double x);
/// phi^{-1}(t) for t in [-1, 1). Throws DomainError for t >= 1 or t < -1.
double inverse(const Mapping& map, double t);

struct MapDerivatives {
    double first;
    double second;
};
MapDerivatives derivatives(const Mapping& map, double x);

/// m rational functions J_i(phi(x)), i = 0..m-1.
struct RationalBasis {
    Kernel kernel;
    Mapping map;
    std::size_t m;
};

/// Values and x-derivatives of the m rational basis functions.
struct BasisValues {
    std::vector<double> values;
    std::vector<double> d1x;
    std::vector<double> d2x;
};

BasisValues eval_rational(const RationalBasis& basis, double x);

/// The x -> infinity limit: values are J_i(1), both derivatives vanish.
BasisValues eval_rational_at_infinity(const RationalBasis& basis);

/// In-place evaluation; every span must have size m.
void eval_rational_into(const RationalBasis& basis, double x, std::span<double> values,
                        std::span<double> d1x, std::span<double> d2x);

}  // namespace ratjac
