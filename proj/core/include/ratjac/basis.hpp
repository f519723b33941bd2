#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ratjac {

/// Exponents of the Jacobi weight (1-t)^alpha (1+t)^beta.
struct JacobiParams {
    double alpha = 0.0;
    double beta = 0.0;

    /// Throws DomainError unless alpha > -1 and beta > -1.
    void validate() const;

    friend bool operator==(const JacobiParams&, const JacobiParams&) = default;
};

enum class KernelTag { Legendre, Chebyshev, Jacobi };

/// Polynomial family used as the basis kernel.
///
/// Legendre is Jacobi(0, 0) evaluated through its own three-term recurrence;
/// Chebyshev (first kind) always uses T_{n+1} = 2t T_n - T_{n-1}, never a
/// rescaled Jacobi(-1/2, -1/2).
class Kernel {
public:
    static Kernel legendre() { return Kernel(KernelTag::Legendre, {0.0, 0.0}); }
    static Kernel chebyshev() { return Kernel(KernelTag::Chebyshev, {-0.5, -0.5}); }
    static Kernel jacobi(JacobiParams params);

    [[nodiscard]] KernelTag tag() const noexcept { return tag_; }
    [[nodiscard]] const JacobiParams& params() const noexcept { return params_; }

    friend bool operator==(const Kernel&, const Kernel&) = default;

private:
    Kernel(KernelTag tag, JacobiParams params) : tag_(tag), params_(params) {}

    KernelTag tag_;
    JacobiParams params_;
};

/// Stable lowercase wire tag: "legendre", "chebyshev", "jacobi".
std::string_view kernel_tag(const Kernel& kernel);
/// Accepts "legendre" and "chebyshev"; anything else is a ConfigError.
Kernel parse_kernel(std::string_view tag);

/// Values of degrees 0..m at one point, plus optional derivatives with
/// respect to the polynomial argument t.
struct PolyValues {
    std::vector<double> values;
    std::vector<double> d1;  // empty unless requested
    std::vector<double> d2;  // empty unless requested
};

/// J_0..J_m of Jacobi(alpha, beta) at t. `derivatives` is 0, 1 or 2.
/// Throws NumericalOverflow if any entry is non-finite.
PolyValues eval_jacobi(const JacobiParams& params, std::size_t m, double t, int derivatives = 0);
PolyValues eval_legendre(std::size_t m, double t, int derivatives = 0);
PolyValues eval_chebyshev(std::size_t m, double t, int derivatives = 0);
PolyValues eval_kernel(const Kernel& kernel, std::size_t m, double t, int derivatives = 0);

/// Allocation-free variant used on hot paths. Fills `values.size()` degrees
/// (0..size-1); d1/d2 may be empty to skip them, otherwise they must have
/// the same size as `values`.
void eval_kernel_into(const Kernel& kernel, double t, std::span<double> values,
                      std::span<double> d1, std::span<double> d2);

/// The n roots of the degree-n polynomial of `kernel`, ascending and exactly
/// symmetric about zero. Legendre: Newton iteration from Chebyshev-angle
/// guesses. Chebyshev: closed form. General Jacobi is not supported.
std::vector<double> roots(const Kernel& kernel, std::size_t n);

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss rule for the kernel's weight on [-1, 1]
/// (1 for Legendre, 1/sqrt(1-t^2) for Chebyshev).
QuadratureRule gauss_weights(const Kernel& kernel, std::size_t n);

}  // namespace ratjac
