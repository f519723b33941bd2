#include "ratjac/solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "ratjac/error.hpp"

namespace ratjac {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kFdStep = 1e-7;
constexpr std::size_t kSeedSamples = 300;
constexpr double kSeedLastT = 0.999;

std::string node_message(const std::string& what, double x) {
    return what + " at x = " + std::to_string(x);
}

// Discretized KKT system for one (problem, basis, n). Unknowns are packed as
// z = [w (m), b, e (n), alpha (n), beta (d)].
class System {
public:
    System(const ProblemSpec& problem, const RationalBasis& basis, const SolverConfig& config)
        : problem_(problem), basis_(basis), config_(config) {
        if (basis.m == 0) throw DomainError("rational basis needs m >= 1");
        if (!problem.residual || !problem.residual_jacobian) {
            throw ConfigError("problem '" + problem.name + "' lacks residual callbacks");
        }
        config.validate();
        m_ = basis.m;
        p_ = m_ + 1;
        n_ = collocation_count(problem, basis, config);
        d_ = problem.conditions.size();
        size_ = p_ + 2 * n_ + d_;

        nodes_ = collocation_grid(basis, n_);
        A0_.resize(n_, p_);
        A1_.resize(n_, p_);
        A2_.resize(n_, p_);
        for (std::size_t k = 0; k < n_; ++k) {
            const BasisValues bv = eval_rational(basis, nodes_[k]);
            for (std::size_t i = 0; i < m_; ++i) {
                A0_(k, i) = bv.values[i];
                A1_(k, i) = bv.d1x[i];
                A2_(k, i) = bv.d2x[i];
            }
            A0_(k, m_) = 1.0;
            A1_(k, m_) = 0.0;
            A2_(k, m_) = 0.0;
        }

        C_.resize(d_, p_);
        cv_.resize(d_);
        for (std::size_t j = 0; j < d_; ++j) {
            const Condition& c = problem.conditions[j];
            c.validate();
            C_.row(j) = condition_row(c).transpose();
            cv_(j) = c.value;
        }
        reg_ = VectorXd::Ones(p_);
        reg_(m_) = 0.0;
    }

    [[nodiscard]] std::size_t size() const { return size_; }
    [[nodiscard]] std::size_t m() const { return m_; }
    [[nodiscard]] std::size_t n() const { return n_; }
    [[nodiscard]] std::size_t d() const { return d_; }

    VectorXd condition_row(const Condition& c) const {
        VectorXd row(p_);
        const BasisValues bv =
            c.at_infinity ? eval_rational_at_infinity(basis_) : eval_rational(basis_, c.point);
        const auto& src = c.derivative_order == 0 ? bv.values : bv.d1x;
        for (std::size_t i = 0; i < m_; ++i) row(i) = src[i];
        row(m_) = c.derivative_order == 0 ? 1.0 : 0.0;
        return row;
    }

    VectorXd residual(const VectorXd& z) const {
        const auto wb = z.head(p_);
        const auto e = z.segment(p_, n_);
        const auto al = z.segment(p_ + n_, n_);
        const auto be = z.tail(d_);

        const VectorXd U = A0_ * wb;
        const VectorXd U1 = A1_ * wb;
        const VectorXd U2 = A2_ * wb;
        VectorXd R(n_);
        MatrixXd G(n_, p_);
        for (std::size_t k = 0; k < n_; ++k) {
            const State s{nodes_[k], U(k), U1(k), U2(k)};
            R(k) = problem_.residual(s);
            const auto g = problem_.residual_jacobian(s);
            if (!std::isfinite(R(k)) || !std::isfinite(g[0]) || !std::isfinite(g[1]) ||
                !std::isfinite(g[2])) {
                throw EvaluationError(node_message("non-finite residual", nodes_[k]), nodes_[k]);
            }
            G.row(k) = g[0] * A0_.row(k) + g[1] * A1_.row(k) + g[2] * A2_.row(k);
        }

        VectorXd F(size_);
        F.head(p_) = reg_.cwiseProduct(wb) - G.transpose() * al - C_.transpose() * be;
        F.segment(p_, n_) = config_.gamma * e + al;
        F.segment(p_ + n_, n_) = -(R - e);
        F.tail(d_) = -(C_ * wb - cv_);
        return F;
    }

    MatrixXd jacobian(const VectorXd& z) const {
        const auto wb = z.head(p_);
        const auto al = z.segment(p_ + n_, n_);
        const VectorXd U = A0_ * wb;
        const VectorXd U1 = A1_ * wb;
        const VectorXd U2 = A2_ * wb;

        MatrixXd G(n_, p_);
        MatrixXd Hs = MatrixXd::Zero(p_, p_);
        MatrixXd Bk(3, p_);
        for (std::size_t k = 0; k < n_; ++k) {
            const State s{nodes_[k], U(k), U1(k), U2(k)};
            const auto g = problem_.residual_jacobian(s);
            G.row(k) = g[0] * A0_.row(k) + g[1] * A1_.row(k) + g[2] * A2_.row(k);
            if (problem_.residual_hessian && al(k) != 0.0) {
                const auto h = problem_.residual_hessian(s);
                const Eigen::Matrix3d H = Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(h.data());
                Bk.row(0) = A0_.row(k);
                Bk.row(1) = A1_.row(k);
                Bk.row(2) = A2_.row(k);
                Hs.noalias() += al(k) * (Bk.transpose() * (H * Bk));
            }
        }
        if (!G.allFinite() || !Hs.allFinite()) {
            throw EvaluationError("non-finite residual linearization", nodes_.front());
        }

        const std::size_t ie = p_;
        const std::size_t ia = p_ + n_;
        const std::size_t ib = p_ + 2 * n_;
        MatrixXd K = MatrixXd::Zero(size_, size_);
        K.block(0, 0, p_, p_) = MatrixXd(reg_.asDiagonal()) - Hs;
        K.block(0, ia, p_, n_) = -G.transpose();
        K.block(0, ib, p_, d_) = -C_.transpose();
        K.block(ie, ie, n_, n_).diagonal().setConstant(config_.gamma);
        K.block(ie, ia, n_, n_).diagonal().setOnes();
        K.block(ia, 0, n_, p_) = -G;
        K.block(ia, ie, n_, n_).diagonal().setOnes();
        K.block(ib, 0, d_, p_) = -C_;
        return K;
    }

    MatrixXd fd_jacobian(const VectorXd& z) const {
        MatrixXd K(size_, size_);
        VectorXd zp = z;
        for (std::size_t j = 0; j < size_; ++j) {
            const double h = kFdStep * std::max(1.0, std::abs(z(j)));
            zp(j) = z(j) + h;
            const VectorXd fp = residual(zp);
            zp(j) = z(j) - h;
            const VectorXd fm = residual(zp);
            zp(j) = z(j);
            K.col(j) = (fp - fm) / (2.0 * h);
        }
        return K;
    }

    MatrixXd jacobian(const VectorXd& z, JacobianMode mode) const {
        return mode == JacobianMode::Analytic ? jacobian(z) : fd_jacobian(z);
    }

    // Seed for (w, b): least-squares fit of the problem's profile on a dense
    // mapped grid with the conditions imposed exactly; without a profile, the
    // minimum-norm solution of the conditions alone.
    VectorXd seed() const {
        VectorXd y0 = VectorXd::Zero(p_);
        MatrixXd Z = MatrixXd::Identity(p_, p_);
        if (d_ > 0) {
            Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(C_);
            y0 = cod.solve(cv_);
            Eigen::ColPivHouseholderQR<MatrixXd> qr(C_.transpose());
            const MatrixXd Q = qr.householderQ();
            Z = Q.rightCols(p_ - static_cast<Eigen::Index>(qr.rank()));
        }
        if (!problem_.initial_guess || Z.cols() == 0) return y0;

        MatrixXd B(kSeedSamples, p_);
        VectorXd g(kSeedSamples);
        std::vector<double> vals(m_), d1(m_), d2(m_);
        for (std::size_t j = 0; j < kSeedSamples; ++j) {
            const double t = -1.0 + (kSeedLastT + 1.0) * static_cast<double>(j) /
                                        static_cast<double>(kSeedSamples - 1);
            const double x = inverse(basis_.map, t);
            eval_rational_into(basis_, x, vals, d1, d2);
            for (std::size_t i = 0; i < m_; ++i) B(j, i) = vals[i];
            B(j, m_) = 1.0;
            g(j) = problem_.initial_guess(x);
        }
        const MatrixXd BZ = B * Z;
        const VectorXd s = BZ.completeOrthogonalDecomposition().solve(g - B * y0);
        return y0 + Z * s;
    }

    VectorXd pack(const KktState& st) const {
        if (st.w.size() != m_ || st.e.size() != n_ || st.alpha.size() != n_ || st.beta.size() != d_) {
            throw DomainError("KKT state dimensions do not match the discretization (m=" +
                              std::to_string(m_) + ", n=" + std::to_string(n_) +
                              ", d=" + std::to_string(d_) + ")");
        }
        VectorXd z(size_);
        for (std::size_t i = 0; i < m_; ++i) z(i) = st.w[i];
        z(m_) = st.b;
        for (std::size_t k = 0; k < n_; ++k) {
            z(p_ + k) = st.e[k];
            z(p_ + n_ + k) = st.alpha[k];
        }
        for (std::size_t j = 0; j < d_; ++j) z(p_ + 2 * n_ + j) = st.beta[j];
        return z;
    }

    void unpack(const VectorXd& z, Solution& out) const {
        out.weights.assign(z.data(), z.data() + m_);
        out.bias = z(m_);
        out.slacks.assign(z.data() + p_, z.data() + p_ + n_);
        out.duals_alpha.assign(z.data() + p_ + n_, z.data() + p_ + 2 * n_);
        out.duals_beta.assign(z.data() + p_ + 2 * n_, z.data() + size_);
    }

private:
    const ProblemSpec& problem_;
    RationalBasis basis_;
    SolverConfig config_;
    std::size_t m_ = 0, p_ = 0, n_ = 0, d_ = 0, size_ = 0;
    std::vector<double> nodes_;
    MatrixXd A0_, A1_, A2_, C_;
    VectorXd cv_, reg_;
};

std::vector<double> to_std(const VectorXd& v) { return {v.data(), v.data() + v.size()}; }

std::vector<double> to_std_rowmajor(const MatrixXd& K) {
    std::vector<double> out(static_cast<std::size_t>(K.size()));
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        out.data(), K.rows(), K.cols()) = K;
    return out;
}

}  // namespace

void Condition::validate() const {
    if (derivative_order != 0 && derivative_order != 1) {
        throw ConfigError("condition derivative_order must be 0 or 1");
    }
    if (at_infinity && derivative_order != 0) {
        throw ConfigError("a condition at infinity must constrain the value");
    }
    if (!at_infinity && (!std::isfinite(point) || point < 0.0)) {
        throw ConfigError("condition point must be finite and non-negative");
    }
    if (!std::isfinite(value)) throw ConfigError("condition value must be finite");
}

void SolverConfig::validate() const {
    if (!std::isfinite(gamma) || !(gamma > 0.0)) throw ConfigError("gamma must be positive");
    if (!std::isfinite(newton_tol) || !(newton_tol > 0.0)) {
        throw ConfigError("newton_tol must be positive");
    }
    if (!(damping > 0.0 && damping < 1.0)) throw ConfigError("damping must lie in (0, 1)");
    if (!(min_step > 0.0 && min_step <= 1.0)) throw ConfigError("min_step must lie in (0, 1]");
}

std::vector<double> collocation_grid(const RationalBasis& basis, std::size_t n) {
    std::vector<double> xs = roots(basis.kernel, n);
    for (double& x : xs) x = inverse(basis.map, x);
    return xs;
}

std::size_t collocation_count(const ProblemSpec& problem, const RationalBasis& basis,
                              const SolverConfig& config) {
    if (config.n_collocation > 0) return config.n_collocation;
    const long long n = static_cast<long long>(basis.m) + problem.collocation_offset;
    if (n < 1) {
        throw ConfigError("collocation count m + offset must be at least 1 for problem '" +
                          problem.name + "'");
    }
    return static_cast<std::size_t>(n);
}

std::vector<double> kkt_residual(const ProblemSpec& problem, const RationalBasis& basis,
                                 const SolverConfig& config, const KktState& state) {
    const System sys(problem, basis, config);
    return to_std(sys.residual(sys.pack(state)));
}

std::vector<double> kkt_jacobian(const ProblemSpec& problem, const RationalBasis& basis,
                                 const SolverConfig& config, const KktState& state,
                                 JacobianMode mode) {
    const System sys(problem, basis, config);
    return to_std_rowmajor(sys.jacobian(sys.pack(state), mode));
}

Solution newton_solve(const ProblemSpec& problem, const RationalBasis& basis,
                      const SolverConfig& config) {
    const System sys(problem, basis, config);

    VectorXd z = VectorXd::Zero(static_cast<Eigen::Index>(sys.size()));
    z.head(static_cast<Eigen::Index>(sys.m() + 1)) = sys.seed();

    VectorXd F = sys.residual(z);
    double norm = F.norm();
    Solution out;
    out.residual_history.push_back(norm);

    const auto p = static_cast<Eigen::Index>(sys.m() + 1);
    const auto primal_rows = static_cast<Eigen::Index>(sys.n() + sys.d());
    out.stop_reason = StopReason::IterationLimit;
    while (true) {
        if (norm <= config.newton_tol) {
            out.stop_reason = StopReason::ResidualTolerance;
            break;
        }
        if (out.newton_iterations >= config.newton_max_iter) break;

        const MatrixXd K = sys.jacobian(z, config.jacobian);
        const VectorXd dz = Eigen::PartialPivLU<MatrixXd>(K).solve(-F);
        if (!dz.allFinite()) {
            throw StepFailure("singular Newton matrix at iteration " +
                              std::to_string(out.newton_iterations));
        }

        bool accepted = false;
        VectorXd trial;
        VectorXd Ft;
        for (double step = 1.0; step >= config.min_step; step *= config.damping) {
            trial = z + step * dz;
            try {
                Ft = sys.residual(trial);
            } catch (const EvaluationError&) {
                continue;
            }
            if (Ft.allFinite() && Ft.norm() < norm) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // No decrease down to the minimum step. That is the normal end
            // when ||F|| has hit its rounding floor above newton_tol; it is
            // accepted only if the primal part is settled.
            const double wb_scale = std::max(1.0, z.head(p).lpNorm<Eigen::Infinity>());
            const bool settled =
                F.tail(primal_rows).norm() <= config.newton_tol &&
                dz.head(p).lpNorm<Eigen::Infinity>() <= config.newton_tol * wb_scale;
            out.stop_reason = settled ? StopReason::StepTolerance : StopReason::LineSearchStall;
            break;
        }

        z = std::move(trial);
        F = std::move(Ft);
        norm = F.norm();
        ++out.newton_iterations;
        out.residual_history.push_back(norm);
    }

    sys.unpack(z, out);
    out.final_residual_norm = norm;
    out.converged = out.stop_reason == StopReason::ResidualTolerance ||
                    out.stop_reason == StopReason::StepTolerance;
    return out;
}

Evaluation evaluate(const Solution& solution, const RationalBasis& basis, double x) {
    if (solution.weights.size() != basis.m) {
        throw DomainError("solution has " + std::to_string(solution.weights.size()) +
                          " weights but the basis has m = " + std::to_string(basis.m));
    }
    const BasisValues bv = eval_rational(basis, x);
    Evaluation ev{solution.bias, 0.0, 0.0};
    for (std::size_t i = 0; i < basis.m; ++i) {
        ev.u += solution.weights[i] * bv.values[i];
        ev.du += solution.weights[i] * bv.d1x[i];
        ev.d2u += solution.weights[i] * bv.d2x[i];
    }
    return ev;
}

double condition_violation(const Solution& solution, const RationalBasis& basis,
                           const Condition& condition) {
    condition.validate();
    if (condition.at_infinity) {
        const BasisValues bv = eval_rational_at_infinity(basis);
        double u = solution.bias;
        for (std::size_t i = 0; i < basis.m; ++i) u += solution.weights[i] * bv.values[i];
        return u - condition.value;
    }
    const Evaluation ev = evaluate(solution, basis, condition.point);
    return (condition.derivative_order == 0 ? ev.u : ev.du) - condition.value;
}

}  // namespace ratjac
