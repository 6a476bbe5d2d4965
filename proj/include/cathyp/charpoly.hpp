#pragma once

// Characteristic-polynomial machinery: block determinants, the quartic factor
// of det(A(xi;U) - eta A0), its discriminant and roots, the complex-root
// witness for lambda + nu != 0, and the closed-form Christov-Jordan speeds.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "cathyp/assembly.hpp"
#include "cathyp/constitutive.hpp"
#include "cathyp/errors.hpp"

namespace cathyp {

using Complex = std::complex<double>;

/// z^4 + a2 z^2 + a1 z + a0, with z = xi.v - eta.
struct DepressedQuartic {
    double a0 = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;

    template <typename T>
    T operator()(T z) const {
        const T z2 = z * z;
        return z2 * z2 + a2 * z2 + a1 * z + a0;
    }

    double scale() const { return 1.0 + std::max({std::abs(a0), std::abs(a1), std::abs(a2)}); }
};

/// The discriminant evaluated directly and as the quadratic-in-a1^2 form
/// P(a1) = A a1^4 + B a1^2 + C.
struct DiscriminantBreakdown {
    double delta = 0.0;
    double A = -27.0;
    double B = 0.0;
    double C = 0.0;

    double as_polynomial_in(double a1) const {
        const double s = a1 * a1;
        return A * s * s + B * s + C;
    }
};

inline DiscriminantBreakdown discriminant(const DepressedQuartic& q) {
    const double a0 = q.a0;
    const double a1 = q.a1;
    const double a2 = q.a2;
    const double a0_2 = a0 * a0;
    const double a1_2 = a1 * a1;
    const double a2_2 = a2 * a2;

    DiscriminantBreakdown out;
    out.delta = 256.0 * a0_2 * a0 - 128.0 * a2_2 * a0_2 + 16.0 * a0 * a2_2 * a2_2 +
                144.0 * a0 * a1_2 * a2 - 4.0 * a1_2 * a2_2 * a2 - 27.0 * a1_2 * a1_2;
    out.A = -27.0;
    out.B = 144.0 * a0 * a2 - 4.0 * a2_2 * a2;
    const double w = a2_2 - 4.0 * a0;
    out.C = 16.0 * a0 * w * w;
    return out;
}

// ---------------------------------------------------------------------------
// Roots

enum class RootPattern { FourReal, TwoRealTwoComplex, Other };

inline const char* to_string(RootPattern p) {
    switch (p) {
    case RootPattern::FourReal: return "four_real";
    case RootPattern::TwoRealTwoComplex: return "two_real_two_complex";
    case RootPattern::Other: return "other";
    }
    return "other";
}

struct QuarticRoots {
    std::array<Complex, 4> roots{};
    RootPattern pattern = RootPattern::Other;
    int real_count = 0;
};

/// Real-root tolerance relative to (1 + spectral radius).
inline constexpr double kDefaultRealTolerance = 1e-9;
/// Eigenvalue clustering gap relative to (1 + spectral radius).
inline constexpr double kDefaultClusterGap = 1e-7;

inline bool complex_less(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

namespace detail {

/// Single-linkage clusters of `values` with absolute gap `gap`.
inline std::vector<std::vector<int>> cluster_indices(const std::vector<Complex>& values, double gap) {
    const int n = static_cast<int>(values.size());
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    auto find = [&parent](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(values[i] - values[j]) <= gap) parent[find(i)] = find(j);
        }
    }
    std::vector<std::vector<int>> groups;
    std::vector<int> slot(n, -1);
    for (int i = 0; i < n; ++i) {
        const int r = find(i);
        if (slot[r] < 0) {
            slot[r] = static_cast<int>(groups.size());
            groups.emplace_back();
        }
        groups[slot[r]].push_back(i);
    }
    return groups;
}

inline Complex mean_of(const std::vector<Complex>& values, const std::vector<int>& idx) {
    Complex sum{0.0, 0.0};
    for (int i : idx) sum += values[i];
    return sum / static_cast<double>(idx.size());
}

} // namespace detail

/// Roots of the depressed quartic from the eigenvalues of its companion
/// matrix. Roots whose cluster mean is real within tolerance are reported as
/// that real value (a numerically split multiple real root).
inline QuarticRoots quartic_roots(const DepressedQuartic& q,
                                  double real_tol = kDefaultRealTolerance,
                                  double cluster_gap = kDefaultClusterGap) {
    Eigen::Matrix4d companion = Eigen::Matrix4d::Zero();
    companion(1, 0) = 1.0;
    companion(2, 1) = 1.0;
    companion(3, 2) = 1.0;
    companion(0, 3) = -q.a0;
    companion(1, 3) = -q.a1;
    companion(2, 3) = -q.a2;
    companion(3, 3) = 0.0;

    Eigen::EigenSolver<Eigen::Matrix4d> solver(companion, false);
    std::vector<Complex> values(4);
    double radius = 0.0;
    for (int i = 0; i < 4; ++i) {
        values[i] = solver.eigenvalues()(i);
        radius = std::max(radius, std::abs(values[i]));
    }

    // Newton polish on simple roots.
    for (auto& z : values) {
        for (int it = 0; it < 3; ++it) {
            const Complex f = q(z);
            const Complex df = 4.0 * z * z * z + 2.0 * q.a2 * z + q.a1;
            if (std::abs(df) < 1e-8 * q.scale()) break;
            const Complex step = f / df;
            if (!(std::abs(step) < 1e-3 * (1.0 + std::abs(z)))) break;
            z -= step;
        }
    }

    const double scale = 1.0 + radius;
    QuarticRoots out;
    for (const auto& group : detail::cluster_indices(values, cluster_gap * scale)) {
        const Complex centre = detail::mean_of(values, group);
        if (std::abs(centre.imag()) <= real_tol * scale) {
            for (int i : group) {
                values[i] = group.size() > 1 ? Complex(centre.real(), 0.0)
                                             : Complex(values[i].real(), 0.0);
            }
            out.real_count += static_cast<int>(group.size());
        }
    }
    std::sort(values.begin(), values.end(), complex_less);
    std::copy(values.begin(), values.end(), out.roots.begin());

    out.pattern = out.real_count == 4   ? RootPattern::FourReal
                  : out.real_count == 2 ? RootPattern::TwoRealTwoComplex
                                        : RootPattern::Other;
    return out;
}

// ---------------------------------------------------------------------------
// Block determinant

struct BlockDeterminant {
    double value = 0.0;
    /// 2-norm condition number of the leading block L.
    double l_condition = 1.0;
};

/// det [[L, M], [N, P]] = det(L) det(P - N L^{-1} M) for invertible L.
inline BlockDeterminant block_det(const Matrix& L, const Matrix& M, const Matrix& Nb,
                                  const Matrix& P) {
    const auto k = L.rows();
    const auto m = P.rows();
    if (L.cols() != k || P.cols() != m || M.rows() != k || M.cols() != m || Nb.rows() != m ||
        Nb.cols() != k) {
        throw InvalidInput("block_det: inconsistent block shapes");
    }
    Eigen::JacobiSVD<Matrix> svd(L);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    const double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
    if (!(smin >= 1e-12 * smax) || smax == 0.0) {
        throw SingularBlock("block_det: leading block is numerically singular");
    }
    const Eigen::PartialPivLU<Matrix> lu(L);
    BlockDeterminant out;
    out.l_condition = smax / smin;
    out.value = lu.determinant() * (P - Nb * lu.solve(M)).determinant();
    return out;
}

// ---------------------------------------------------------------------------
// Quartic factors

/// Normalized quartic factor of the 1D characteristic polynomial:
///   a2 = -(rho e_theta p_rho tau + theta p_theta^2 tau / rho + kappa) / (rho e_theta tau)
///   a1 = tau (lambda + nu) p_theta q / (rho^2 e_theta tau)
///   a0 = kappa p_rho / (rho e_theta tau)
inline DepressedQuartic quartic_from_state_1d(const ConstitutiveModel& model, const State& state,
                                              std::optional<LambdaNu> lambda_nu_override = std::nullopt) {
    if (state.dim != 1) throw InvalidInput("quartic_from_state_1d needs a 1D state");
    const auto c = detail::evaluate_for(model, state, lambda_nu_override);
    const double rho = state.rho;
    const double lead = rho * c.e_theta * c.tau;
    DepressedQuartic out;
    out.a2 = -(rho * c.e_theta * c.p_rho * c.tau + state.theta * c.p_theta * c.p_theta * c.tau / rho +
               c.kappa) / lead;
    out.a1 = c.tau * c.lambda_nu().gamma() * c.p_theta * state.q(0) / (rho * lead);
    out.a0 = c.kappa * c.p_rho / lead;
    return out;
}

/// h(xi; q) computed from the coupling block, (Q xi).xi, and from the
/// closed form (lambda + nu)|xi|^2 (xi.q).
struct HValue {
    double from_block = 0.0;
    double closed_form = 0.0;

    double value() const { return closed_form; }
};

inline HValue h_value(double lambda, double nu, const Vector3& xi, const Vector3& q) {
    const LambdaNu ln{lambda, nu};
    HValue out;
    out.from_block = (detail::q_block_raw(ln, xi, q) * xi).dot(xi);
    out.closed_form = ln.gamma() * xi.squaredNorm() * xi.dot(q);
    return out;
}

inline HValue h_value(double lambda, double nu, const Direction& xi, const Vector3& q) {
    if (xi.dim() != 3) throw InvalidInput("h_value needs a 3D direction");
    return h_value(lambda, nu, Vector3(xi.vec()), q);
}

/// Normalized quartic factor P_{lambda,nu}(xi, U; eta) / (rho e_theta tau) in z = xi.v - eta.
inline DepressedQuartic quartic_from_state_3d(const ConstitutiveModel& model, const State& state,
                                              const Direction& xi,
                                              std::optional<LambdaNu> lambda_nu_override = std::nullopt) {
    if (state.dim != 3) throw InvalidInput("quartic_from_state_3d needs a 3D state");
    detail::require_dim(state, xi);
    const auto c = detail::evaluate_for(model, state, lambda_nu_override);
    const double rho = state.rho;
    const double lead = rho * c.e_theta * c.tau;
    const double h = h_value(c.lambda, c.nu, xi, Vector3(state.q)).from_block;
    DepressedQuartic out;
    out.a2 = -(c.tau * rho * c.e_theta * c.p_rho + c.tau * state.theta * c.p_theta * c.p_theta / rho +
               c.kappa) / lead;
    out.a1 = c.tau * c.p_theta * h / (rho * lead);
    out.a0 = c.kappa * c.p_rho / lead;
    return out;
}

/// Value of the quartic factor of det(A(xi;U) - eta A0) = rho^3 tau^2 (xi.v - eta)^4 P(eta):
///   P = rho e_theta tau z^4 - (tau rho e_theta p_rho + tau theta p_theta^2 / rho + kappa) z^2
///       + tau (p_theta / rho) h z + kappa p_rho,     z = xi.v - eta.
inline double p_factor_3d(const ConstitutiveModel& model, const State& state, const Direction& xi,
                          double eta, std::optional<LambdaNu> lambda_nu_override = std::nullopt) {
    if (state.dim != 3) throw InvalidInput("p_factor_3d needs a 3D state");
    detail::require_dim(state, xi);
    const auto c = detail::evaluate_for(model, state, lambda_nu_override);
    const double rho = state.rho;
    const double z = xi.vec().dot(state.v) - eta;
    const double z2 = z * z;
    const double h = h_value(c.lambda, c.nu, xi, Vector3(state.q)).from_block;
    return rho * c.e_theta * c.tau * z2 * z2 -
           (c.tau * rho * c.e_theta * c.p_rho + c.tau * state.theta * c.p_theta * c.p_theta / rho +
            c.kappa) * z2 +
           c.tau * (c.p_theta / rho) * h * z + c.kappa * c.p_rho;
}

/// P_0: the Christov-Jordan quartic factor (no h term) at shift z = xi.v - eta.
inline double p0_factor(const ConstitutiveEvaluation& c, const ThermoPoint& pt, double z) {
    const double z2 = z * z;
    return pt.rho * c.e_theta * c.tau * z2 * z2 -
           (c.tau * pt.rho * c.e_theta * c.p_rho + c.tau * pt.theta * c.p_theta * c.p_theta / pt.rho +
            c.kappa) * z2 +
           c.kappa * c.p_rho;
}

// ---------------------------------------------------------------------------
// Complex-root witness

struct WitnessQ {
    double g = 0.0;
    DepressedQuartic quartic_at_zero_q;
    DiscriminantBreakdown breakdown_at_zero_q;
    double q_threshold_sq = 0.0;
    double witness_q_value = 0.0;
    double delta_at_witness = 0.0;
};

/// Margin applied to sqrt(threshold) when picking the witness heat flux.
inline constexpr double kWitnessMargin = 1.05;

/// Heat-flux magnitude beyond which the 1D quartic has a complex pair:
///   q^2 > max{(-C - B) / (A g^2), 2 / g^2},  a1 = g q.
inline WitnessQ witness_q(const ConstitutiveModel& model, const ThermoPoint& point,
                          const LambdaNu& lambda_nu) {
    check_domain(point);
    if (lambda_nu.gamma() == 0.0) {
        throw GammaZero("lambda + nu = 0: the characteristic speeds are real");
    }
    const State base = State::one_d(point.rho, 0.0, point.theta, 0.0);
    const auto c = detail::evaluate_for(model, base, lambda_nu);

    WitnessQ out;
    out.g = lambda_nu.gamma() * c.p_theta / (point.rho * point.rho * c.e_theta);
    out.quartic_at_zero_q = quartic_from_state_1d(model, base, lambda_nu);
    out.breakdown_at_zero_q = discriminant(out.quartic_at_zero_q);
    const auto& bd = out.breakdown_at_zero_q;
    const double g2 = out.g * out.g;
    out.q_threshold_sq = std::max((-bd.C - bd.B) / (bd.A * g2), 2.0 / g2);
    out.witness_q_value = std::sqrt(out.q_threshold_sq) * kWitnessMargin;

    DepressedQuartic at_witness = out.quartic_at_zero_q;
    at_witness.a1 = out.g * out.witness_q_value;
    out.delta_at_witness = discriminant(at_witness).delta;
    return out;
}

// ---------------------------------------------------------------------------
// Christov-Jordan speeds

struct CcjSpeeds {
    double eta0 = 0.0;
    double eta1 = 0.0;
    double eta2 = 0.0;
    double eta3 = 0.0;
    double eta4 = 0.0;
    double r = 0.0;
    double m = 0.0;

    std::array<double, 5> as_array() const { return {eta0, eta1, eta2, eta3, eta4}; }
};

/// eta0 = xi.v, eta_{1,3} = xi.v +- sqrt((r + m)/2), eta_{2,4} = xi.v +- sqrt((r - m)/2).
inline CcjSpeeds ccj_speeds(const ConstitutiveModel& model, const ThermoPoint& point,
                            double v_dot_xi) {
    const auto c = evaluate(model, point);
    const double rho = point.rho;
    const double relax = c.kappa / (rho * c.e_theta * c.tau);
    const double r = c.p_rho + point.theta * c.p_theta * c.p_theta / (rho * rho * c.e_theta) + relax;
    double m2 = r * r - 4.0 * c.p_rho * relax;
    if (m2 < -1e-12) {
        throw ConstitutiveViolation("r^2 - 4 p_rho kappa / (rho e_theta tau) is negative");
    }
    m2 = std::max(m2, 0.0);
    CcjSpeeds out;
    out.r = r;
    out.m = std::sqrt(m2);
    const double fast = std::sqrt(0.5 * (r + out.m));
    // (r - m)/2 = 2 p_rho relax / (r + m), free of cancellation.
    const double slow = std::sqrt(2.0 * c.p_rho * relax / (r + out.m));
    out.eta0 = v_dot_xi;
    out.eta1 = v_dot_xi + fast;
    out.eta2 = v_dot_xi + slow;
    out.eta3 = v_dot_xi - fast;
    out.eta4 = v_dot_xi - slow;
    return out;
}

} // namespace cathyp
