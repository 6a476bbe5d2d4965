#pragma once

// State vectors and the quasilinear coefficient matrices A0(U), A^i(U), Q(U)
// for d = 1 and d = 3, plus the directional symbols built from them.
//
// State layout: (rho, v_1..v_d, theta, q_1..q_d), length N = 2d + 2.

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cathyp/constitutive.hpp"
#include "cathyp/errors.hpp"

namespace cathyp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Matrix3 = Eigen::Matrix3d;
using Vector3 = Eigen::Vector3d;

inline constexpr double kUnitTolerance = 1e-12;

struct State {
    int dim = 3;
    double rho = 1.0;
    Vector v = Vector::Zero(3);
    double theta = 1.0;
    Vector q = Vector::Zero(3);

    static State one_d(double rho, double v, double theta, double q) {
        State s;
        s.dim = 1;
        s.rho = rho;
        s.v = Vector::Constant(1, v);
        s.theta = theta;
        s.q = Vector::Constant(1, q);
        return s;
    }

    static State three_d(double rho, const Vector3& v, double theta, const Vector3& q) {
        State s;
        s.dim = 3;
        s.rho = rho;
        s.v = v;
        s.theta = theta;
        s.q = q;
        return s;
    }

    int size() const { return 2 * dim + 2; }
    ThermoPoint thermo() const { return {rho, theta}; }

    /// The packed vector U = (rho, v, theta, q).
    Vector packed() const {
        Vector u(size());
        u(0) = rho;
        u.segment(1, dim) = v;
        u(dim + 1) = theta;
        u.segment(dim + 2, dim) = q;
        return u;
    }

    void validate() const {
        if (dim != 1 && dim != 3) {
            throw InvalidInput("spatial dimension must be 1 or 3, got " + std::to_string(dim));
        }
        if (v.size() != dim || q.size() != dim) {
            throw InvalidInput("velocity and heat flux need " + std::to_string(dim) + " components");
        }
        check_domain(thermo());
    }
};

/// A unit vector xi on the (d-1)-sphere.
class Direction {
public:
    /// Requires |xi| = 1 within kUnitTolerance.
    explicit Direction(Vector xi) : xi_(std::move(xi)) {
        if (xi_.size() != 1 && xi_.size() != 3) {
            throw InvalidInput("direction must have 1 or 3 components");
        }
        if (!xi_.allFinite() || std::abs(xi_.norm() - 1.0) > kUnitTolerance) {
            throw InvalidInput("direction must be a unit vector");
        }
    }

    /// Normalizes a nonzero vector onto the sphere.
    static Direction normalized(const Vector& raw) {
        const double n = raw.norm();
        if (!(n > 0.0) || !std::isfinite(n)) throw InvalidInput("cannot normalize a zero direction");
        return Direction(raw / n);
    }

    static Direction axis(int dim, int index) {
        Vector e = Vector::Zero(dim);
        e(index) = 1.0;
        return Direction(e);
    }

    int dim() const { return static_cast<int>(xi_.size()); }
    const Vector& vec() const { return xi_; }
    double operator()(int i) const { return xi_(i); }

private:
    Vector xi_;
};

struct SystemMatrices {
    Matrix a0;
    std::vector<Matrix> flux;
    Vector source;
};

/// Which heat-flux/velocity coupling the symbol carries.
enum class SymbolKind {
    Objective,       // tau * Q_{lambda,nu}(xi; q)
    ChristovJordan,  // zero block (material-derivative Cattaneo law)
};

// ---------------------------------------------------------------------------

namespace detail {

/// Q_{lambda,nu}(xi; q) for any xi (no unit check).
inline Matrix3 q_block_raw(const LambdaNu& ln, const Vector3& xi, const Vector3& q) {
    const double g = ln.gamma();
    const double lp = ln.lambda_plus();
    const double lm = ln.lambda_minus();
    const double nu = ln.nu;
    Matrix3 m;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i == j) {
                double rest = 0.0;
                for (int k = 0; k < 3; ++k) {
                    if (k != i) rest += xi(k) * q(k);
                }
                m(i, i) = g * xi(i) * q(i) + lm * rest;
            } else {
                m(i, j) = lp * xi(i) * q(j) + nu * xi(j) * q(i);
            }
        }
    }
    return m;
}

/// Symbol sum_i A^i xi_i for an arbitrary (not necessarily unit) xi.
/// Linear in xi; used for flux recovery and linearity checks.
inline Matrix symbol_raw(const ConstitutiveEvaluation& c, const State& s, const Vector& xi,
                         SymbolKind kind) {
    const int d = s.dim;
    const int n = s.size();
    const int it = d + 1;      // theta row/column
    const int iq = d + 2;      // first heat-flux index
    const double xv = xi.dot(s.v);
    Matrix a = Matrix::Zero(n, n);

    a(0, 0) = xv;
    for (int i = 0; i < d; ++i) {
        a(0, 1 + i) = xi(i) * s.rho;
        a(1 + i, 0) = xi(i) * c.p_rho;
        a(1 + i, 1 + i) = s.rho * xv;
        a(1 + i, it) = xi(i) * c.p_theta;
        a(it, 1 + i) = xi(i) * s.theta * c.p_theta;
        a(it, iq + i) = xi(i);
        a(iq + i, it) = xi(i) * c.kappa;
        a(iq + i, iq + i) = c.tau * xv;
    }
    a(it, it) = s.rho * c.e_theta * xv;

    if (kind == SymbolKind::Objective) {
        const LambdaNu ln = c.lambda_nu();
        if (d == 1) {
            // 1D reduction of tau*Q: tau (lambda + nu) q xi.
            a(iq, 1) = c.tau * ln.gamma() * s.q(0) * xi(0);
        } else {
            a.block(iq, 1, 3, 3) =
                c.tau * q_block_raw(ln, Vector3(xi.head<3>()), Vector3(s.q.head<3>()));
        }
    }
    return a;
}

inline ConstitutiveEvaluation evaluate_for(const ConstitutiveModel& model, const State& state,
                                           const std::optional<LambdaNu>& override_ln) {
    state.validate();
    ConstitutiveEvaluation c = evaluate(model, state.thermo());
    if (override_ln) {
        c.lambda = override_ln->lambda;
        c.nu = override_ln->nu;
    }
    return c;
}

inline void require_dim(const State& s, const Direction& xi) {
    if (s.dim != xi.dim()) {
        throw InvalidInput("direction has " + std::to_string(xi.dim()) +
                           " components but the state is " + std::to_string(s.dim) + "D");
    }
}

} // namespace detail

// ---------------------------------------------------------------------------

/// A0(U) = diag(1, rho I_d, rho e_theta, tau I_d).
inline Matrix a0_matrix(const ConstitutiveEvaluation& c, const State& s) {
    const int d = s.dim;
    Vector diag(s.size());
    diag(0) = 1.0;
    diag.segment(1, d).setConstant(s.rho);
    diag(d + 1) = s.rho * c.e_theta;
    diag.segment(d + 2, d).setConstant(c.tau);
    return diag.asDiagonal();
}

/// Q(U) = (0, ..., 0, q).
inline Vector source_vector(const State& s) {
    Vector src = Vector::Zero(s.size());
    src.tail(s.dim) = s.q;
    return src;
}

/// A0, the d flux matrices A^i and the source for a state of either dimension.
inline SystemMatrices assemble(const ConstitutiveModel& model, const State& state,
                               std::optional<LambdaNu> lambda_nu_override = std::nullopt,
                               SymbolKind kind = SymbolKind::Objective) {
    const ConstitutiveEvaluation c = detail::evaluate_for(model, state, lambda_nu_override);
    SystemMatrices out;
    out.a0 = a0_matrix(c, state);
    for (int i = 0; i < state.dim; ++i) {
        Vector e = Vector::Zero(state.dim);
        e(i) = 1.0;
        out.flux.push_back(detail::symbol_raw(c, state, e, kind));
    }
    out.source = source_vector(state);
    return out;
}

/// The 4x4 pair of the one-dimensional system; A^1(4,2) = tau (lambda + nu) q.
inline SystemMatrices assemble_1d(const ConstitutiveModel& model, const State& state,
                                  std::optional<LambdaNu> lambda_nu_override = std::nullopt) {
    if (state.dim != 1) throw InvalidInput("assemble_1d needs a 1D state");
    return assemble(model, state, lambda_nu_override);
}

inline SystemMatrices assemble_3d(const ConstitutiveModel& model, const State& state,
                                  std::optional<LambdaNu> lambda_nu_override = std::nullopt) {
    if (state.dim != 3) throw InvalidInput("assemble_3d needs a 3D state");
    return assemble(model, state, lambda_nu_override);
}

/// The 3x3 heat-flux/velocity coupling block Q_{lambda,nu}(xi; q).
inline Matrix3 q_block(double lambda, double nu, const Direction& xi, const Vector3& q) {
    if (xi.dim() != 3) throw InvalidInput("q_block needs a 3D direction");
    return detail::q_block_raw({lambda, nu}, Vector3(xi.vec()), q);
}

/// A(xi; U) = sum_i A^i(U) xi_i for either dimension.
inline Matrix symbol(const ConstitutiveModel& model, const State& state, const Direction& xi,
                     std::optional<LambdaNu> lambda_nu_override = std::nullopt,
                     SymbolKind kind = SymbolKind::Objective) {
    detail::require_dim(state, xi);
    const ConstitutiveEvaluation c = detail::evaluate_for(model, state, lambda_nu_override);
    return detail::symbol_raw(c, state, xi.vec(), kind);
}

/// The 8x8 symbol A_{lambda,nu}(xi; U) with tau*Q in rows 6-8, columns 2-4.
inline Matrix symbol_3d(const ConstitutiveModel& model, const State& state, const Direction& xi,
                        std::optional<LambdaNu> lambda_nu_override = std::nullopt) {
    if (state.dim != 3) throw InvalidInput("symbol_3d needs a 3D state");
    return symbol(model, state, xi, lambda_nu_override, SymbolKind::Objective);
}

/// Cattaneo-Christov-Jordan symbol: symbol_3d with the coupling block zeroed.
inline Matrix symbol_ccj(const ConstitutiveModel& model, const State& state, const Direction& xi) {
    if (state.dim != 3) throw InvalidInput("symbol_ccj needs a 3D state");
    return symbol(model, state, xi, std::nullopt, SymbolKind::ChristovJordan);
}

} // namespace cathyp
