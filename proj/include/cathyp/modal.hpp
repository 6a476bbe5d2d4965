#pragma once

// Frozen-coefficient Fourier-mode growth rates. A plane wave
// U = U_hat exp(i (k xi.x - omega t)) of the linearization at a constant
// state solves (-i omega A0 + i k A(xi;U) + B) U_hat = 0 with B = dQ/dU, so
// omega ranges over the eigenvalues of A0^{-1} (k A(xi;U) - i B).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cathyp/assembly.hpp"
#include "cathyp/errors.hpp"
#include "cathyp/spectral.hpp"

namespace cathyp {

struct ModeGrowth {
    std::vector<double> wavenumbers;
    /// max Im(omega) at each wavenumber.
    std::vector<double> growth_rates;
};

/// Jacobian of Q(U) = (0, ..., 0, q): ones on the heat-flux diagonal.
inline Matrix source_jacobian(const State& state) {
    Matrix b = Matrix::Zero(state.size(), state.size());
    for (int i = 0; i < state.dim; ++i) b(state.dim + 2 + i, state.dim + 2 + i) = 1.0;
    return b;
}

inline void validate_wavenumbers(const std::vector<double>& k_list) {
    if (k_list.empty()) throw InvalidInput("wavenumber list is empty");
    for (std::size_t i = 0; i < k_list.size(); ++i) {
        if (!(k_list[i] > 0.0) || !std::isfinite(k_list[i])) {
            throw InvalidInput("wavenumbers must be finite and positive");
        }
        if (i > 0 && !(k_list[i] > k_list[i - 1])) {
            throw InvalidInput("wavenumbers must be strictly ascending");
        }
    }
}

/// Growth rate max Im(omega) for each k. With `include_source = false` the
/// relaxation term is dropped and the rates reduce to k * max Im(eta).
inline ModeGrowth mode_growth(const ConstitutiveModel& model, const State& state, const Direction& xi,
                              std::optional<LambdaNu> lambda_nu, const std::vector<double>& k_list,
                              bool include_source = true, SymbolKind kind = SymbolKind::Objective) {
    validate_wavenumbers(k_list);
    const auto sys = assemble(model, state, lambda_nu, kind);
    const Matrix a = symbol(model, state, xi, lambda_nu, kind);
    const Vector inv_a0 = sys.a0.diagonal().cwiseInverse();
    const Matrix b = include_source ? source_jacobian(state) : Matrix::Zero(a.rows(), a.cols());

    ModeGrowth out;
    out.wavenumbers = k_list;
    for (double k : k_list) {
        const ComplexMatrix m =
            inv_a0.cast<Complex>().asDiagonal() *
            (k * a.cast<Complex>() - Complex(0.0, 1.0) * b.cast<Complex>());
        Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, false);
        double worst = -std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
            worst = std::max(worst, solver.eigenvalues()(i).imag());
        }
        out.growth_rates.push_back(worst);
    }
    return out;
}

struct ModalScenario {
    std::string name;
    ConstitutiveModel model;
    State state;
    Direction xi;
    LambdaNu lambda_nu;
};

/// "hyperbolic": (1,-1), ideal gas, q = (0,1,0), xi = e1.
/// "witness":    (1,0), ideal gas, q = 1.7 e1 collinear with xi = e1, whose
///               quartic factor is z^4 - 3z^2 + 1.7z + 1.
inline ModalScenario modal_scenario(const std::string& name) {
    const Direction e1 = Direction::axis(3, 0);
    if (name == "hyperbolic") {
        return {name, ideal_gas(), State::three_d(1.0, Vector3::Zero(), 1.0, Vector3(0.0, 1.0, 0.0)), e1,
                LambdaNu{1.0, -1.0}};
    }
    if (name == "witness") {
        return {name, ideal_gas(), State::three_d(1.0, Vector3::Zero(), 1.0, Vector3(1.7, 0.0, 0.0)), e1,
                LambdaNu{1.0, 0.0}};
    }
    throw InvalidInput("unknown modal scenario '" + name + "'");
}

} // namespace cathyp
