#pragma once

// Generalized eigenproblem (A(xi;U) - eta A0(U)) V = 0: eigenvalues,
// clustering, algebraic vs geometric multiplicity and the hyperbolicity
// verdict; plus the explicit eta0 eigenbasis of the (1,-1) system and the
// defect witness for the other lambda + nu = 0 systems.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cathyp/assembly.hpp"
#include "cathyp/charpoly.hpp"
#include "cathyp/errors.hpp"

namespace cathyp {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

struct TolProfile {
    /// |Im eta| <= real_tol * (1 + spectral radius) counts as real.
    double real_tol = kDefaultRealTolerance;
    /// |eta_i - eta_j| <= cluster_gap * (1 + spectral radius) share a cluster.
    double cluster_gap = kDefaultClusterGap;
    /// Singular values below rank_tol * sigma_max count as zero.
    double rank_tol = 1e-10;
};

enum class Verdict { Hyperbolic, WeaklyHyperbolic, NonHyperbolic };

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Hyperbolic: return "HYPERBOLIC";
    case Verdict::WeaklyHyperbolic: return "WEAKLY_HYPERBOLIC";
    case Verdict::NonHyperbolic: return "NON_HYPERBOLIC";
    }
    return "NON_HYPERBOLIC";
}

inline Verdict verdict_from_string(const std::string& s) {
    if (s == "HYPERBOLIC") return Verdict::Hyperbolic;
    if (s == "WEAKLY_HYPERBOLIC") return Verdict::WeaklyHyperbolic;
    if (s == "NON_HYPERBOLIC") return Verdict::NonHyperbolic;
    throw InvalidInput("unknown verdict '" + s + "'");
}

struct Cluster {
    Complex value;
    int algebraic = 0;
    int geometric = 0;
    bool real = true;
    /// Largest distance of a member eigenvalue from `value`.
    double spread = 0.0;
    /// Relative separation from the nearest other cluster.
    double separation = 0.0;

    bool defective() const { return geometric < algebraic; }
};

struct SpectrumReport {
    std::vector<Complex> eigenvalues;
    std::vector<Cluster> clusters;
    Verdict verdict = Verdict::Hyperbolic;
    double spectral_radius = 0.0;

    /// Index into `clusters` of the first defective cluster, if any.
    std::optional<int> defective_cluster;
    /// Index of the first non-real cluster with positive imaginary part, if any.
    std::optional<int> complex_cluster;

    // Provenance, filled by classify_state.
    std::optional<State> state;
    std::optional<Vector> xi;
    std::optional<LambdaNu> lambda_nu;

    double max_abs_imag() const {
        double m = 0.0;
        for (const auto& c : clusters) m = std::max(m, std::abs(c.value.imag()));
        return m;
    }

    /// The cluster whose representative is nearest to `eta`.
    const Cluster& nearest(Complex eta) const {
        const Cluster* best = &clusters.front();
        for (const auto& c : clusters) {
            if (std::abs(c.value - eta) < std::abs(best->value - eta)) best = &c;
        }
        return *best;
    }
};

namespace detail {

inline Vector checked_a0_diagonal(const Matrix& a0) {
    if (a0.rows() != a0.cols()) throw InvalidInput("A0 must be square");
    const Vector d = a0.diagonal();
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (!(d(i) > 0.0)) {
            throw SingularA0("A0 diagonal entry " + std::to_string(i + 1) + " is not positive");
        }
    }
    Matrix off = a0;
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() > 0.0) throw InvalidInput("A0 must be diagonal");
    return d;
}

/// Right null-space basis of `m` using the SVD rank threshold rank_tol * sigma_max.
inline ComplexMatrix null_space(const ComplexMatrix& m, double rank_tol) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = rank_tol * (sv.size() ? std::max(sv(0), 1e-300) : 0.0);
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;
    return svd.matrixV().rightCols(m.cols() - rank);
}

} // namespace detail

/// Spectrum and hyperbolicity verdict of the pencil (a, a0); a0 diagonal positive.
///
/// Eigenvalues are those of a0^{-1} a. They are grouped by single linkage
/// with the cluster gap; each cluster's mean is its representative and
/// decides realness. Geometric multiplicity is N - rank(a - eta_bar a0).
inline SpectrumReport pencil_spectrum(const Matrix& a0, const Matrix& a, const TolProfile& tol = {}) {
    const Vector d = detail::checked_a0_diagonal(a0);
    if (a.rows() != a0.rows() || a.cols() != a0.cols()) {
        throw InvalidInput("symbol and A0 must have the same shape");
    }
    const Eigen::Index n = a.rows();
    const Matrix scaled = d.cwiseInverse().asDiagonal() * a;

    Eigen::EigenSolver<Matrix> solver(scaled, false);
    SpectrumReport rep;
    rep.eigenvalues.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        rep.eigenvalues[i] = solver.eigenvalues()(i);
        rep.spectral_radius = std::max(rep.spectral_radius, std::abs(rep.eigenvalues[i]));
    }
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(), complex_less);

    const double scale = 1.0 + rep.spectral_radius;
    const ComplexMatrix ac = a.cast<Complex>();
    const ComplexMatrix a0c = a0.cast<Complex>();

    for (const auto& group : detail::cluster_indices(rep.eigenvalues, tol.cluster_gap * scale)) {
        Cluster c;
        c.value = detail::mean_of(rep.eigenvalues, group);
        c.algebraic = static_cast<int>(group.size());
        for (int i : group) c.spread = std::max(c.spread, std::abs(rep.eigenvalues[i] - c.value));
        c.real = std::abs(c.value.imag()) <= tol.real_tol * scale;
        if (c.real) c.value = Complex(c.value.real(), 0.0);
        const ComplexMatrix shifted = ac - c.value * a0c;
        c.geometric = std::min<int>(c.algebraic,
                                    static_cast<int>(detail::null_space(shifted, tol.rank_tol).cols()));
        rep.clusters.push_back(c);
    }
    std::sort(rep.clusters.begin(), rep.clusters.end(),
              [](const Cluster& x, const Cluster& y) { return complex_less(x.value, y.value); });

    for (std::size_t i = 0; i < rep.clusters.size(); ++i) {
        double sep = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < rep.clusters.size(); ++j) {
            if (i != j) sep = std::min(sep, std::abs(rep.clusters[i].value - rep.clusters[j].value));
        }
        rep.clusters[i].separation = sep / scale;
    }

    bool any_complex = false;
    bool any_defective = false;
    for (std::size_t i = 0; i < rep.clusters.size(); ++i) {
        const auto& c = rep.clusters[i];
        if (!c.real) {
            any_complex = true;
            if (!rep.complex_cluster && c.value.imag() > 0.0) rep.complex_cluster = static_cast<int>(i);
        }
        if (c.defective()) {
            any_defective = true;
            if (!rep.defective_cluster) rep.defective_cluster = static_cast<int>(i);
        }
    }
    rep.verdict = any_complex     ? Verdict::NonHyperbolic
                  : any_defective ? Verdict::WeaklyHyperbolic
                                  : Verdict::Hyperbolic;
    return rep;
}

/// Eigenvectors of the pencil, cluster by cluster, as the columns of an
/// N x (sum of geometric multiplicities) matrix.
inline ComplexMatrix pencil_eigenvectors(const Matrix& a0, const Matrix& a, const SpectrumReport& rep,
                                         const TolProfile& tol = {}) {
    const ComplexMatrix ac = a.cast<Complex>();
    const ComplexMatrix a0c = a0.cast<Complex>();
    std::vector<ComplexMatrix> blocks;
    Eigen::Index cols = 0;
    for (const auto& c : rep.clusters) {
        blocks.push_back(detail::null_space(ac - c.value * a0c, tol.rank_tol));
        cols += blocks.back().cols();
    }
    ComplexMatrix out(a.rows(), cols);
    Eigen::Index at = 0;
    for (const auto& b : blocks) {
        out.middleCols(at, b.cols()) = b;
        at += b.cols();
    }
    return out;
}

/// Assembles the symbol for (state, xi) and classifies the pencil.
inline SpectrumReport classify_state(const ConstitutiveModel& model, const State& state,
                                     const Direction& xi,
                                     std::optional<LambdaNu> lambda_nu = std::nullopt,
                                     const TolProfile& tol = {},
                                     SymbolKind kind = SymbolKind::Objective) {
    const auto sys = assemble(model, state, lambda_nu, kind);
    const Matrix a = symbol(model, state, xi, lambda_nu, kind);
    SpectrumReport rep = pencil_spectrum(sys.a0, a, tol);
    rep.state = state;
    rep.xi = xi.vec();
    rep.lambda_nu = lambda_nu ? *lambda_nu : evaluate(model, state.thermo()).lambda_nu();
    return rep;
}

// ---------------------------------------------------------------------------
// eta0 eigenbasis of the (1,-1) system

struct Eta0Basis {
    /// Two heat-flux-only vectors (0,...,0,V'') with xi.V'' = 0, then the
    /// mixed vectors built on the tangent basis {V_xi, W_xi}.
    std::array<Vector, 4> vectors;
    Vector3 v_xi;
    Vector3 w_xi;
    /// V5 for alpha = (1,0) and alpha = (0,1).
    double v5_first = 0.0;
    double v5_second = 0.0;
    /// 1: xi_1 pivot, 2: xi_2 pivot, 3: xi_3 pivot (reduces to e1, e2 at xi = +-e3).
    int branch = 1;

    Matrix as_matrix() const {
        Matrix m(vectors[0].size(), 4);
        for (int i = 0; i < 4; ++i) m.col(i) = vectors[i];
        return m;
    }
};

/// A component counts as the pivot for the tangent basis when its magnitude
/// reaches this value. Every unit vector has a component >= 1/sqrt(3).
inline constexpr double kTangentPivot = 0.25;

/// Tangent basis {V_xi, W_xi} of {xi}^perp and the branch that produced it.
inline std::pair<std::array<Vector3, 2>, int> tangent_basis(const Vector3& xi) {
    if (std::abs(xi(0)) >= kTangentPivot) {
        return {{Vector3(-xi(1), xi(0), 0.0), Vector3(-xi(2), 0.0, xi(0))}, 1};
    }
    if (std::abs(xi(1)) >= kTangentPivot) {
        return {{Vector3(xi(1), -xi(0), 0.0), Vector3(0.0, -xi(2), xi(1))}, 2};
    }
    const double s = xi(2) >= 0.0 ? 1.0 : -1.0;
    return {{Vector3(s * xi(2), 0.0, -s * xi(0)), Vector3(0.0, s * xi(2), -s * xi(1))}, 3};
}

/// Explicit basis of the eta0 = xi.v eigenspace of the (1,-1) system.
inline Eta0Basis eta0_basis(const ConstitutiveModel& model, const State& state, const Direction& xi,
                            std::optional<LambdaNu> lambda_nu_override = std::nullopt) {
    if (state.dim != 3) throw InvalidInput("eta0_basis needs a 3D state");
    detail::require_dim(state, xi);
    const auto c = detail::evaluate_for(model, state, lambda_nu_override);
    if (std::abs(c.lambda - 1.0) > 1e-12 || std::abs(c.nu + 1.0) > 1e-12) {
        throw WrongLambdaNu("eta0_basis is only defined for (lambda, nu) = (1, -1)");
    }
    const Vector3 x(xi.vec());
    const Vector3 q(state.q);
    const Matrix3 Q = detail::q_block_raw(c.lambda_nu(), x, q);

    Eta0Basis out;
    const auto [tangent, branch] = tangent_basis(x);
    out.v_xi = tangent[0];
    out.w_xi = tangent[1];
    out.branch = branch;

    // xi . (tau Q V' + kappa V5 xi) = 0 fixes V5; V1 from p_rho V1 + p_theta V5 = 0.
    auto v5_for = [&](const Vector3& tangent_vec) {
        return -(c.tau / c.kappa) * (Q * tangent_vec).dot(x);
    };
    out.v5_first = v5_for(out.v_xi);
    out.v5_second = v5_for(out.w_xi);

    auto flux_only = [](const Vector3& t) {
        Vector v = Vector::Zero(8);
        v.segment<3>(5) = t;
        return v;
    };
    auto mixed = [&](const Vector3& t, double v5) {
        Vector v = Vector::Zero(8);
        v(0) = -(c.p_theta / c.p_rho) * v5;
        v.segment<3>(1) = t;
        v(4) = v5;
        return v;
    };
    out.vectors = {flux_only(out.v_xi), flux_only(out.w_xi), mixed(out.v_xi, out.v5_first),
                   mixed(out.w_xi, out.v5_second)};
    return out;
}

// ---------------------------------------------------------------------------
// Defect witness for lambda + nu = 0, (lambda, nu) != (1, -1)

struct DefectWitness {
    Vector3 xi_bar;
    Vector3 q_bar;
    State state;
    SpectrumReport report;
    int eta0_algebraic = 0;
    int eta0_geometric = 0;
};

/// Builds the state (rho, 0, theta, q_bar) with xi_bar = q_bar = (1,1,1)/sqrt(3)
/// and classifies it; the eta0 eigenspace comes out two-dimensional.
inline DefectWitness defect_witness(const ConstitutiveModel& model, const ThermoPoint& point,
                                    const LambdaNu& lambda_nu, const TolProfile& tol = {}) {
    check_domain(point);
    if (std::abs(lambda_nu.gamma()) > 1e-12) {
        throw NotApplicable("defect_witness needs lambda + nu = 0");
    }
    if (std::abs(lambda_nu.lambda - 1.0) <= 1e-12) {
        throw NotApplicable("(lambda, nu) = (1, -1) is hyperbolic: no defect witness exists");
    }
    DefectWitness out;
    out.xi_bar = Vector3::Ones() / std::sqrt(3.0);
    out.q_bar = out.xi_bar;
    out.state = State::three_d(point.rho, Vector3::Zero(), point.theta, out.q_bar);
    const Direction xi(out.xi_bar);
    out.report = classify_state(model, out.state, xi, lambda_nu, tol);
    const Cluster& eta0 = out.report.nearest(Complex(0.0, 0.0));
    out.eta0_algebraic = eta0.algebraic;
    out.eta0_geometric = eta0.geometric;
    return out;
}

} // namespace cathyp
