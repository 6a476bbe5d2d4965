#include <gtest/gtest.h>

#include "cathyp/charpoly.hpp"
#include "cathyp/sampling.hpp"
#include "cathyp/spectral.hpp"
#include "oracles.hpp"

using namespace cathyp;

namespace {

int oracle_geometric(const Matrix& a, const Matrix& a0, Complex eta) {
    const int n = static_cast<int>(a.rows());
    std::vector<std::vector<Complex>> m(n, std::vector<Complex>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m[i][j] = a(i, j) - eta * a0(i, j);
    }
    return n - oracle::row_reduction_rank(m, 1e-9);
}

State zero_velocity(const State& s) {
    State out = s;
    out.v.setZero();
    return out;
}

} // namespace

TEST(PencilSpectrum, CcjAtIdealGasDefaults) {
    const State s = State::three_d(1.0, Vector3::Zero(), 1.0, Vector3(0.3, -2.0, 1.0));
    const Direction e1 = Direction::axis(3, 0);
    const auto sys = assemble_3d(ideal_gas(), s);
    const auto rep = pencil_spectrum(sys.a0, symbol_ccj(ideal_gas(), s, e1));
    EXPECT_EQ(rep.verdict, Verdict::Hyperbolic);
    ASSERT_EQ(rep.clusters.size(), 5u);
    const Cluster& zero = rep.nearest(0.0);
    EXPECT_EQ(zero.algebraic, 4);
    EXPECT_EQ(zero.geometric, 4);
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    for (double eta : {phi, phi - 1.0, -phi, 1.0 - phi}) {
        const Cluster& c = rep.nearest(eta);
        EXPECT_NEAR(c.value.real(), eta, 1e-12);
        EXPECT_EQ(c.algebraic, 1);
        EXPECT_EQ(c.geometric, 1);
    }
    EXPECT_NEAR(rep.spectral_radius, phi, 1e-12);
}

TEST(PencilSpectrum, VerdictExamples) {
    const auto model = ideal_gas();
    const State christov = State::three_d(1.0, Vector3::Zero(), 1.0, Vector3(1.0, 1.0, 1.0));
    const Direction aligned = Direction::normalized(christov.q);
    const auto weak = classify_state(model, christov, aligned, LambdaNu{-1.0, 1.0});
    EXPECT_EQ(weak.verdict, Verdict::WeaklyHyperbolic);
    ASSERT_TRUE(weak.defective_cluster.has_value());
    EXPECT_LT(weak.clusters[*weak.defective_cluster].geometric, 4);
    EXPECT_EQ(weak.max_abs_imag(), 0.0);

    const auto w = witness_q(model, {1.0, 1.0}, LambdaNu{1.0, 0.0});
    const auto non = classify_state(model, State::one_d(1.0, 0.0, 1.0, w.witness_q_value),
                                    Direction(Vector::Ones(1)), LambdaNu{1.0, 0.0});
    EXPECT_EQ(non.verdict, Verdict::NonHyperbolic);
    ASSERT_TRUE(non.complex_cluster.has_value());
    EXPECT_GT(non.clusters[*non.complex_cluster].value.imag(), 0.0);
}

TEST(PencilSpectrum, ZeroHeatFluxMatchesCcj) {
    StateSampler rng(41);
    for (int t = 0; t < 30; ++t) {
        State s = rng.state(3);
        s.q.setZero();
        const Direction xi = rng.direction(3);
        const LambdaNu ln{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const auto obj = classify_state(ideal_gas(), s, xi, ln);
        const auto ccj = classify_state(ideal_gas(), s, xi, std::nullopt, {}, SymbolKind::ChristovJordan);
        EXPECT_EQ(obj.verdict, Verdict::Hyperbolic);
        EXPECT_EQ(ccj.verdict, Verdict::Hyperbolic);
    }
}

TEST(PencilSpectrum, JordanCompatibleIsHyperbolic) {
    StateSampler rng(43);
    const auto model = make_model("stiffened-gas", {{"kappa", 2.0}, {"tau", 0.5}});
    for (int t = 0; t < 100; ++t) {
        const State s = rng.state(3);
        const Direction xi = rng.direction(3);
        const auto rep = classify_state(model, s, xi, LambdaNu{1.0, -1.0});
        EXPECT_EQ(rep.verdict, Verdict::Hyperbolic);
        EXPECT_EQ(rep.nearest(xi.vec().dot(s.v)).geometric, 4);
    }
}

TEST(PencilSpectrum, GeometricMultiplicityMatchesRowReduction) {
    StateSampler rng(47);
    for (int t = 0; t < 60; ++t) {
        const State s = zero_velocity(rng.state(3));
        const Direction xi = rng.direction(3);
        const double lambda = rng.uniform(-2, 2);
        const LambdaNu ln = t % 2 ? LambdaNu{lambda, -lambda} : LambdaNu{lambda, rng.uniform(-2, 2)};
        const auto sys = assemble_3d(ideal_gas(), s, ln);
        const Matrix a = symbol_3d(ideal_gas(), s, xi, ln);
        const auto rep = pencil_spectrum(sys.a0, a);
        for (const auto& c : rep.clusters) {
            EXPECT_EQ(c.geometric, oracle_geometric(a, sys.a0, c.value)) << "eta = " << c.value;
        }
    }
    // The defect witness, where a tolerance error would show first.
    const auto dw = defect_witness(ideal_gas(), {1.0, 1.0}, LambdaNu{-1.0, 1.0});
    const auto sys = assemble_3d(ideal_gas(), dw.state, LambdaNu{-1.0, 1.0});
    const Matrix a = symbol_3d(ideal_gas(), dw.state, Direction(dw.xi_bar), LambdaNu{-1.0, 1.0});
    EXPECT_EQ(oracle_geometric(a, sys.a0, 0.0), 2);
}

TEST(PencilSpectrum, EigenvaluesAreTransportPlusQuarticRoots) {
    StateSampler rng(53);
    for (int t = 0; t < 200; ++t) {
        const State s = rng.state(3);
        const Direction xi = rng.direction(3);
        const LambdaNu ln{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const auto rep = classify_state(ideal_gas(), s, xi, ln);
        const double vx = xi.vec().dot(s.v);
        std::vector<Complex> expected(4, Complex(vx, 0.0));
        for (const auto& z : quartic_roots(quartic_from_state_3d(ideal_gas(), s, xi, ln)).roots) {
            expected.push_back(vx - z);
        }
        std::vector<Complex> got = rep.eigenvalues;
        ASSERT_EQ(got.size(), 8u);
        for (const auto& e : expected) {
            auto it = std::min_element(got.begin(), got.end(), [&](const Complex& l, const Complex& r) {
                return std::abs(l - e) < std::abs(r - e);
            });
            EXPECT_LT(std::abs(*it - e), 1e-6 * (1.0 + rep.spectral_radius)) << e;
            got.erase(it);
        }
    }
}

TEST(PencilSpectrum, VerdictMatchesEigenvectorDefinition) {
    // Hyperbolic <=> real spectrum and N independent eigenvectors.
    StateSampler rng(59);
    for (int t = 0; t < 100; ++t) {
        const State s = rng.state(3);
        const Direction xi = rng.direction(3);
        const double lambda = rng.uniform(-2, 2);
        const LambdaNu ln = t % 3 == 0 ? LambdaNu{1.0, -1.0} : LambdaNu{lambda, t % 3 == 1 ? -lambda : 0.3};
        const auto sys = assemble_3d(ideal_gas(), s, ln);
        const Matrix a = symbol_3d(ideal_gas(), s, xi, ln);
        const auto rep = pencil_spectrum(sys.a0, a);
        const ComplexMatrix vecs = pencil_eigenvectors(sys.a0, a, rep);
        Eigen::JacobiSVD<ComplexMatrix> svd(vecs);
        const auto& sv = svd.singularValues();
        int rank = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv(i) > 1e-8 * sv(0);
        const bool real = rep.max_abs_imag() == 0.0;
        const bool complete = rank == 8;
        if (rep.verdict == Verdict::Hyperbolic) {
            EXPECT_TRUE(real && complete);
        } else if (rep.verdict == Verdict::WeaklyHyperbolic) {
            EXPECT_TRUE(real && !complete);
        } else {
            EXPECT_FALSE(real);
        }
    }
}

TEST(PencilSpectrum, SingularA0) {
    Matrix a0 = Matrix::Identity(4, 4);
    a0(2, 2) = 0.0;
    EXPECT_THROW(pencil_spectrum(a0, Matrix::Zero(4, 4)), SingularA0);
    EXPECT_EQ(verdict_from_string("WEAKLY_HYPERBOLIC"), Verdict::WeaklyHyperbolic);
    EXPECT_THROW(verdict_from_string("hyperbolic"), InvalidInput);
}

TEST(Eta0BasisTest, UnitDirectionZeroFlux) {
    const State s = State::three_d(1.0, Vector3::Zero(), 1.0, Vector3::Zero());
    const auto b = eta0_basis(ideal_gas(), s, Direction::axis(3, 0));
    EXPECT_EQ(b.v5_first, 0.0);
    EXPECT_EQ(b.v5_second, 0.0);
    EXPECT_EQ(b.branch, 1);
    Vector e2 = Vector::Zero(8), e3 = Vector::Zero(8);
    e2(2) = 1.0;
    e3(3) = 1.0;
    EXPECT_EQ(b.vectors[2], e2);
    EXPECT_EQ(b.vectors[3], e3);
    for (int i = 0; i < 2; ++i) {
        EXPECT_EQ(b.vectors[i].head<5>().norm(), 0.0);
        EXPECT_EQ(b.vectors[i](5), 0.0);
    }
}

TEST(Eta0BasisTest, MixedVectorExample) {
    const State s = State::three_d(1.0, Vector3::Zero(), 1.0, Vector3(0.0, 1.0, 0.0));
    const Direction e1 = Direction::axis(3, 0);
    const auto b = eta0_basis(ideal_gas(), s, e1);
    EXPECT_DOUBLE_EQ(b.v5_first, -1.0);
    Vector expected(8);
    expected << 1, 0, 1, 0, -1, 0, 0, 0;
    EXPECT_TRUE(b.vectors[2].isApprox(expected, 1e-15)) << b.vectors[2].transpose();
    const Matrix a = symbol_3d(ideal_gas(), s, e1, LambdaNu{1.0, -1.0});
    EXPECT_LT((a * expected).norm(), 1e-15);
}

TEST(Eta0BasisTest, AllBranchesSpanTheEigenspace) {
    StateSampler rng(61);
    const auto model = make_model("stiffened-gas", {{"kappa", 1.7}, {"tau", 0.6}});
    std::vector<Direction> dirs{Direction::axis(3, 2), Direction(Vector3(0.0, 0.0, -1.0)),
                                Direction::normalized(Vector3(0.0, 0.8, 0.6)),
                                Direction::normalized(Vector3(0.0, -0.2, 0.9)),
                                Direction::normalized(Vector3(0.1, 0.05, 1.0))};
    for (int i = 0; i < 30; ++i) dirs.push_back(rng.direction(3));
    std::array<int, 4> seen{};
    for (const auto& xi : dirs) {
        const State s = rng.state(3);
        const auto b = eta0_basis(model, s, xi);
        ++seen[b.branch];
        const auto sys = assemble_3d(model, s);
        const double eta0 = xi.vec().dot(s.v);
        const Matrix shifted = symbol_3d(model, s, xi) - eta0 * sys.a0;
        const Matrix v = b.as_matrix();
        for (int k = 0; k < 4; ++k) {
            EXPECT_LT((shifted * v.col(k)).norm() / (shifted.norm() * v.col(k).norm()), 1e-10);
        }
        Eigen::JacobiSVD<Matrix> svd(v);
        EXPECT_GT(svd.singularValues()(3), 1e-3 * svd.singularValues()(0));
        EXPECT_LT(std::abs(b.v_xi.dot(Vector3(xi.vec()))), 1e-15);
        EXPECT_LT(std::abs(b.w_xi.dot(Vector3(xi.vec()))), 1e-15);
    }
    EXPECT_GT(seen[1], 0);
    EXPECT_GT(seen[2], 0);
    EXPECT_GT(seen[3], 0);
}

TEST(Eta0BasisTest, ThirdBranchAtPoles) {
    const Vector3 q(0.7, -1.1, 2.0);
    for (double sign : {1.0, -1.0}) {
        const State s = State::three_d(1.0, Vector3::Zero(), 1.0, q);
        const auto b = eta0_basis(ideal_gas(), s, Direction(Vector3(0.0, 0.0, sign)));
        EXPECT_EQ(b.branch, 3);
        EXPECT_EQ(b.v_xi, Vector3(1.0, 0.0, 0.0));
        EXPECT_EQ(b.w_xi, Vector3(0.0, 1.0, 0.0));
        // V5 = -(tau/kappa)(alpha_1 q_1 + alpha_2 q_2) for either pole.
        EXPECT_NEAR(b.v5_first, -q(0), 1e-15);
        EXPECT_NEAR(b.v5_second, -q(1), 1e-15);
    }
}

TEST(Eta0BasisTest, RejectsOtherPairs) {
    const State s = State::three_d(1.0, Vector3::Zero(), 1.0, Vector3::Ones());
    EXPECT_THROW(eta0_basis(ideal_gas(), s, Direction::axis(3, 0), LambdaNu{-1.0, 1.0}), WrongLambdaNu);
    EXPECT_NO_THROW(eta0_basis(ideal_gas(), s, Direction::axis(3, 0)));
}

TEST(DefectWitnessTest, GeometricMultiplicityTwo) {
    for (LambdaNu ln : {LambdaNu{-1.0, 1.0}, LambdaNu{2.0, -2.0}, LambdaNu{0.5, -0.5}, LambdaNu{-3.0, 3.0}}) {
        const auto dw = defect_witness(ideal_gas(), {1.0, 1.0}, ln);
        EXPECT_EQ(dw.eta0_algebraic, 4);
        EXPECT_EQ(dw.eta0_geometric, 2) << ln.lambda;
        EXPECT_EQ(dw.report.verdict, Verdict::WeaklyHyperbolic);
        EXPECT_NEAR(dw.xi_bar.dot(dw.q_bar), 1.0, 1e-15);
    }
    const auto other = defect_witness(make_model("stiffened-gas"), {2.0, 0.5}, LambdaNu{-1.0, 1.0});
    EXPECT_EQ(other.eta0_geometric, 2);
}

TEST(DefectWitnessTest, Preconditions) {
    EXPECT_THROW(defect_witness(ideal_gas(), {1.0, 1.0}, LambdaNu{1.0, -1.0}), NotApplicable);
    EXPECT_THROW(defect_witness(ideal_gas(), {1.0, 1.0}, LambdaNu{1.0, 0.0}), NotApplicable);
    EXPECT_THROW(defect_witness(ideal_gas(), {-1.0, 1.0}, LambdaNu{-1.0, 1.0}), DomainError);
}
