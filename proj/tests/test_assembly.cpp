#include <gtest/gtest.h>

#include "cathyp/assembly.hpp"
#include "cathyp/sampling.hpp"

using namespace cathyp;

namespace {

Matrix dense(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(rows.size(), rows.begin()->size());
    int i = 0;
    for (const auto& r : rows) {
        int j = 0;
        for (double x : r) m(i, j++) = x;
        ++i;
    }
    return m;
}

} // namespace

TEST(Assembly, OneDimensionalAtRest) {
    const auto sys = assemble_1d(ideal_gas(), State::one_d(1.0, 0.0, 1.0, 0.0), LambdaNu{1.0, -1.0});
    EXPECT_EQ(sys.a0, Matrix::Identity(4, 4));
    ASSERT_EQ(sys.flux.size(), 1u);
    EXPECT_EQ(sys.flux[0], dense({{0, 1, 0, 0}, {1, 0, 1, 0}, {0, 1, 0, 1}, {0, 0, 1, 0}}));
    EXPECT_EQ(sys.source, Vector::Zero(4));
}

TEST(Assembly, OneDimensionalCouplingEntry) {
    const auto sys = assemble_1d(ideal_gas(), State::one_d(1.0, 0.0, 1.0, 5.0), LambdaNu{1.0, 0.0});
    EXPECT_DOUBLE_EQ(sys.flux[0](3, 1), 5.0);
    EXPECT_DOUBLE_EQ(sys.source(3), 5.0);
    for (double lambda : {-2.0, 0.5, 1.0, 3.0}) {
        const auto off = assemble_1d(ideal_gas(), State::one_d(1.3, 0.2, 0.7, 5.0), LambdaNu{lambda, -lambda});
        EXPECT_EQ(off.flux[0](3, 1), 0.0);
    }
}

TEST(Assembly, A0IsPositiveDiagonal) {
    StateSampler rng(5);
    for (int i = 0; i < 50; ++i) {
        const State s = rng.state(3);
        const auto sys = assemble_3d(make_model("stiffened-gas"), s);
        const Matrix off = sys.a0 - Matrix(sys.a0.diagonal().asDiagonal());
        EXPECT_EQ(off.norm(), 0.0);
        EXPECT_GT(sys.a0.diagonal().minCoeff(), 0.0);
        EXPECT_EQ(sys.a0(1, 1), s.rho);
        EXPECT_EQ(sys.a0(4, 4), s.rho);  // e_theta = 1 by default
        EXPECT_EQ(sys.a0(7, 7), 1.0);
    }
}

TEST(Assembly, QBlockJordanCompatibleIsSkew) {
    const Vector3 q(0.3, -1.2, 2.5);
    const Matrix3 m = q_block(1.0, -1.0, Direction::axis(3, 0), q);
    Matrix3 expected;
    expected << 0.0, q(1), q(2), -q(1), 0.0, 0.0, -q(2), 0.0, 0.0;
    EXPECT_TRUE(m.isApprox(expected, 1e-15)) << m;

    StateSampler rng(9);
    for (int i = 0; i < 100; ++i) {
        const Direction xi = rng.direction(3);
        const Vector3 qq(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
        const Vector3 x(xi.vec());
        const Matrix3 b = q_block(1.0, -1.0, xi, qq);
        EXPECT_LT((b + b.transpose()).norm(), 1e-14);
        EXPECT_LT((b - (x * qq.transpose() - qq * x.transpose())).norm(), 1e-14);
    }
}

TEST(Assembly, QBlockZeroFluxAndZeroPair) {
    StateSampler rng(1);
    for (int i = 0; i < 20; ++i) {
        EXPECT_EQ(q_block(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.direction(3), Vector3::Zero()),
                  Matrix3::Zero());
    }
    const Matrix3 m = q_block(0.0, 0.0, Direction::axis(3, 0), Vector3(0.0, 1.0, 0.0));
    EXPECT_DOUBLE_EQ(m(0, 1), 0.5);
    EXPECT_DOUBLE_EQ(m(1, 0), 0.0);
}

TEST(Assembly, SymbolE1Pattern) {
    for (LambdaNu ln : {LambdaNu{1, -1}, LambdaNu{-1, 1}, LambdaNu{2, 0.5}}) {
        const State s = State::three_d(1.0, Vector3::Zero(), 1.0, Vector3::Zero());
        const Matrix a = symbol_3d(ideal_gas(), s, Direction::axis(3, 0), ln);
        Matrix expected = Matrix::Zero(8, 8);
        expected(0, 1) = 1.0;
        expected(1, 0) = 1.0;
        expected(1, 4) = 1.0;
        expected(4, 1) = 1.0;
        expected(4, 5) = 1.0;
        expected(5, 4) = 1.0;
        EXPECT_EQ(a, expected);
    }
}

TEST(Assembly, SymbolIsLinearInDirection) {
    StateSampler rng(21);
    const auto model = make_model("stiffened-gas");
    for (int i = 0; i < 50; ++i) {
        const State s = rng.state(3);
        const LambdaNu ln{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const auto sys = assemble_3d(model, s, ln);
        const Direction xi = rng.direction(3);
        Matrix sum = Matrix::Zero(8, 8);
        for (int k = 0; k < 3; ++k) sum += xi(k) * sys.flux[k];
        const Matrix a = symbol_3d(model, s, xi, ln);
        EXPECT_LT((a - sum).norm(), 1e-12 * (1.0 + a.norm()));
    }
}

TEST(Assembly, ChristovJordanDiffersOnlyInCouplingBlock) {
    const State s = State::three_d(1.0, Vector3::Zero(), 1.0, Vector3(0.0, 1.0, 0.0));
    const Direction e1 = Direction::axis(3, 0);
    const Matrix ccj = symbol_ccj(ideal_gas(), s, e1);
    const Matrix obj = symbol_3d(ideal_gas(), s, e1, LambdaNu{1.0, -1.0});
    EXPECT_FALSE(ccj.isApprox(obj));
    Matrix diff = obj - ccj;
    EXPECT_EQ((diff.block<3, 3>(5, 1)), q_block(1.0, -1.0, e1, Vector3(s.q)));
    diff.block<3, 3>(5, 1).setZero();
    EXPECT_EQ(diff.norm(), 0.0);

    const State rest = State::three_d(1.0, Vector3(0.1, 0.2, 0.3), 2.0, Vector3::Zero());
    StateSampler rng(4);
    for (int i = 0; i < 10; ++i) {
        const Direction xi = rng.direction(3);
        EXPECT_EQ(symbol_ccj(ideal_gas(), rest, xi), symbol_3d(ideal_gas(), rest, xi, LambdaNu{3.0, 1.0}));
    }
}

TEST(Assembly, TauScalesTheCouplingBlock) {
    const auto model = make_model("ideal-gas", {{"tau", 2.5}});
    const State s = State::three_d(1.0, Vector3::Zero(), 1.0, Vector3(0.4, 1.0, -0.3));
    const Direction xi = Direction::normalized(Vector3(1.0, 2.0, 2.0));
    const LambdaNu ln{0.7, 0.2};
    const Matrix a = symbol_3d(model, s, xi, ln);
    EXPECT_TRUE(Matrix3(a.block<3, 3>(5, 1)).isApprox(2.5 * q_block(0.7, 0.2, xi, Vector3(s.q)), 1e-14));
    EXPECT_DOUBLE_EQ(assemble_3d(model, s, ln).a0(6, 6), 2.5);
}

TEST(Assembly, InputValidation) {
    EXPECT_THROW(Direction(Vector3(1.0, 1.0, 0.0)), InvalidInput);
    EXPECT_THROW(Direction::normalized(Vector3::Zero()), InvalidInput);
    EXPECT_NO_THROW(Direction(Vector3(1.0, 1e-13, 0.0)));
    const State s3 = State::three_d(1.0, Vector3::Zero(), 1.0, Vector3::Zero());
    EXPECT_THROW(symbol_3d(ideal_gas(), s3, Direction(Vector::Ones(1))), InvalidInput);
    EXPECT_THROW(assemble_1d(ideal_gas(), s3), InvalidInput);
    State bad = s3;
    bad.theta = -1.0;
    EXPECT_THROW(assemble_3d(ideal_gas(), bad), DomainError);
    bad = s3;
    bad.dim = 2;
    EXPECT_THROW(assemble(ideal_gas(), bad), InvalidInput);
}
