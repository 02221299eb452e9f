#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bottlab/loring.hpp"
#include "bottlab/model.hpp"
#include "bottlab/random.hpp"

using namespace bottlab;

namespace {

const SymbolTriple& triple()
{
    static const SymbolTriple t = default_triple();
    return t;
}

UnitaryMatrix diagonal_unitary(const Eigen::VectorXd& turns)
{
    Eigen::VectorXcd d(turns.size());
    for (Index i = 0; i < turns.size(); ++i)
        d(i) = std::polar(1.0, 2.0 * std::numbers::pi * turns(i));
    return UnitaryMatrix(SquareMatrix(Matrix(d.asDiagonal())));
}

Eigen::VectorXd random_turns(Index n, Rng& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::VectorXd t(n);
    for (auto& x : t)
        x = unit(rng);
    return t;
}

Matrix reference_projection(Index n)
{
    Matrix p = Matrix::Zero(2 * n, 2 * n);
    p.topLeftCorner(n, n).setIdentity();
    return p;
}

UnitaryMatrix conjugate(const UnitaryMatrix& w, const UnitaryMatrix& x)
{
    return UnitaryMatrix(SquareMatrix(w.matrix() * x.matrix() * w.matrix().adjoint()));
}

} // namespace

TEST(LoringElement, IdentityPairGivesReferenceProjection)
{
    for (Index n : {1, 3, 5}) {
        const LoringElement e = loring_element(UnitaryMatrix::identity(n), UnitaryMatrix::identity(n), triple());
        EXPECT_LE((e.matrix().matrix() - reference_projection(n)).norm(), 1e-15);
        EXPECT_EQ(e.source_dim(), n);
    }
}

TEST(LoringElement, CommutingDiagonalPairIsIdempotent)
{
    Rng rng = make_rng(41);
    const UnitaryMatrix u = diagonal_unitary(random_turns(4, rng));
    const UnitaryMatrix v = diagonal_unitary(random_turns(4, rng));
    const IndexResult r = bott_index(u, v, triple());
    EXPECT_LE(r.defect, 1e-10);
    EXPECT_EQ(r.index, 0);
}

TEST(LoringElement, DimensionMismatchThrows)
{
    EXPECT_THROW(loring_element(UnitaryMatrix::identity(2), UnitaryMatrix::identity(3), triple()), DimensionError);
    EXPECT_THROW(defect_identity_rhs(UnitaryMatrix::identity(2), UnitaryMatrix::identity(3), triple()),
                 DimensionError);
}

TEST(LoringElement, TraceIsSourceDimensionForRandomPairs)
{
    Rng rng = make_rng(43);
    for (Index n : {2, 5, 11}) {
        const LoringElement e = loring_element(random_unitary(n, rng), random_unitary(n, rng), triple());
        EXPECT_NEAR(e.matrix().trace(), static_cast<double>(n), 1e-9);
    }
}

TEST(DefectIdentity, VanishesForIdentityAndCommutingPairs)
{
    EXPECT_EQ(operator_norm(defect_identity_rhs(UnitaryMatrix::identity(3), UnitaryMatrix::identity(3), triple())),
              0.0);
    Rng rng = make_rng(47);
    const UnitaryMatrix u = diagonal_unitary(random_turns(6, rng));
    const UnitaryMatrix v = diagonal_unitary(random_turns(6, rng));
    EXPECT_LE(operator_norm(defect_identity_rhs(u, v, triple())), 1e-10);
}

TEST(DefectIdentity, MatchesDirectSquareOnClockShift)
{
    for (int n : {8, 16}) {
        const UnitaryMatrix u = voiculescu_pair(n).first;
        const UnitaryMatrix b = cyclic_shift(n);
        const Matrix e = loring_element(u, b, triple()).matrix().matrix();
        const Matrix direct = e * e - e;
        const Matrix rhs = defect_identity_rhs(u, b, triple()).matrix();
        EXPECT_LE((direct - rhs).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_NEAR(bott_index(u, b, triple()).defect, operator_norm(SquareMatrix(rhs)), 1e-10);
    }
}

TEST(DefectIdentity, HoldsForRandomUnitaryPairs)
{
    Rng rng = make_rng(53);
    for (int trial = 0; trial < 12; ++trial) {
        const Index n = 2 + trial;
        const UnitaryMatrix u = random_unitary(n, rng), v = random_unitary(n, rng);
        const Matrix e = loring_element(u, v, triple()).matrix().matrix();
        const Matrix rhs = defect_identity_rhs(u, v, triple()).matrix();
        EXPECT_LE(operator_norm(Matrix(e * e - e - rhs)), 1e-9) << "n = " << n;
    }
}

TEST(SpectralGap, ReferenceProjectionAndCommutingPair)
{
    const LoringElement ref = loring_element(UnitaryMatrix::identity(4), UnitaryMatrix::identity(4), triple());
    EXPECT_NEAR(spectral_gap_at_half(ref), 0.5, 1e-15);

    Rng rng = make_rng(59);
    const LoringElement e =
        loring_element(diagonal_unitary(random_turns(5, rng)), diagonal_unitary(random_turns(5, rng)), triple());
    EXPECT_GE(spectral_gap_at_half(e), 0.5 - 1e-9);
}

TEST(SpectralGap, ClockShiftAt32IsOpen)
{
    const double gap = spectral_gap_at_half(loring_element(voiculescu_pair(32).first, cyclic_shift(32), triple()));
    EXPECT_GT(gap, 0.4);
    EXPECT_LT(gap, 0.5);
}

TEST(SpectralProjection, TwoByTwoCase)
{
    Matrix m(2, 2);
    m << 0.5, 0.4, 0.4, 0.5; // eigenvalues 0.1, 0.9
    const SquareMatrix p = spectral_projection(HermitianMatrix(SquareMatrix(m)));
    Matrix expected(2, 2);
    expected << 0.5, 0.5, 0.5, 0.5;
    EXPECT_LE((p.matrix() - expected).norm(), 1e-14);
}

TEST(SpectralProjection, ReferenceIsFixed)
{
    const HermitianMatrix ref{SquareMatrix(reference_projection(3))};
    EXPECT_LE((spectral_projection(ref).matrix() - reference_projection(3)).norm(), 1e-15);
}

TEST(SpectralProjection, GapClosedThrowsWithGap)
{
    Matrix m(2, 2);
    m << 0.5, 0.01, 0.01, 0.5;
    try {
        (void)spectral_projection(HermitianMatrix(SquareMatrix(m)));
        FAIL() << "expected GapClosedError";
    }
    catch (const GapClosedError& e) {
        EXPECT_NEAR(e.gap(), 0.01, 1e-14);
    }
}

TEST(SpectralProjection, ClockShiftHasRankNPlusOne)
{
    const LoringElement e = loring_element(voiculescu_pair(16).first, cyclic_shift(16), triple());
    const SquareMatrix p = spectral_projection(e);
    const Matrix& pm = p.matrix();
    EXPECT_NEAR(p.trace().real(), 17.0, 1e-6);
    EXPECT_LE(operator_norm(Matrix(pm * pm - pm)), 1e-9);
    EXPECT_LE(operator_norm(Matrix(pm - pm.adjoint())), 1e-9);
}

TEST(BottIndex, TrivialPairsHaveIndexZero)
{
    EXPECT_EQ(bott_index(UnitaryMatrix::identity(6), UnitaryMatrix::identity(6), triple()).index, 0);
    Rng rng = make_rng(61);
    const UnitaryMatrix w = random_unitary(7, rng);
    const UnitaryMatrix u = conjugate(w, diagonal_unitary(random_turns(7, rng)));
    const UnitaryMatrix v = conjugate(w, diagonal_unitary(random_turns(7, rng)));
    ASSERT_LE(operator_norm(commutator(u, v)), 1e-10);
    EXPECT_EQ(bott_index(u, v, triple()).index, 0);
}

TEST(BottIndex, ClockAgainstBackwardShiftIsOne)
{
    for (int N : {16, 32, 64}) {
        const IndexResult r = bott_index(voiculescu_pair(N).first, cyclic_shift(N), triple());
        EXPECT_EQ(r.index, 1) << N;
        EXPECT_NEAR(r.raw_trace, 1.0, 1e-6) << N;
        EXPECT_GT(r.gap, kDefaultGapMin);
    }
}

TEST(BottIndex, ForwardShiftReversesTheSign)
{
    const auto [u, v] = voiculescu_pair(16);
    EXPECT_EQ(bott_index(u, v, triple()).index, -1);
}

TEST(BottIndex, InvariantUnderSimultaneousConjugation)
{
    Rng rng = make_rng(67);
    const UnitaryMatrix u = voiculescu_pair(12).first;
    const UnitaryMatrix b = cyclic_shift(12);
    const int base = bott_index(u, b, triple()).index;
    for (int trial = 0; trial < 3; ++trial) {
        const UnitaryMatrix w = random_unitary(12, rng);
        EXPECT_EQ(bott_index(conjugate(w, u), conjugate(w, b), triple()).index, base);
    }
}

TEST(BottIndex, ClosedGapIsReportedNotRounded)
{
    // At N = 4 the clock/shift element has 1/2 in its spectrum.
    EXPECT_THROW(bott_index(voiculescu_pair(4).first, cyclic_shift(4), triple()), GapClosedError);
}
