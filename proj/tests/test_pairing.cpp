#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bottlab/pairing.hpp"
#include "bottlab/random.hpp"
#include "oracles.hpp"

using namespace bottlab;

namespace {

const SymbolTriple& triple()
{
    static const SymbolTriple t = default_triple();
    return t;
}

Matrix diag_projection(std::initializer_list<double> entries)
{
    Eigen::VectorXcd d(static_cast<Index>(entries.size()));
    Index i = 0;
    for (double e : entries)
        d(i++) = e;
    return d.asDiagonal();
}

LoopUnitary random_scalar_product_loop(Rng& rng, int k, std::vector<int>& modes)
{
    // Diagonal loop diag(z^{m_1}, ..., z^{m_k}) rotated into a random basis.
    std::uniform_int_distribution<int> pick(-2, 2);
    const Matrix w = random_unitary(k, rng).matrix();
    std::map<int, Matrix> coeffs;
    modes.clear();
    for (int j = 0; j < k; ++j) {
        const int m = pick(rng);
        modes.push_back(m);
        auto [it, inserted] = coeffs.try_emplace(m, Matrix::Zero(k, k));
        it->second += w.col(j) * w.col(j).adjoint();
    }
    return LoopUnitary(k, std::move(coeffs));
}

} // namespace

TEST(LoopUnitary, RejectsNonUnitaryAndBadBasepoint)
{
    EXPECT_THROW(LoopUnitary(1, {{0, Matrix::Constant(1, 1, 2.0)}}), NotAUnitaryLoop);
    EXPECT_THROW(LoopUnitary(1, {{0, Matrix::Constant(1, 1, -1.0)}}), NotAUnitaryLoop);
    EXPECT_NO_THROW(LoopUnitary(1, {{0, Matrix::Constant(1, 1, -1.0)}}, BasepointPolicy::Any));
    EXPECT_THROW(LoopUnitary(2, {{0, Matrix::Identity(3, 3)}}), DimensionError);
    EXPECT_THROW(LoopUnitary(0, {}), InvalidMatrix);
}

TEST(LoopUnitary, DegreeIgnoresZeroCoefficients)
{
    const LoopUnitary v(1, {{-1, Matrix::Identity(1, 1)}, {5, Matrix::Zero(1, 1)}});
    EXPECT_EQ(v.degree(), 1);
    EXPECT_EQ(v.coeffs().size(), 1u);
}

TEST(ProjectionMatrix, Validation)
{
    EXPECT_THROW(ProjectionMatrix(SquareMatrix(Matrix::Constant(2, 2, 1.0))), NotAProjection);
    const ProjectionMatrix p(SquareMatrix(diag_projection({1, 0, 1})));
    EXPECT_EQ(p.rank(), 2);
}

TEST(BottLoop, ClosedForms)
{
    const LoopUnitary zero = bott_loop(ProjectionMatrix(SquareMatrix(Matrix::Zero(2, 2))));
    EXPECT_EQ(zero.degree(), 0);
    EXPECT_LE((zero.evaluate(0.3) - Matrix::Identity(2, 2)).norm(), 1e-15);

    const LoopUnitary b = bott_loop(ProjectionMatrix(SquareMatrix::identity(1)));
    for (double x : {0.1, 0.37, 0.8})
        EXPECT_LE(std::abs(b.evaluate(x)(0, 0) - std::polar(1.0, -2.0 * std::numbers::pi * x)), 1e-15);

    const LoopUnitary d = bott_loop(ProjectionMatrix(SquareMatrix(diag_projection({1, 0}))));
    const Matrix at = d.evaluate(0.25);
    EXPECT_LE(std::abs(at(0, 0) - Complex(0, -1)), 1e-15);
    EXPECT_LE(std::abs(at(1, 1) - 1.0), 1e-15);
    EXPECT_EQ(std::abs(at(0, 1)) + std::abs(at(1, 0)), 0.0);
}

TEST(MultiplicationOperator, ConstantIsIdentity)
{
    const SquareMatrix m = multiplication_operator(LoopUnitary::constant(2), TruncatedFourierSpace(-3, 3));
    EXPECT_EQ((m.matrix() - Matrix::Identity(14, 14)).norm(), 0.0);
}

TEST(MultiplicationOperator, InverseShiftIsSuperdiagonal)
{
    const SquareMatrix m = multiplication_operator(LoopUnitary::monomial(-1), TruncatedFourierSpace(-2, 2));
    Matrix expected = Matrix::Zero(5, 5);
    for (int i = 0; i < 4; ++i)
        expected(i, i + 1) = 1.0;
    EXPECT_EQ((m.matrix() - expected).norm(), 0.0);
}

TEST(MultiplicationOperator, MatchesKroneckerOracle)
{
    const LoopUnitary d = bott_loop(ProjectionMatrix(SquareMatrix(diag_projection({1, 0}))));
    const SquareMatrix m = multiplication_operator(d, TruncatedFourierSpace(-2, 2));
    ASSERT_EQ(m.dim(), 10);
    std::vector<std::pair<int, Matrix>> coeffs(d.coeffs().begin(), d.coeffs().end());
    EXPECT_EQ((m.matrix() - oracle::multiplication_by_kronecker(coeffs, -2, 2)).norm(), 0.0);

    Rng rng = make_rng(71);
    std::vector<int> modes;
    const LoopUnitary r = random_scalar_product_loop(rng, 3, modes);
    std::vector<std::pair<int, Matrix>> rc(r.coeffs().begin(), r.coeffs().end());
    EXPECT_LE((multiplication_operator(r, TruncatedFourierSpace(-4, 6)).matrix() -
               oracle::multiplication_by_kronecker(rc, -4, 6))
                  .norm(),
              1e-14);
}

TEST(MultiplicationOperator, WindowTooSmall)
{
    EXPECT_THROW(multiplication_operator(LoopUnitary::monomial(3), TruncatedFourierSpace(-1, 5)), WindowError);
}

TEST(PairingIndex, AnchorAndConstant)
{
    const PairingResult b = pairing_index(LoopUnitary::monomial(-1), 16.0, triple());
    EXPECT_EQ(b.result.index, 1);
    EXPECT_GT(b.result.gap, kDefaultGapMin);
    for (int k : {1, 3})
        EXPECT_EQ(pairing_index(LoopUnitary::constant(k), 16.0, triple()).result.index, 0);
    EXPECT_EQ(pairing_index(LoopUnitary::constant(2), 3.5, triple()).result.index, 0);
}

TEST(PairingIndex, MonomialsPairToMinusTheirDegree)
{
    for (int m : {-2, -1, 1, 2})
        EXPECT_EQ(pairing_index(LoopUnitary::monomial(m), 24.0, triple()).result.index, -m) << m;
}

TEST(PairingIndex, MinusWindingForScalarLoopsUpToDegreeThree)
{
    for (int m = -3; m <= 3; ++m) {
        const LoopUnitary v = LoopUnitary::monomial(m);
        EXPECT_EQ(pairing_index(v, 32.0, triple()).result.index, -winding_number(v, 64)) << m;
    }
    // Constant phase at the basepoint, homotopic to z^3.
    const LoopUnitary phased(1, {{3, -Matrix::Identity(1, 1)}}, BasepointPolicy::Any);
    EXPECT_EQ(pairing_index(phased, 32.0, triple()).result.index, -3);
}

TEST(PairingIndex, WindowDoublingAndT)
{
    const LoopUnitary b = LoopUnitary::monomial(-1);
    const PairingResult r = pairing_index(b, 16.0, triple());
    const TruncatedFourierSpace doubled(2 * r.window.m_min(), 2 * r.window.m_max());
    EXPECT_EQ(pairing_index_on(b, 16.0, triple(), doubled).index, r.result.index);
    // Constant in t once the gap certificate holds at t and 2t.
    for (double t : {12.0, 24.0, 48.0})
        EXPECT_EQ(pairing_index(b, t, triple()).result.index, 1) << t;
}

TEST(PairingIndex, GapBelowThresholdThrows)
{
    EXPECT_THROW(pairing_index(LoopUnitary::monomial(2), 24.0, triple(), PairingOptions{0.499}), GapClosedError);
}

TEST(PairingIndex, AdditiveUnderDirectSum)
{
    Rng rng = make_rng(73);
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<int> ma, mb;
        const LoopUnitary a = random_scalar_product_loop(rng, 2, ma);
        const LoopUnitary b = random_scalar_product_loop(rng, 1, mb);
        const int ia = pairing_index(a, 24.0, triple()).result.index;
        const int ib = pairing_index(b, 24.0, triple()).result.index;
        EXPECT_EQ(pairing_index(direct_sum(a, b), 24.0, triple()).result.index, ia + ib);
        EXPECT_EQ(ia, -oracle::winding_of_monomials(ma));
        EXPECT_EQ(ib, -oracle::winding_of_monomials(mb));
    }
}

TEST(WindingNumber, ClosedForms)
{
    EXPECT_EQ(winding_number(LoopUnitary::constant(2), 8), 0);
    EXPECT_EQ(winding_number(LoopUnitary::monomial(1), 16), 1);
    EXPECT_EQ(winding_number(LoopUnitary::monomial(-3), 32), -3);
    EXPECT_THROW(winding_number(LoopUnitary::monomial(2), 8), std::invalid_argument);
}

TEST(WindingNumber, BottLoopsWindByMinusRank)
{
    Rng rng = make_rng(79);
    for (int rank = 0; rank <= 4; ++rank) {
        const ProjectionMatrix p(random_projection_matrix(4, rank, rng));
        EXPECT_EQ(winding_number(bott_loop(p), 16), -rank) << rank;
    }
}

TEST(Roundtrip, ZeroUnitAndRandomRankTwo)
{
    EXPECT_TRUE(roundtrip_check(ProjectionMatrix(SquareMatrix::zero(2)), 16.0, triple()));
    EXPECT_TRUE(roundtrip_check(ProjectionMatrix(SquareMatrix::identity(1)), 16.0, triple()));
    Rng rng = make_rng(83);
    const ProjectionMatrix p(random_projection_matrix(4, 2, rng));
    EXPECT_TRUE(roundtrip_check(p, 24.0, triple()));
    EXPECT_EQ(pairing_index(bott_loop(p), 24.0, triple()).result.index, -winding_number(bott_loop(p), 16));
}

TEST(ProductCompatibility, Cases)
{
    const LoopUnitary b = LoopUnitary::monomial(-1);
    EXPECT_TRUE(product_compatibility_check(b, ProjectionMatrix(SquareMatrix::identity(2)), 24.0, triple()));
    EXPECT_EQ(pairing_index(product_loop(b, ProjectionMatrix(SquareMatrix::identity(2))), 24.0, triple()).result.index,
              2);
    EXPECT_TRUE(product_compatibility_check(b, ProjectionMatrix(SquareMatrix::zero(2)), 24.0, triple()));
    EXPECT_TRUE(
        product_compatibility_check(b, ProjectionMatrix(SquareMatrix(diag_projection({1, 0}))), 24.0, triple()));
}

TEST(Locality, ConstantAndShift)
{
    const LocalityReport c = locality_window(LoopUnitary::constant(1), 16.0, triple());
    EXPECT_LE(c.half_width, 17);
    const LocalityReport b = locality_window(LoopUnitary::monomial(-1), 16.0, triple());
    EXPECT_FALSE(b.empty);
    EXPECT_LE(b.half_width, 16 + 1 + 2);
    EXPECT_GE(b.support_min, -1);
}
