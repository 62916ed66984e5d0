#include "fmm/kron.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

namespace fmm {
namespace {

TEST(Kron, WorkedExample) {
    const RationalMatrix X{{1, 2}, {3, 4}}, Y{{0, 1}, {1, 0}};
    const RationalMatrix K = kron(X, Y);
    ASSERT_EQ(K.rows(), 4u);
    ASSERT_EQ(K.cols(), 4u);
    EXPECT_EQ(K, oracle::kron_bruteforce(X, Y));
    EXPECT_EQ(K(0, 1), Rational(1));
    EXPECT_EQ(K(0, 0), Rational(0));
    EXPECT_EQ(K(2, 1), Rational(3));
    EXPECT_EQ(K(3, 2), Rational(4));
    const RationalMatrix expected{{0, 1, 0, 2}, {1, 0, 2, 0}, {0, 3, 0, 4}, {3, 0, 4, 0}};
    EXPECT_EQ(K, expected);
}

TEST(Kron, IdentityAndScalar) {
    const RationalMatrix Y{{1, -2, 3}, {0, 5, 7}};
    const RationalMatrix K = kron(RationalMatrix::identity(2), Y);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 6; ++c) {
            const bool diag = (r / 2) == (c / 3);
            EXPECT_EQ(K(r, c), diag ? Y(r % 2, c % 3) : Rational(0));
        }
    EXPECT_EQ(kron(Y, RationalMatrix::identity(1)), Y);
}

TEST(Kron, MatchesBruteForceOnRandom) {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::size_t> dim(1, 4);
    for (int t = 0; t < 200; ++t) {
        const auto X = oracle::random_rational(dim(rng), dim(rng), rng, 0.6);
        const auto Y = oracle::random_rational(dim(rng), dim(rng), rng, 0.6);
        EXPECT_EQ(kron(X, Y), oracle::kron_bruteforce(X, Y));
    }
}

TEST(Kron, NnzMultiplicative) {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<std::size_t> dim(1, 5);
    std::uniform_real_distribution<double> dens(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        const auto X = oracle::random_rational(dim(rng), dim(rng), rng, dens(rng));
        const auto Y = oracle::random_rational(dim(rng), dim(rng), rng, dens(rng));
        EXPECT_EQ(nnz(kron(X, Y)), nnz(X) * nnz(Y));
    }
}

TEST(Kron, MixedProduct) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> dim(1, 3);
    for (int t = 0; t < 200; ++t) {
        const std::size_t a = dim(rng), b = dim(rng), c = dim(rng), d = dim(rng), e = dim(rng), f = dim(rng);
        const auto X = oracle::random_rational(a, b, rng), Z = oracle::random_rational(b, c, rng);
        const auto Y = oracle::random_rational(d, e, rng), W = oracle::random_rational(e, f, rng);
        EXPECT_EQ(kron(X, Y) * kron(Z, W), kron(X * Z, Y * W));
    }
}

TEST(Compose, StrassenTwoLevelShape) {
    const FmmSpec s = strassen_spec();
    const MultiLevelSpec ml = compose({s, s});
    EXPECT_TRUE(ml.validated);
    EXPECT_EQ(ml.depth(), 2u);
    EXPECT_EQ(ml.id(), "strassen+strassen");
    for (const RationalMatrix* M : {&ml.bigU, &ml.bigV, &ml.bigW}) {
        EXPECT_EQ(M->rows(), 16u);
        EXPECT_EQ(M->cols(), 49u);
        EXPECT_EQ(nnz(*M), 144u);
    }
    EXPECT_EQ(ml.bigU, kron(s.U, s.U));
    EXPECT_EQ(ml.Mrad, 4u);
    EXPECT_EQ(ml.Rtot, 49u);
}

TEST(Compose, SingleLevelUnchanged) {
    const MultiLevelSpec ml = compose({strassen_spec()});
    EXPECT_EQ(ml.bigU, strassen_spec().U);
    EXPECT_EQ(ml.bigV, strassen_spec().V);
    EXPECT_EQ(ml.bigW, strassen_spec().W);
    EXPECT_EQ(flatten(ml).U, strassen_spec().U);
}

TEST(Compose, HybridRadices) {
    const FmmSpec c232 = classical_spec(2, 3, 2);
    const MultiLevelSpec ml = compose({strassen_spec(), c232});
    EXPECT_EQ(ml.Rtot, 7u * 12u);
    EXPECT_EQ(ml.Mrad, 4u);
    EXPECT_EQ(ml.Krad, 6u);
    EXPECT_EQ(ml.Nrad, 4u);
    EXPECT_EQ(ml.bigU.rows(), 24u);
    EXPECT_EQ(ml.bigV.rows(), 24u);
    EXPECT_EQ(ml.bigW.rows(), 16u);
}

TEST(Compose, BrentClosure) {
    const std::vector<FmmSpec> pool{strassen_spec(), classical_spec(2, 3, 2), classical_spec(1, 2, 1),
                                    embed_spec(strassen_spec(), 2, 3, 2, "s232"), classical_spec(3, 1, 2)};
    for (const auto& a : pool)
        for (const auto& b : pool) {
            const MultiLevelSpec ml = compose({a, b});
            EXPECT_TRUE(validate_brent(ml).passed()) << ml.id();
        }
}

// Reading composed rows row-major (without the recursive-block permutation)
// breaks correctness, so the composed check really depends on the order.
TEST(Compose, RowOrderMatters) {
    const MultiLevelSpec ml = compose({strassen_spec(), strassen_spec()});
    EXPECT_FALSE(validate_brent(ml.Mrad, ml.Krad, ml.Nrad, ml.bigU, ml.bigV, ml.bigW).passed());
}

TEST(Compose, FlattenMatchesRecursiveOracle) {
    std::mt19937_64 rng(4);
    const std::vector<std::vector<FmmSpec>> chains{
        {strassen_spec(), strassen_spec()},
        {strassen_spec(), classical_spec(2, 3, 2)},
        {classical_spec(1, 2, 3), strassen_spec()},
        {strassen_spec(), classical_spec(1, 2, 1), strassen_spec()},
    };
    for (const auto& chain : chains) {
        const MultiLevelSpec ml = compose(chain);
        const FmmSpec flat[] = {flatten(ml)};
        for (int t = 0; t < 3; ++t) {
            const auto A = oracle::random_rational(ml.Mrad, 2 * ml.Krad, rng);
            const auto B = oracle::random_rational(2 * ml.Krad, ml.Nrad, rng);
            const auto C = A * B;
            EXPECT_EQ(oracle::recursive_fmm(chain, A, B), C) << ml.id();
            EXPECT_EQ(oracle::recursive_fmm(flat, A, B), C) << ml.id();
        }
    }
}

TEST(Compose, Associativity) {
    const FmmSpec a = strassen_spec(), b = classical_spec(1, 2, 1), c = embed_spec(strassen_spec(), 2, 3, 2, "e");
    const MultiLevelSpec abc = compose({a, b, c});
    EXPECT_EQ(abc.bigU, kron(kron(a.U, b.U), c.U));
    EXPECT_EQ(abc.bigU, kron(a.U, compose({b, c}).bigU));
    EXPECT_EQ(abc.bigW, kron(a.W, compose({b, c}).bigW));
    const FmmSpec bc = flatten(compose({b, c}));
    EXPECT_TRUE(validate_brent(bc).passed());
    const MultiLevelSpec nested = compose({a, bc});
    EXPECT_EQ(flatten(nested).U, flatten(abc).U);
    EXPECT_EQ(flatten(nested).V, flatten(abc).V);
    EXPECT_EQ(flatten(nested).W, flatten(abc).W);
    EXPECT_EQ(nested.Rtot, abc.Rtot);
}

TEST(Compose, Errors) {
    EXPECT_THROW(compose(std::span<const FmmSpec>{}), CompositionError);
    FmmSpec bad = strassen_spec();
    bad.U(0, 0) = Rational(2);
    EXPECT_THROW(compose({strassen_spec(), bad}), CompositionError);
}

TEST(FlopRatio, Values) {
    EXPECT_EQ(effective_flop_ratio(compose({strassen_spec()})), Rational(7, 8));
    EXPECT_EQ(effective_flop_ratio(compose({strassen_spec(), strassen_spec()})), Rational(49, 64));
    EXPECT_EQ(effective_flop_ratio(compose({classical_spec(2, 2, 2)})), Rational(1));
}

TEST(Serialize, MultiLevelRecordsChain) {
    const MultiLevelSpec ml = compose({strassen_spec(), strassen_spec()});
    const std::string text = serialize_multilevel(ml);
    EXPECT_NE(text.find("# L = 2"), std::string::npos);
    const FmmSpec back = parse_spec(text);
    EXPECT_EQ(back, flatten(ml));
    EXPECT_EQ(back.mt, 4u);
    EXPECT_EQ(back.rank, 49u);
    EXPECT_TRUE(validate_brent(back).passed());
}

}  // namespace
}  // namespace fmm
