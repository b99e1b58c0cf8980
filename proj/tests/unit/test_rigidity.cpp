#include <gtest/gtest.h>

#include <cmath>

#include "../support/fixtures.hpp"
#include "polyhardy/errors.hpp"
#include "polyhardy/rigidity.hpp"

namespace rg = polyhardy::rigidity;
using fixture::full;
using fixture::inner;
using fixture::z_power;
using oracle::Complex;
using oracle::Index;
using oracle::Matrix;
using oracle::SlotData;

namespace {

Matrix dense_ps(const std::vector<SlotData>& slots, const std::vector<Index>& degrees) {
  std::vector<Matrix> f;
  Index d = 1;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    const Index N = degrees[k];
    d *= N + 1;
    f.push_back(slots[k].inner ? oracle::projector(oracle::model_space_by_kernels(slots[k].zeros, N))
                               : Matrix::Identity(N + 1, N + 1));
  }
  return Matrix::Identity(d, d) - oracle::kron(f);
}

}  // namespace

TEST(Equality, IdenticalScenarios) {
  const std::vector<SlotData> s{inner({0.5, -0.2}), inner({0.3})};
  const auto r = rg::equality_test(fixture::handle(s, {20, 20}), fixture::handle(s, {20, 20}));
  EXPECT_LE(r.distance, 1e-10);
  EXPECT_TRUE(r.equal);
}

TEST(Equality, UnimodularConstantIsIgnored) {
  const auto a = fixture::handle({inner({0.5}, Complex(0.0, 1.0)), inner({0.3}, -1.0)}, {20, 20});
  const auto b = fixture::handle({inner({0.5}), inner({0.3})}, {20, 20});
  EXPECT_TRUE(rg::equality_test(a, b).equal);
}

TEST(Equality, DifferentZerosMatchDenseDistance) {
  const std::vector<SlotData> a{inner({0.5}), z_power(1)};
  const std::vector<SlotData> b{inner({0.3}), z_power(1)};
  const std::vector<Index> deg{16, 16};
  const auto r = rg::equality_test(fixture::handle(a, deg), fixture::handle(b, deg));
  EXPECT_GE(r.distance, 0.1);
  EXPECT_FALSE(r.equal);
  EXPECT_NEAR(r.distance, oracle::opnorm(dense_ps(a, deg) - dense_ps(b, deg)), 1e-8);
}

TEST(Equality, PermutedVariables) {
  const std::vector<Index> deg{12, 12};
  const auto a = fixture::handle({z_power(2), z_power(1)}, deg);
  const auto b = fixture::handle({z_power(1), z_power(2)}, deg);
  EXPECT_GE(rg::equality_test(a, b).distance, 0.1);
}

TEST(Equality, RandomPairsMatchDenseDistance) {
  oracle::Rng rng(31);
  const std::vector<Index> deg{14, 14};
  for (int trial = 0; trial < 5; ++trial) {
    const std::vector<SlotData> a{inner(rng.zeros(rng.integer(1, 2), 0.5)), inner(rng.zeros(rng.integer(1, 2), 0.5))};
    const std::vector<SlotData> b{inner(rng.zeros(rng.integer(1, 2), 0.5)), a[1]};
    const double lib = rg::equality_test(fixture::handle(a, deg), fixture::handle(b, deg)).distance;
    EXPECT_NEAR(lib, oracle::opnorm(dense_ps(a, deg) - dense_ps(b, deg)), 1e-8) << "trial " << trial;
  }
}

TEST(Equality, IncompatibleTruncations) {
  EXPECT_THROW(rg::equality_test(fixture::handle({z_power(1), z_power(1)}, {10, 10}),
                                 fixture::handle({z_power(1), z_power(1)}, {10, 12})),
               polyhardy::ContractError);
  EXPECT_THROW(rg::equivalence_verdict(fixture::handle({z_power(1), z_power(1)}, {10, 10}),
                                       fixture::handle({z_power(1), z_power(1), z_power(1)}, {10, 10, 10})),
               polyhardy::ContractError);
}

TEST(Fingerprint, ZZ) {
  const auto f = rg::fingerprint(fixture::handle({z_power(1), z_power(1)}, {12, 12}));
  ASSERT_EQ(f.pairs.size(), 1u);
  ASSERT_EQ(f.pairs[0].singular_values.size(), 1u);
  EXPECT_NEAR(f.pairs[0].singular_values[0], 1.0, 1e-10);
  EXPECT_EQ(f.quotient_dims, (std::vector<Index>{1, 1}));
  ASSERT_TRUE(f.wandering_dimension);
}

TEST(Fingerprint, SingleZero) {
  const auto f = rg::fingerprint(fixture::handle({inner({0.5}), z_power(1)}, {20, 20}));
  ASSERT_EQ(f.pairs[0].singular_values.size(), 1u);
  EXPECT_NEAR(f.pairs[0].singular_values[0], std::sqrt(0.75), 1e-8);
}

TEST(Fingerprint, DegenerateIsEmpty) {
  const auto f = rg::fingerprint(fixture::handle({full(), full()}, {10, 10}));
  EXPECT_TRUE(f.degenerate);
  EXPECT_TRUE(f.pairs.empty());
  EXPECT_TRUE(f.quotient_dims.empty());
  EXPECT_FALSE(f.wandering_dimension);
}

TEST(Fingerprint, Deterministic) {
  const std::vector<SlotData> s{inner({0.4, Complex(0.1, 0.3)}), inner({-0.2}), inner({0.3})};
  const std::vector<Index> deg{10, 10, 10};
  const auto a = rg::fingerprint(fixture::handle(s, deg));
  const auto b = rg::fingerprint(fixture::handle(s, deg));
  const auto d = rg::compare_fingerprints(a, b);
  EXPECT_LE(d.max_difference, 1e-8);
  EXPECT_TRUE(d.differing_fields.empty());
}

TEST(Verdict, SelfIsEquivalent) {
  const auto h = fixture::handle({inner({0.5}), inner({0.3})}, {16, 16});
  const auto v = rg::equivalence_verdict(h, h);
  EXPECT_EQ(v.verdict, rg::Verdict::Equivalent);
  ASSERT_TRUE(v.equality);
  EXPECT_LE(v.equality->distance, 1e-10);
}

TEST(Verdict, DifferentZerosCarryCertificate) {
  const auto a = fixture::handle({inner({0.5}), z_power(1)}, {20, 20});
  const auto b = fixture::handle({inner({0.3}), z_power(1)}, {20, 20});
  const auto v = rg::equivalence_verdict(a, b);
  EXPECT_EQ(v.verdict, rg::Verdict::NotEquivalent);
  ASSERT_TRUE(v.certificate);
  EXPECT_NEAR(v.certificate->max_difference, std::sqrt(0.91) - std::sqrt(0.75), 1e-6);
  ASSERT_FALSE(v.certificate->differing_fields.empty());
  EXPECT_EQ(v.certificate->differing_fields.front(), "commutator_singular_values(1,2)");
}

TEST(Verdict, ProperVersusFullModule) {
  const auto full_module = fixture::handle({z_power(0), z_power(0)}, {12, 12});
  ASSERT_TRUE(full_module.is_full_module());
  const auto proper = fixture::handle({inner({0.5}), inner({-0.4})}, {12, 12});
  EXPECT_EQ(rg::equivalence_verdict(proper, full_module).verdict, rg::Verdict::NotEquivalent);
  EXPECT_EQ(rg::equivalence_verdict(full_module, proper).verdict, rg::Verdict::NotEquivalent);
  const auto proper3 = fixture::handle({z_power(1), inner({0.2}), z_power(2)}, {6, 6, 6});
  const auto full3 = fixture::handle({z_power(0), z_power(0), z_power(0)}, {6, 6, 6});
  EXPECT_EQ(rg::equivalence_verdict(proper3, full3).verdict, rg::Verdict::NotEquivalent);
}

TEST(Verdict, SingleInnerGeneratorIsUndecided) {
  // b(z_1) H^2 is carried onto H^2 by multiplication by b.
  const auto full_module = fixture::handle({z_power(0), z_power(0)}, {12, 12});
  const auto one = fixture::handle({inner({0.5}), full()}, {12, 12});
  const auto v = rg::equivalence_verdict(one, full_module);
  EXPECT_EQ(v.verdict, rg::Verdict::Undecided);
  EXPECT_FALSE(v.note.empty());
}

TEST(Verdict, OutsideInnerClassIsUndecided) {
  const auto degenerate = fixture::handle({full(), full()}, {10, 10});
  const auto proper = fixture::handle({z_power(1), z_power(1)}, {10, 10});
  EXPECT_EQ(rg::equivalence_verdict(degenerate, proper).verdict, rg::Verdict::Undecided);
  const auto mixed = fixture::handle({z_power(1), full()}, {10, 10});
  EXPECT_EQ(rg::equivalence_verdict(mixed, proper).verdict, rg::Verdict::Undecided);
}

TEST(Verdict, SymmetryAndSoundness) {
  oracle::Rng rng(32);
  const std::vector<Index> deg{12, 12};
  for (int trial = 0; trial < 6; ++trial) {
    const std::vector<SlotData> a{inner(rng.zeros(rng.integer(1, 2), 0.5)), inner(rng.zeros(rng.integer(1, 2), 0.5))};
    std::vector<SlotData> b = a;
    if (trial % 2 == 0) b[0] = inner(rng.zeros(rng.integer(1, 2), 0.5));
    b[1].gamma = rng.unimodular();
    const auto ha = fixture::handle(a, deg);
    const auto hb = fixture::handle(b, deg);
    const auto ab = rg::equivalence_verdict(ha, hb);
    const auto ba = rg::equivalence_verdict(hb, ha);
    EXPECT_EQ(ab.verdict, ba.verdict) << "trial " << trial;
    EXPECT_EQ(ab.verdict, trial % 2 == 0 ? rg::Verdict::NotEquivalent : rg::Verdict::Equivalent) << "trial " << trial;
    const auto diff = rg::compare_fingerprints(rg::fingerprint(ha), rg::fingerprint(hb));
    if (diff.max_difference > rg::kCertificateTol) {
      EXPECT_GT(rg::equality_test(ha, hb).distance, 1e-6) << "trial " << trial;
    }
  }
}
