#include "oqrw/walk_model.hpp"

#include "oqrw/blocks.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <set>

namespace {

using namespace oqrw;

ComplexMatrix diag(double a, double b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

TEST(TwoSiteWalk, BalancedParametersPass) {
  const auto f = build_two_site_walk(0.6, 0.8, 0.8, 0.6, 0.5);
  const auto r = validate_kraus(f, 1e-9);
  EXPECT_TRUE(r.pass);
  EXPECT_LT(r.max_residual, 1e-12);
  EXPECT_EQ(f.num_transitions(), 4u);
  EXPECT_EQ(f.label(SiteIndex{0}), "1");
  EXPECT_EQ(f.label(SiteIndex{1}), "2");
}

TEST(TwoSiteWalk, UnitSubcasePasses) {
  EXPECT_TRUE(validate_kraus(build_two_site_walk(1.0, 0.0, 0.0, 1.0, 0.5)).pass);
}

TEST(TwoSiteWalk, LiteralConstraintFailsAtSiteOne) {
  const auto f = build_two_site_walk(0.6, 0.8, 0.6, 0.8, 0.5, ValidationMode::relaxed);
  const auto r = validate_kraus(f, 1e-9);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.worst_site.id, 0u);
  // Σ B*B at site 1 is diag(0.72, 1.28).
  EXPECT_NEAR(r.residuals[0], std::sqrt(2.0) * 0.28, 1e-12);
  EXPECT_GT(r.residuals[0], 0.3);
  EXPECT_LT(r.residuals[1], 1e-12);
}

TEST(TwoSiteWalk, StrictModeRejectsAndRelaxedRecords) {
  const double b = std::sqrt(0.19);
  try {
    build_two_site_walk(0.9, b, 0.0, 1.0, 0.5);
    FAIL() << "expected a normalization error";
  } catch (const NormalizationError& e) {
    EXPECT_EQ(e.site().id, 0u);
    EXPECT_NEAR(e.residual(), std::sqrt(2.0) * 0.19, 1e-12);
  }
  const auto relaxed = build_two_site_walk(0.9, b, 0.0, 1.0, 0.5, ValidationMode::relaxed);
  EXPECT_FALSE(relaxed.kraus_report().pass);
  EXPECT_NEAR(relaxed.kraus_report().residuals[0], std::sqrt(2.0) * 0.19, 1e-12);
}

TEST(TwoSiteWalk, RejectsDegenerateP) {
  EXPECT_THROW(build_two_site_walk(1.0, 0.0, 0.0, 1.0, 0.0), Error);
  EXPECT_THROW(build_two_site_walk(1.0, 0.0, 0.0, 1.0, 1.0), Error);
}

TEST(RingWalk, ElevenSites) {
  const auto f = build_ring_walk(11, diag(std::sqrt(0.3), std::sqrt(0.7)), diag(std::sqrt(0.7), std::sqrt(0.3)));
  EXPECT_EQ(f.num_transitions(), 22u);
  EXPECT_TRUE(validate_kraus(f).pass);
  for (std::size_t j = 0; j < 11; ++j) {
    const auto out = f.outgoing(SiteIndex{j});
    ASSERT_EQ(out.size(), 2u);
    std::set<std::size_t> targets{out[0].site.id, out[1].site.id};
    EXPECT_EQ(targets, (std::set<std::size_t>{(j + 10) % 11, (j + 1) % 11}));
  }
}

TEST(RingWalk, RightShiftIsValid) {
  const auto f = build_ring_walk(3, ComplexMatrix::Zero(2, 2), ComplexMatrix::Identity(2, 2));
  EXPECT_TRUE(validate_kraus(f).pass);
  EXPECT_EQ(f.num_transitions(), 6u);
}

TEST(RingWalk, OverfullPairReportsResidual) {
  try {
    build_ring_walk(4, ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2));
    FAIL() << "expected a normalization error";
  } catch (const NormalizationError& e) {
    EXPECT_NEAR(e.residual(), std::sqrt(2.0), 1e-12);
  }
  EXPECT_THROW(build_ring_walk(2, diag(0, 1), diag(1, 0)), Error);
}

TEST(TransitionFamily, IdentityFamilyHasZeroResidual) {
  std::vector<TransitionEntry> t;
  for (std::size_t j = 0; j < 3; ++j) t.push_back({SiteIndex{j}, SiteIndex{j}, ComplexMatrix::Identity(2, 2)});
  const TransitionFamily f(2, {"a", "b", "c"}, t);
  const auto r = validate_kraus(f);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.max_residual, 0.0);
}

TEST(TransitionFamily, StructuralErrors) {
  const ComplexMatrix I = ComplexMatrix::Identity(2, 2);
  EXPECT_THROW(TransitionFamily(2, {"a", "a"}, {}), StructuralError);
  EXPECT_THROW(TransitionFamily(2, {"a"}, {{SiteIndex{0}, SiteIndex{3}, I}}), StructuralError);
  EXPECT_THROW(TransitionFamily(2, {"a"}, {{SiteIndex{0}, SiteIndex{0}, I}, {SiteIndex{0}, SiteIndex{0}, I}}),
               StructuralError);
  ComplexMatrix bad = I;
  bad(0, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(TransitionFamily(2, {"a"}, {{SiteIndex{0}, SiteIndex{0}, bad}}, ValidationMode::relaxed),
               StructuralError);
}

TEST(TransitionFamily, DimensionErrorNamesThePair) {
  try {
    TransitionFamily(2, {"a", "b"}, {{SiteIndex{0}, SiteIndex{1}, ComplexMatrix::Identity(3, 3)}});
    FAIL() << "expected a dimension error";
  } catch (const DimensionError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("b"), std::string::npos);
    EXPECT_NE(what.find("a"), std::string::npos);
  }
}

TEST(TransitionFamily, AdjacencyViews) {
  const auto f = build_two_site_walk(0.6, 0.8, 0.8, 0.6, 0.5);
  const auto in1 = f.incoming(SiteIndex{0});
  ASSERT_EQ(in1.size(), 2u);
  EXPECT_EQ(in1[0].site.id, 0u);
  EXPECT_EQ(in1[1].site.id, 1u);
  EXPECT_EQ(f.find_site("2")->id, 1u);
  EXPECT_FALSE(f.find_site("3").has_value());
}

TEST(TransitionFamily, ResidualsInvariantUnderUnitaryConjugation) {
  oracle::Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = build_two_site_walk(0.6, 0.8, 0.6, 0.8, 0.3, ValidationMode::relaxed);
    const ComplexMatrix u = oracle::unitary(rng, 2);
    auto entries = f.entries();
    for (auto& t : entries) t.op = u * t.op * u.adjoint();
    const TransitionFamily g(2, f.site_labels(), entries, ValidationMode::relaxed);
    const auto r0 = validate_kraus(f);
    const auto r1 = validate_kraus(g);
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(r0.residuals[j], r1.residuals[j], 1e-12);
  }
}

TEST(TransitionFamily, RandomSlicedFamiliesAreStrict) {
  oracle::Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = oracle::random_family(rng, oracle::uniform(rng, 1, 3), oracle::uniform(rng, 1, 5));
    EXPECT_LT(validate_kraus(f).max_residual, 1e-12);
  }
}

TEST(Blocks, StateValidation) {
  EXPECT_THROW(BlockState(2, Blocks{ComplexMatrix::Identity(2, 2)}), InvalidStateError);
  EXPECT_THROW(BlockState(2, Blocks{diag(1.5, -0.5)}), InvalidStateError);
  ComplexMatrix nh = diag(0.5, 0.5);
  nh(0, 1) = 0.1;
  EXPECT_THROW(BlockState(2, Blocks{nh}), InvalidStateError);
  EXPECT_THROW(BlockState(2, Blocks{ComplexMatrix::Identity(3, 3) / 3.0}), DimensionError);
  EXPECT_NO_THROW(BlockState(2, Blocks{diag(0.5, 0.5)}));
  EXPECT_NEAR(BlockState::maximally_mixed(3, 4).trace(), 1.0, 1e-15);
}

TEST(Blocks, ProjectionValidationAndComplement) {
  EXPECT_THROW(BlockProjection(2, Blocks{diag(0.5, 0)}), InvalidStateError);
  const auto e = BlockProjection::at_site(2, 3, SiteIndex{1}, diag(1, 0));
  const auto c = e.complement();
  EXPECT_EQ(c.block(SiteIndex{0}), ComplexMatrix::Identity(2, 2));
  EXPECT_EQ(c.block(SiteIndex{1}), diag(0, 1));
  EXPECT_TRUE(BlockProjection::identity(2, 3).complement().observable().frobenius() == 0.0);
}

TEST(Blocks, HermitianFlagIsChecked) {
  ComplexMatrix nh = diag(1, 0);
  nh(0, 1) = 1.0;
  EXPECT_THROW(BlockObservable(2, Blocks{nh}, true), InvalidStateError);
  EXPECT_NO_THROW(BlockObservable(2, Blocks{nh}, false));
}

}  // namespace
