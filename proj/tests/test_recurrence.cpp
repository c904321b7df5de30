#include "oqrw/recurrence.hpp"

#include "oqrw/closed_forms.hpp"
#include "oqrw/kernels.hpp"
#include "oqrw/linalg.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

namespace {

using namespace oqrw;

ComplexMatrix diag(double a, double b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

ComplexMatrix tilted(double t) {
  ComplexVector u(2);
  u << std::sqrt(t), std::sqrt(1.0 - t);
  return u * u.adjoint();
}

const SiteIndex s1{0};
const SiteIndex s2{1};

const ComplexMatrix kB = diag(std::sqrt(0.3), std::sqrt(0.7));
const ComplexMatrix kC = diag(std::sqrt(0.7), std::sqrt(0.3));

TransitionFamily two_site() { return build_two_site_walk(0.6, 0.8, 0.8, 0.6, 0.5); }
BlockState tilde_rho() { return BlockState::localized(2, s2, diag(1, 0)); }
BlockState split_rho() { return BlockState(2, Blocks{diag(0.5, 0), diag(0.5, 0)}); }

std::vector<double> word_values(const MarkovPair& pair, const BlockObservable& head, const BlockObservable& rest,
                                std::size_t n_max) {
  std::vector<double> out;
  std::vector<BlockObservable> word{head};
  for (std::size_t n = 0; n <= n_max; ++n) {
    out.push_back(qmc_evaluate_nested(pair, word));
    word.push_back(rest);
  }
  return out;
}

TEST(Tau, IdentityProjectionGivesZero) {
  const MarkovPair pair(two_site(), tilde_rho(), ExpectationKind::forward);
  for (double v : tau_series(pair, BlockProjection::identity(2, 2), 10)) EXPECT_EQ(v, 0.0);
}

TEST(Tau, RingForwardMatchesProductOracle) {
  const std::size_t N = 11, k = 5;
  const MarkovPair pair(build_ring_walk(N, kB, kC), BlockState::maximally_mixed(2, N), ExpectationKind::forward);
  const auto e = BlockProjection::at_site(2, N, SiteIndex{k}, diag(1, 0));
  const auto series = tau_series(pair, e, 30);
  const auto product = tau_series(pair, e, 30, Evaluator::product);
  for (std::size_t n = 0; n <= 30; ++n) {
    double expect = 0.0;
    for (std::size_t v = 0; v < N; ++v) {
      const double r = v == k + 1 ? 0.85 : v == k - 1 ? 0.65 : 1.0;
      expect += std::pow(r, double(n + 1)) / N;
    }
    EXPECT_NEAR(series[n], expect, 1e-13);
    EXPECT_NEAR(product[n], expect, 1e-13);
  }
  EXPECT_NEAR(tau_expectation(pair, e, 30), series[30], 1e-15);
}

TEST(Tau, SplitTwoSiteHalfLimit) {
  const double t = 0.3;
  const MarkovPair pair(build_two_site_walk(1, 0, 0, 1, 0.5), split_rho(), ExpectationKind::dual);
  const auto e = BlockProjection::at_site(2, 2, s1, tilted(t));
  const auto nested = tau_series(pair, e, 60);
  const auto product = tau_series(pair, e, 60, Evaluator::product);
  for (std::size_t n = 0; n <= 60; ++n) {
    EXPECT_NEAR(nested[n], closed_form::two_site_split_complement_word(t, n + 1), 1e-12);
    EXPECT_NEAR(product[n], nested[n], 1e-12);
  }
}

TEST(Joint, RingMatchesClosedForm) {
  oracle::Rng rng(17);
  const std::size_t N = 23, k = 11;
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix v = oracle::isometry(rng, 4, 2);
    const ComplexMatrix B = v.topRows(2), C = v.bottomRows(2);
    const auto rho = oracle::random_state(rng, 2, N);
    const ComplexMatrix q = oracle::random_projection(rng, 2, 1).block(SiteIndex{0});
    const MarkovPair pair(build_ring_walk(N, B, C, 1e-12), rho, ExpectationKind::forward);
    const auto e = BlockProjection::at_site(2, N, SiteIndex{k}, q);
    const auto local = closed_form::ring_local(rho, B, C, q, SiteIndex{k});
    const auto joint = joint_tau_series(pair, e, 20);
    const auto joint_product = joint_tau_series(pair, e, 20, Evaluator::product);
    for (std::size_t n = 0; n <= 20; ++n) {
      EXPECT_NEAR(joint[n], closed_form::ring_joint_tau(local, n), 1e-12);
      EXPECT_NEAR(joint_product[n], joint[n], 1e-12);
      EXPECT_NEAR(joint_tau_expectation(pair, e, n), joint[n], 1e-14);
    }
  }
}

TEST(Joint, NeverChargedProjectionGivesZero) {
  const MarkovPair pair(two_site(), tilde_rho(), ExpectationKind::forward);
  const auto e = BlockProjection::at_site(2, 2, s1, ComplexMatrix::Identity(2, 2));
  for (double v : joint_tau_series(pair, e, 10)) EXPECT_EQ(v, 0.0);
}

TEST(Joint, SplitTwoSiteStrictAndRelaxed) {
  const double t = 0.4;
  const auto e = BlockProjection::at_site(2, 2, s1, tilted(t)).complement();
  {
    const MarkovPair pair(build_two_site_walk(1, 0, 0, 1, 0.5), split_rho(), ExpectationKind::dual);
    const auto joint = joint_tau_series(pair, e, 40);
    const auto tau = tau_series(pair, e, 40);
    for (std::size_t n = 0; n <= 40; ++n) {
      EXPECT_NEAR(joint[n], closed_form::two_site_split_joint_tau(1.0, t, n), 1e-14);
      EXPECT_NEAR(tau[n], closed_form::two_site_split_tau(1.0, t, n), 1e-14);
    }
  }
  {
    // c = 0, |a| < 1 breaks the Kraus condition; only the path-sum form reproduces the formula.
    const double a = 0.9;
    const auto f = build_two_site_walk(a, std::sqrt(1 - a * a), 0, 1, 0.5, ValidationMode::relaxed);
    const MarkovPair pair(f, split_rho(), ExpectationKind::dual);
    const auto joint = joint_tau_series(pair, e, 40, Evaluator::product);
    const auto tau = tau_series(pair, e, 40, Evaluator::product);
    for (std::size_t n = 0; n <= 40; ++n) {
      EXPECT_NEAR(joint[n], closed_form::two_site_split_joint_tau(a, t, n), 1e-14);
      EXPECT_NEAR(tau[n], closed_form::two_site_split_tau(a, t, n), 1e-14);
    }
  }
}

TEST(E0Tau, TildeRhoBothKinds) {
  oracle::Rng rng(23);
  const auto f = two_site();
  for (int trial = 0; trial < 10; ++trial) {
    const auto e = oracle::random_projection(rng, 2, 2);
    const auto comp = e.complement();
    const double phi0 = (diag(1, 0) * comp.block(s2)).trace().real();
    const MarkovPair fwd(f, tilde_rho(), ExpectationKind::forward);
    const MarkovPair dual(f, tilde_rho(), ExpectationKind::dual);
    ComplexMatrix pulled = ComplexMatrix::Zero(2, 2);
    for (const auto& arc : f.outgoing(s2)) pulled += arc.op.adjoint() * comp.block(arc.site) * arc.op;
    for (std::size_t n = 0; n <= 12; ++n) {
      const auto yf = e0_tau(fwd, e, n);
      const auto yd = e0_tau(dual, e, n);
      EXPECT_LT((yf.block(s2) - std::pow(phi0, double(n)) * pulled).norm(), 1e-12);
      EXPECT_LT((yd.block(s2) - std::pow(phi0, double(n + 1)) * diag(1, std::pow(0.5, double(n)))).norm(), 1e-12);
      EXPECT_EQ(yf.block(s1), ComplexMatrix::Zero(2, 2));
      EXPECT_EQ(yd.block(s1), ComplexMatrix::Zero(2, 2));
      // φ̃(τⁿ) = φ₀(e^⊥)^{n+1}
      EXPECT_NEAR(dual.initial_functional(yd).real(), closed_form::two_site_invariant_tau(phi0, n), 1e-12);
    }
  }
}

TEST(E0Tau, IdentityProjectionGivesZero) {
  const MarkovPair pair(two_site(), tilde_rho(), ExpectationKind::forward);
  EXPECT_EQ(e0_tau(pair, BlockProjection::identity(2, 2), 3).frobenius(), 0.0);
}

TEST(E0Tau, SplitTwoSiteDual) {
  const double t = 0.6, b = 0.6, d = 0.8;
  const auto f = build_two_site_walk(1.0, b, 0.0, d, 0.5);
  const MarkovPair pair(f, split_rho(), ExpectationKind::dual);
  const auto e = BlockProjection::at_site(2, 2, s1, tilted(t)).complement();
  for (std::size_t n = 0; n <= 20; ++n) {
    const auto got = e0_tau(pair, e, n);
    const auto expect = closed_form::two_site_split_e0_tau(1.0, b, t, n);
    EXPECT_LT(linalg::frobenius_distance(got.blocks(), expect.blocks()), 1e-14);
  }
}

TEST(E0Tau, ContractiveAndDecreasing) {
  oracle::Rng rng(29);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t h = oracle::uniform(rng, 1, 3), n = oracle::uniform(rng, 1, 4);
    const auto f = oracle::random_family(rng, h, n);
    const auto rho = oracle::random_state(rng, h, n, false);
    const auto e = oracle::random_projection(rng, h, n);
    for (auto kind : {ExpectationKind::forward, ExpectationKind::dual}) {
      const MarkovPair pair(f, rho, kind);
      BlockObservable prev = BlockObservable::identity(h, n);
      for (std::size_t m = 0; m <= 8; ++m) {
        const auto y = e0_tau(pair, e, m);
        for (std::size_t i = 0; i < n; ++i) {
          const ComplexMatrix& blk = y.blocks()[i];
          EXPECT_GE(linalg::min_eigenvalue(blk), -1e-9);
          EXPECT_LE(-linalg::min_eigenvalue(-blk), 1.0 + 1e-9);
          EXPECT_GE(linalg::min_eigenvalue(prev.blocks()[i] - blk), -1e-9);
        }
        prev = y;
      }
    }
  }
}

TEST(ClosedForward, MatchesRecursion) {
  oracle::Rng rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t h = oracle::uniform(rng, 1, 3), n = oracle::uniform(rng, 1, 4);
    const auto f = oracle::random_family(rng, h, n);
    const MarkovPair pair(f, oracle::random_state(rng, h, n, false), ExpectationKind::forward);
    const auto e = oracle::random_projection(rng, h, n);
    for (std::size_t m = 0; m <= 10; ++m) {
      const auto direct = transition_expectation(pair, e.observable(), e0_tau(pair, e, m));
      EXPECT_LT(linalg::frobenius_distance(direct.blocks(), e_tau_closed_forward(pair, e, m).blocks()), 1e-9);
    }
  }
  const MarkovPair pair(two_site(), tilde_rho(), ExpectationKind::forward);
  EXPECT_EQ(e_tau_closed_forward(pair, BlockProjection::zero(2, 2), 4).frobenius(), 0.0);
  EXPECT_THROW(e_tau_closed_forward(pair.with_kind(ExpectationKind::dual), BlockProjection::zero(2, 2), 1),
               PreconditionError);
}

TEST(ClosedForward, RingBlockForm) {
  const std::size_t N = 13, k = 6;
  oracle::Rng rng(2);
  const auto rho = oracle::random_state(rng, 2, N);
  const ComplexMatrix q = tilted(0.2);
  const MarkovPair pair(build_ring_walk(N, kB, kC), rho, ExpectationKind::forward);
  const auto e = BlockProjection::at_site(2, N, SiteIndex{k}, q);
  const auto local = closed_form::ring_local(rho, kB, kC, q, SiteIndex{k});
  for (std::size_t n = 0; n <= 10; ++n) {
    const auto direct = transition_expectation(pair, e.observable(), e0_tau(pair, e, n));
    const auto closed = closed_form::ring_e_tau(N, kB, kC, q, SiteIndex{k}, local, n);
    EXPECT_LT(linalg::frobenius_distance(direct.blocks(), closed.blocks()), 1e-12);
  }
}

TEST(Tail, Classification) {
  std::vector<double> geo;
  for (int n = 0; n <= 40; ++n) geo.push_back(0.25 + 0.5 * std::pow(0.7, n));
  const auto g = estimate_tail(geo, 10);
  ASSERT_TRUE(g.certified);
  ASSERT_TRUE(g.ratio.has_value());
  EXPECT_NEAR(*g.ratio, 0.7, 1e-9);
  EXPECT_NEAR(g.limit, 0.25, 1e-12);

  const auto flat = estimate_tail(std::vector<double>(20, 0.5), 10);
  EXPECT_TRUE(flat.certified);
  EXPECT_FALSE(flat.ratio.has_value());
  EXPECT_EQ(flat.limit, 0.5);

  EXPECT_FALSE(estimate_tail(std::vector<double>(5, 0.5), 10).certified);

  std::vector<double> harmonic;
  for (int n = 1; n <= 40; ++n) harmonic.push_back(1.0 / n);
  EXPECT_FALSE(estimate_tail(harmonic, 10).certified);

  std::vector<double> rising;
  for (int n = 0; n <= 20; ++n) rising.push_back(n);
  EXPECT_FALSE(estimate_tail(rising, 10).certified);
}

TEST(Diagnose, RingUnderStrictReturnCondition) {
  const std::size_t N = 53, k = 26;
  const MarkovPair pair(build_ring_walk(N, kB, kC), BlockState::maximally_mixed(2, N), ExpectationKind::forward);
  const auto e = BlockProjection::at_site(2, N, SiteIndex{k}, diag(1, 0));
  for (auto c : {Criterion::E_recurrent, Criterion::phi_recurrent}) {
    const auto v = diagnose(pair, e, c);
    EXPECT_EQ(v.verdict, Verdict::holds) << to_string(c);
    ASSERT_TRUE(v.ratio.has_value());
    EXPECT_NEAR(*v.ratio, 0.85, 1e-6);
    EXPECT_EQ(v.series.size(), 201u);
  }
  const auto er = diagnose(pair, e, Criterion::E_recurrent);
  EXPECT_NEAR(er.limit, 1.0, 1e-8);
  EXPECT_LE(er.series.front(), er.series.back());
}

TEST(Diagnose, ShortHorizonIsInconclusive) {
  const MarkovPair pair(build_ring_walk(11, kB, kC), BlockState::maximally_mixed(2, 11), ExpectationKind::forward);
  const auto e = BlockProjection::at_site(2, 11, SiteIndex{5}, diag(1, 0));
  DiagnoseOptions opts;
  opts.n_max = 1;
  EXPECT_EQ(diagnose(pair, e, Criterion::E_recurrent, opts).verdict, Verdict::inconclusive);
}

TEST(Diagnose, PreconditionErrors) {
  const MarkovPair pair(two_site(), tilde_rho(), ExpectationKind::forward);
  const auto never = BlockProjection::at_site(2, 2, s1, ComplexMatrix::Identity(2, 2));
  EXPECT_THROW(diagnose(pair, never, Criterion::phi_recurrent), PreconditionError);
  EXPECT_THROW(diagnose(pair, BlockProjection::zero(2, 2), Criterion::E_recurrent), PreconditionError);
}

TEST(Diagnose, TildeRhoEquivalence) {
  const auto f = two_site();
  const MarkovPair fwd(f, tilde_rho(), ExpectationKind::forward);
  const MarkovPair dual = fwd.with_kind(ExpectationKind::dual);
  const auto e = BlockProjection::at_site(2, 2, s2, tilted(0.5));
  for (auto c : {Criterion::E_completely_accessible, Criterion::E_recurrent})
    EXPECT_EQ(diagnose(fwd, e, c).verdict, Verdict::holds);
  EXPECT_EQ(diagnose(dual, e, Criterion::phi_recurrent).verdict, Verdict::holds);
  EXPECT_EQ(diagnose(dual, e, Criterion::phi_completely_accessible).verdict, Verdict::holds);

  const auto blind = BlockProjection::at_site(2, 2, s2, diag(0, 1));  // φ₀(e^⊥) = 1
  EXPECT_EQ(diagnose(fwd, blind, Criterion::E_completely_accessible).verdict, Verdict::fails);
  EXPECT_EQ(diagnose(dual, blind, Criterion::phi_completely_accessible).verdict, Verdict::fails);
  EXPECT_THROW(diagnose(dual, blind, Criterion::phi_recurrent), PreconditionError);
}

TEST(Diagnose, ConditionAOnRing) {
  const std::size_t N = 53, k = 26;
  const ComplexMatrix B = diag(0, std::sqrt(0.5)), C = diag(1, std::sqrt(0.5));
  Blocks blocks(N, ComplexMatrix::Identity(2, 2) / 2.0);
  blocks[k + 1] = diag(1, 0);
  for (auto& b : blocks) b /= double(N);
  const MarkovPair pair(build_ring_walk(N, B, C), BlockState(2, blocks), ExpectationKind::forward);
  const auto e = BlockProjection::at_site(2, N, SiteIndex{k}, tilted(0.5));
  EXPECT_EQ(diagnose(pair, e, Criterion::phi_recurrent).verdict, Verdict::holds);
  const auto er = diagnose(pair, e, Criterion::E_recurrent);
  EXPECT_EQ(er.verdict, Verdict::fails);
  EXPECT_LT(er.limit, 1.0 - 1e-3);
}

TEST(Diagnose, JointTailAndImplicationsOnRandomInstances) {
  oracle::Rng rng(314);
  int certified = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t h = oracle::uniform(rng, 1, 2), n = oracle::uniform(rng, 2, 4);
    const auto f = oracle::random_family(rng, h, n);
    const MarkovPair pair(f, oracle::random_state(rng, h, n), ExpectationKind::forward);
    const auto e = oracle::random_projection(rng, h, n);
    const double entry = joint_tau_expectation(pair, e, 0);
    if (entry <= 1e-12) continue;
    const auto joint = joint_tau_series(pair, e, 200);
    const auto rec = diagnose(pair, e, Criterion::phi_recurrent);
    const auto ca = diagnose(pair, e, Criterion::phi_completely_accessible);
    if (rec.verdict != Verdict::inconclusive) {
      ++certified;
      EXPECT_EQ(rec.verdict == Verdict::holds, joint.back() <= 1e-8 || std::abs(rec.limit) <= 1e-8);
    }
    if (ca.verdict == Verdict::holds) EXPECT_EQ(rec.verdict, Verdict::holds);
    const auto erec = diagnose(pair, e, Criterion::E_recurrent);
    if (erec.verdict == Verdict::holds) EXPECT_EQ(rec.verdict, Verdict::holds);
    const auto eca = diagnose(pair, e, Criterion::E_completely_accessible);
    if (eca.verdict == Verdict::holds) EXPECT_EQ(ca.verdict, Verdict::holds);
  }
  EXPECT_GT(certified, 10);
}

TEST(Words, SplittingIdentity) {
  oracle::Rng rng(55);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t h = oracle::uniform(rng, 1, 3), n = oracle::uniform(rng, 1, 4);
    const auto f = oracle::random_family(rng, h, n);
    const auto rho = oracle::random_state(rng, h, n, false);
    const auto e = oracle::random_projection(rng, h, n);
    const auto ep = oracle::random_projection(rng, h, n);
    const auto one = BlockObservable::identity(h, n);
    const auto comp = e.complement().observable();
    for (auto kind : {ExpectationKind::forward, ExpectationKind::dual}) {
      const MarkovPair pair(f, rho, kind);
      for (std::size_t m = 0; m <= 3; ++m) {
        std::vector<BlockObservable> w1{e.observable(), one}, w2{e.observable(), ep.observable()},
            w3{e.observable(), ep.complement().observable()};
        for (std::size_t r = 0; r <= m; ++r) {
          w1.push_back(comp);
          w2.push_back(comp);
          w3.push_back(comp);
        }
        EXPECT_NEAR(qmc_evaluate_nested(pair, w1), qmc_evaluate_nested(pair, w2) + qmc_evaluate_nested(pair, w3),
                    1e-12);
      }
    }
  }
}

TEST(Words, SeriesAreMonotone) {
  oracle::Rng rng(66);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t h = oracle::uniform(rng, 1, 3), n = oracle::uniform(rng, 1, 4);
    const auto f = oracle::random_family(rng, h, n);
    const auto rho = oracle::random_state(rng, h, n, false);
    const auto e = oracle::random_projection(rng, h, n);
    for (auto kind : {ExpectationKind::forward, ExpectationKind::dual}) {
      const MarkovPair pair(f, rho, kind);
      const auto tau = tau_series(pair, e, 20);
      const auto joint = joint_tau_series(pair, e, 20);
      const auto direct = word_values(pair, e.observable(), e.complement().observable(), 5);
      for (std::size_t m = 0; m <= 5; ++m) EXPECT_NEAR(direct[m], joint[m], 1e-12);
      for (std::size_t m = 1; m <= 20; ++m) {
        EXPECT_LE(tau[m], tau[m - 1] + 1e-12);
        EXPECT_LE(joint[m], joint[m - 1] + 1e-12);
        EXPECT_LE(e0_tau(pair, e, m).frobenius(), e0_tau(pair, e, m - 1).frobenius() + 1e-12);
      }
      for (double v : tau) {
        EXPECT_GE(v, -1e-12);
        EXPECT_LE(v, 1.0 + 1e-12);
      }
    }
  }
}

TEST(Access, Witnesses) {
  const std::size_t N = 9, k = 2;
  const auto shift = build_ring_walk(N, ComplexMatrix::Zero(2, 2), ComplexMatrix::Identity(2, 2));
  const MarkovPair dual(shift, BlockState::maximally_mixed(2, N), ExpectationKind::dual);
  const auto e = BlockProjection::at_site(2, N, SiteIndex{k}, ComplexMatrix::Identity(2, 2));
  const auto f = BlockProjection::at_site(2, N, SiteIndex{k + 3}, ComplexMatrix::Identity(2, 2));
  const auto r = is_accessible(dual, e, f, 10);
  EXPECT_TRUE(r.accessible);
  EXPECT_EQ(r.witness, std::optional<std::size_t>(3));
  EXPECT_EQ(is_accessible(dual, e, f, 10, AccessMode::E).witness, std::optional<std::size_t>(3));
  EXPECT_EQ(is_accessible(dual, f, e, 20).witness, std::optional<std::size_t>(N - 3));
  EXPECT_TRUE(communicate(dual, e, f, 20));
  EXPECT_FALSE(communicate(dual, e, f, 5));

  const MarkovPair ring(build_ring_walk(N, kB, kC), BlockState::maximally_mixed(2, N), ExpectationKind::forward);
  const auto er = BlockProjection::at_site(2, N, SiteIndex{k}, diag(1, 0));
  EXPECT_EQ(is_accessible(ring, er, BlockProjection::identity(2, N), 5).witness, std::optional<std::size_t>(1));

  const MarkovPair tilde(two_site(), tilde_rho(), ExpectationKind::forward);
  const auto site1 = BlockProjection::at_site(2, 2, s1, ComplexMatrix::Identity(2, 2));
  EXPECT_FALSE(is_accessible(tilde, site1, site1, 50).accessible);
  EXPECT_FALSE(is_accessible(tilde, site1, site1, 50, AccessMode::E).accessible);
  EXPECT_FALSE(is_accessible(tilde.with_kind(ExpectationKind::dual), site1, site1, 50).accessible);
}

TEST(NeverEntered, FiniteHorizonForms) {
  const MarkovPair tilde(two_site(), tilde_rho(), ExpectationKind::forward);
  const auto zero = check_theorem_i(tilde, BlockProjection::zero(2, 2), 12);
  EXPECT_TRUE(zero.never_entered);
  EXPECT_TRUE(zero.shifted_all_one);
  EXPECT_TRUE(zero.consistent);

  const auto site1 = BlockProjection::at_site(2, 2, s1, ComplexMatrix::Identity(2, 2));
  for (auto kind : {ExpectationKind::forward, ExpectationKind::dual}) {
    const auto r = check_theorem_i(tilde.with_kind(kind), site1, 12);
    EXPECT_TRUE(r.never_entered);
    EXPECT_TRUE(r.shifted_all_one);
    EXPECT_TRUE(r.consistent);
    EXPECT_EQ(r.entry_values.size(), 13u);
    EXPECT_EQ(r.shifted_tau_values.size(), 13u);
  }

  const MarkovPair ring(build_ring_walk(11, kB, kC), BlockState::maximally_mixed(2, 11), ExpectationKind::forward);
  const auto full = check_theorem_i(ring, BlockProjection::at_site(2, 11, SiteIndex{5}, ComplexMatrix::Identity(2, 2)), 12);
  EXPECT_FALSE(full.never_entered);
  EXPECT_FALSE(full.shifted_all_one);
  EXPECT_TRUE(full.consistent);
}

TEST(Criteria, NamesRoundTrip) {
  for (auto c : {Criterion::phi_recurrent, Criterion::phi_completely_accessible, Criterion::E_recurrent,
                 Criterion::E_completely_accessible})
    EXPECT_EQ(parse_criterion(to_string(c)), c);
  EXPECT_FALSE(parse_criterion("nope").has_value());
}

}  // namespace
