#include "doctest.h"

#include "credal/epistemic.hpp"
#include "credal/gadgets.hpp"
#include "credal/hmm.hpp"
#include "credal/strong.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random_networks.hpp"

using namespace credal;
using testing::singleton;

namespace {

const Pmf kHalf{Rational(1, 2), Rational(1, 2)};

CredalSpec interval(Rational lo, Rational hi) { return CredalSpec{{{lo, 1 - lo}, {hi, 1 - hi}}, {}}; }

// X0 state (vacuous), X1 manifest of X0, X2 state child of X0.
CredalNetwork small_hmm() {
  return make_valid_network({{"S1", 2}, {"O1", 2}, {"S2", 2}}, {{0, 1}, {0, 2}},
                            {{testing::vacuous_spec(2)},
                             {interval(Rational(1, 5), Rational(1, 2)), interval(Rational(2, 3), Rational(4, 5))},
                             {singleton({Rational(3, 4), Rational(1, 4)}), singleton({Rational(1, 3), Rational(2, 3)})}});
}

}  // namespace

TEST_SUITE("strong") {
  TEST_CASE("example 1: four selections and value 1/2") {
    const auto net = testing::load_network("example1");
    CHECK(strong::joint_extrema(net).size() == 4);
    const auto r = strong::gbr_strong(net, testing::load_task("example1"));
    CHECK(r.mu == Rational(1, 2));
    CHECK(r.selections == 4);
    // Upper bound: max p(x1 = x2) over the four products.
    auto up = testing::load_task("example1");
    up.bound = Bound::Upper;
    CHECK(strong::gbr_strong(net, up).mu == *testing::strong_oracle(net, up));
  }

  TEST_CASE("example 3: value 4/7") {
    const auto net = testing::load_network("example3");
    const auto task = testing::load_task("example3");
    CHECK(strong::gbr_strong(net, task).mu == Rational(4, 7));
    CHECK(*testing::strong_oracle(net, task) == Rational(4, 7));
  }

  TEST_CASE("selection counts") {
    const Pmf third{Rational(1, 3), Rational(2, 3)};
    const auto precise = make_valid_network({{"A", 2}, {"B", 2}}, {{0, 1}},
                                            {{singleton(third)}, {singleton(kHalf), singleton(third)}});
    CHECK(strong::joint_extrema(precise).size() == 1);
    const auto tree = gadgets::gen_tree_partition(gadgets::PartitionInstance({1, 1}));
    CHECK(strong::joint_extrema(tree.network).size() == 16);
    try {
      strong::joint_extrema(tree.network, 8);
      FAIL("cap ignored");
    } catch (const CredalError& e) {
      CHECK(e.kind() == ErrorKind::SizeCap);
      CHECK(std::string(e.what()).find("strong enumeration too large") != std::string::npos);
    }
  }

  TEST_CASE("precise networks reduce to bn_expectation") {
    testing::Rng rng(21);
    for (int k = 0; k < 20; ++k) {
      auto inst = testing::random_general_network(rng);
      std::vector<std::vector<CredalSpec>> specs;
      auto net = inst.network;
      for (NodeId i = 0; i < net.size(); ++i) {
        std::vector<CredalSpec> local;
        for (const auto& s : net.specs(i)) local.push_back(singleton(s.extrema.back()));
        net = net.with_specs(i, local);
      }
      CHECK(strong::gbr_strong(net, inst.task).mu == bn_expectation(net, inst.task));
    }
  }

  TEST_CASE("random networks agree with full-joint enumeration") {
    testing::Rng rng(22);
    for (int k = 0; k < 60; ++k) {
      const auto inst = testing::random_general_network(rng, {5, 2, 64});
      const auto oracle = testing::strong_oracle(inst.network, inst.task);
      CAPTURE(k);
      REQUIRE(oracle);
      const auto r = strong::gbr_strong(inst.network, inst.task);
      CHECK(r.mu == *oracle);
      // phi (a lower-bound quantity) vanishes at the value and changes sign
      // around it; upper bounds go through the negated task.
      const bool lower = inst.task.bound == Bound::Lower;
      const GbrTask low = lower ? inst.task : inst.task.negated();
      const Rational mu = lower ? r.mu : Rational(-r.mu);
      CHECK(strong::strong_phi(inst.network, low, mu) == 0);
      CHECK(strong::strong_phi(inst.network, low, mu - 1) > 0);
      CHECK(strong::strong_phi(inst.network, low, mu + 1) < 0);
    }
  }

  TEST_CASE("zero evidence probability is undefined") {
    const auto net = make_valid_network({{"A", 2}, {"B", 2}}, {{0, 1}},
                                        {{testing::vacuous_spec(2)}, {singleton({1, 0}), singleton(kHalf)}});
    try {
      strong::gbr_strong(net, {0, {1, 0}, {{1, 1}}, Bound::Lower});
      FAIL("accepted");
    } catch (const CredalError& e) {
      CHECK(e.kind() == ErrorKind::GbrUndefined);
    }
  }
}

TEST_SUITE("lemma2") {
  TEST_CASE("vacuous root with a precise child") {
    const Pmf a{Rational(1, 5), Rational(4, 5)}, b{Rational(2, 3), Rational(1, 3)};
    const auto net = make_valid_network({{"R", 2}, {"C", 2}}, {{0, 1}},
                                        {{testing::vacuous_spec(2)}, {singleton(a), singleton(b)}});
    CHECK(strong::is_lemma2_form(net));
    const GbrTask task{1, {3, -1}, {}, Bound::Lower};
    const auto r = strong::lemma2_inference(net, task);
    // Expectations 3/5 - 4/5 = -1/5 and 2 - 1/3 = 5/3.
    CHECK(r.mu == Rational(-1, 5));
    CHECK(r.argmin_roots == std::vector<State>{0});
    CHECK(r.mu == strong::gbr_strong(net, task).mu);
  }

  TEST_CASE("structural rejections") {
    const auto ex1 = testing::load_network("example1");
    CHECK_FALSE(strong::is_lemma2_form(ex1));
    CHECK_THROWS_AS(strong::lemma2_inference(ex1, testing::load_task("example1")), CredalError);
    const auto net = make_valid_network({{"R", 2}, {"C", 2}}, {{0, 1}},
                                        {{testing::vacuous_spec(2)}, {singleton(kHalf), singleton(kHalf)}});
    try {
      strong::lemma2_inference(net, {0, {1, 0}, {}, Bound::Lower});
      FAIL("root query accepted");
    } catch (const CredalError& e) {
      CHECK(e.kind() == ErrorKind::EngineMismatch);
    }
    CHECK_THROWS_AS(strong::lemma2_inference(net, {1, {1, 0}, {{0, 1}}, Bound::Lower}), CredalError);
  }

  TEST_CASE("gadget values") {
    const auto poly = gadgets::gen_polytree_partition(gadgets::PartitionInstance({1, 1}));
    CHECK(strong::lemma2_inference(poly.network, poly.task).mu == Rational(1, 3));
    const auto em = gadgets::gen_emajsat(gadgets::EMajsatInstance(gadgets::Formula::parse("z1|z2"), 1));
    CHECK(strong::lemma2_inference(em.network, em.task).mu == 0);
  }

  TEST_CASE("random vacuous-root networks agree with enumeration") {
    testing::Rng rng(23);
    for (int k = 0; k < 40; ++k) {
      const auto inst = testing::random_lemma2_network(rng, {6, 2, 64});
      CAPTURE(k);
      CHECK(strong::lemma2_inference(inst.network, inst.task).mu == *testing::strong_oracle(inst.network, inst.task));
    }
  }
}

TEST_SUITE("epistemic") {
  TEST_CASE("example 1 polytope and value 5/11") {
    const auto net = testing::load_network("example1");
    const auto poly = epistemic::epistemic_polytope(net);
    CHECK(poly.atom_count == 8);
    // Every product of extrema lies in the epistemic extension.
    for (const auto& sel : strong::joint_extrema(net)) CHECK(poly.contains(strong::joint_pmf(net, sel)));
    // The uniform joint breaks X3's determinism.
    CHECK_FALSE(poly.contains(RationalVector(8, Rational(1, 8))));
    const auto task = testing::load_task("example1");
    CHECK(epistemic::gbr_epistemic(net, task).mu == Rational(5, 11));
    CHECK(testing::epistemic_oracle_binary(net, task) == Rational(5, 11));
  }

  TEST_CASE("example 3 under the stated constraint set") {
    // Oracle: X3 and X4 are non-descendants of each other, so every row set
    // below is written explicitly; the minimum is 7/13.
    const auto net = testing::load_network("example3");
    const auto task = testing::load_task("example3");
    const Rational oracle = testing::epistemic_oracle_binary(net, task);
    CHECK(oracle == Rational(7, 13));
    CHECK(epistemic::gbr_epistemic(net, task).mu == oracle);
    CHECK(oracle < strong::gbr_strong(net, task).mu);
  }

  TEST_CASE("point polytope and whole simplex") {
    const Pmf third{Rational(1, 3), Rational(2, 3)};
    const auto precise = make_valid_network({{"A", 2}, {"B", 2}}, {{0, 1}},
                                            {{singleton(third)}, {singleton(kHalf), singleton(third)}});
    const GbrTask t{1, {1, 0}, {}, Bound::Lower};
    CHECK(epistemic::gbr_epistemic(precise, t).mu == bn_expectation(precise, t));
    auto up = t;
    up.bound = Bound::Upper;
    CHECK(epistemic::gbr_epistemic(precise, up).mu == bn_expectation(precise, t));

    const auto lone = make_valid_network({{"A", 3}}, {}, {{testing::vacuous_spec(3)}});
    const auto poly = epistemic::epistemic_polytope(lone);
    CHECK(poly.rows.empty());
    CHECK(epistemic::gbr_epistemic(lone, {0, {2, 1, 5}, {}, Bound::Lower}).mu == 1);
  }

  TEST_CASE("routes and methods agree") {
    testing::Rng rng(24);
    for (int k = 0; k < 25; ++k) {
      const auto inst = testing::random_general_network(rng, {4, 2, 32});
      CAPTURE(k);
      epistemic::Options primal;
      primal.route = lp::Route::Primal;
      const auto dual = epistemic::gbr_epistemic(inst.network, inst.task);
      CHECK(epistemic::gbr_epistemic(inst.network, inst.task, primal).mu == dual.mu);
      epistemic::Options bis;
      bis.method = epistemic::Method::Bisection;
      bis.bisection_steps = 40;
      const auto b = epistemic::gbr_epistemic(inst.network, inst.task, bis);
      CHECK(b.bracket_low <= dual.mu);
      CHECK(dual.mu <= b.bracket_high);
      CHECK(b.bracket_high - b.bracket_low < Rational(1, 1000000));
      const Rational strong_mu = *testing::strong_oracle(inst.network, inst.task);
      CHECK((inst.task.bound == Bound::Lower ? dual.mu <= strong_mu : dual.mu >= strong_mu));
    }
  }

  TEST_CASE("binary networks agree with the explicit oracle") {
    testing::Rng rng(25);
    int done = 0;
    for (int k = 0; k < 200 && done < 30; ++k) {
      const auto inst = testing::random_general_network(rng, {4, 2, 16});
      bool binary = true;
      for (NodeId i = 0; i < inst.network.size(); ++i) binary = binary && inst.network.cardinality(i) == 2;
      if (!binary) continue;
      ++done;
      CAPTURE(k);
      CHECK(epistemic::gbr_epistemic(inst.network, inst.task).mu == testing::epistemic_oracle_binary(inst.network, inst.task));
    }
    CHECK(done == 30);
  }

  TEST_CASE("atom cap") {
    const auto net = testing::load_network("example1");
    epistemic::Options o;
    o.max_atoms = 4;
    try {
      epistemic::gbr_epistemic(net, testing::load_task("example1"), o);
      FAIL("cap ignored");
    } catch (const CredalError& e) {
      CHECK(e.kind() == ErrorKind::SizeCap);
    }
  }
}

TEST_SUITE("hmm") {
  TEST_CASE("minimal chain is accepted") {
    const auto net = small_hmm();
    const GbrTask task{2, {1, 0}, {{1, 0}}, Bound::Lower};
    const auto c = hmm::classify_predictive_hmm(net, task);
    REQUIRE(c.accepted());
    CHECK(c.hmm->chain == std::vector<NodeId>{0, 2});
    CHECK(c.hmm->manifest[0] == std::optional<NodeId>(1));
    const auto r = hmm::gbr_hmm(net, *c.hmm, task);
    CHECK(r.mu == *testing::strong_oracle(net, task));
    CHECK(r.mu == strong::gbr_strong(net, task).mu);
    CHECK(r.mu == epistemic::gbr_epistemic(net, task).mu);
  }

  TEST_CASE("phi brackets") {
    const auto net = small_hmm();
    const GbrTask task{2, {2, -1}, {{1, 1}}, Bound::Lower};
    const auto h = *hmm::classify_predictive_hmm(net, task).hmm;
    CHECK(hmm::phi_hmm(net, h, task, 2).value <= 0);
    CHECK(hmm::phi_hmm(net, h, task, -1).value >= 0);
    const auto mu = hmm::gbr_hmm(net, h, task).mu;
    CHECK(hmm::phi_hmm(net, h, task, mu).value == 0);
    CHECK(hmm::phi_hmm(net, h, task, mu).value == strong::strong_phi(net, task, mu));
  }

  TEST_CASE("example 3 is rejected") {
    const auto c = hmm::classify_predictive_hmm(testing::load_network("example3"), testing::load_task("example3"));
    CHECK_FALSE(c.accepted());
    CHECK(c.reason == "query node is not the terminal state node");
  }

  TEST_CASE("branching state nodes are rejected") {
    const CredalSpec b = singleton(kHalf);
    const auto net = make_valid_network({{"A", 2}, {"B", 2}, {"C", 2}, {"D", 2}, {"E", 2}},
                                        {{0, 1}, {0, 2}, {1, 3}, {2, 4}},
                                        {{b}, {b, b}, {b, b}, {b, b}, {b, b}});
    CHECK_FALSE(hmm::classify_predictive_hmm(net, {3, {1, 0}, {}, Bound::Lower}).accepted());
  }

  TEST_CASE("precise chain gives the marginal") {
    const Pmf a{Rational(1, 5), Rational(4, 5)}, b{Rational(2, 3), Rational(1, 3)};
    const auto net = make_valid_network({{"S1", 2}, {"S2", 2}, {"S3", 2}}, {{0, 1}, {1, 2}},
                                        {{singleton(a)}, {singleton(a), singleton(b)}, {singleton(b), singleton(a)}});
    const GbrTask task{2, {1, 0}, {}, Bound::Lower};
    const auto h = *hmm::classify_predictive_hmm(net, task).hmm;
    CHECK(hmm::gbr_hmm(net, h, task).mu == bn_expectation(net, task));
  }

  TEST_CASE("markov chain with identity manifests") {
    // Observing a copy of a state is observing the state itself.
    const CredalSpec copy0 = singleton({1, 0}), copy1 = singleton({0, 1});
    const auto net = make_valid_network(
        {{"S1", 2}, {"O1", 2}, {"S2", 2}, {"S3", 2}}, {{0, 1}, {0, 2}, {2, 3}},
        {{interval(Rational(1, 4), Rational(2, 3))},
         {copy0, copy1},
         {interval(Rational(1, 5), Rational(1, 2)), interval(Rational(3, 5), Rational(4, 5))},
         {interval(Rational(1, 3), Rational(1, 2)), interval(Rational(1, 6), Rational(5, 6))}});
    const GbrTask task{3, {1, 0}, {{1, 1}}, Bound::Lower};
    const auto c = hmm::classify_predictive_hmm(net, task);
    REQUIRE(c.accepted());
    CHECK(c.hmm->markov_chain);
    const auto mu = hmm::gbr_hmm(net, *c.hmm, task).mu;
    CHECK(mu == *testing::strong_oracle(net, task));
    CHECK(mu == epistemic::gbr_epistemic(net, task).mu);
  }

  TEST_CASE("random predictive HMMs: three engines agree") {
    testing::Rng rng(26);
    testing::HmmOptions o;
    o.max_chain = 4;
    o.max_atoms = 48;
    for (int k = 0; k < 30; ++k) {
      const auto inst = testing::random_predictive_hmm(rng, o);
      CAPTURE(k);
      const auto c = hmm::classify_predictive_hmm(inst.network, inst.task);
      REQUIRE(c.accepted());
      const auto mu = hmm::gbr_hmm(inst.network, *c.hmm, inst.task).mu;
      CHECK(mu == *testing::strong_oracle(inst.network, inst.task));
      CHECK(mu == epistemic::gbr_epistemic(inst.network, inst.task).mu);
    }
  }
}
