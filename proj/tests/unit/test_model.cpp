#include <algorithm>

#include "doctest.h"

#include "credal/io.hpp"
#include "credal/model.hpp"
#include "credal/polytope.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random_networks.hpp"

using namespace credal;
using testing::singleton;

namespace {

bool has_finding(const ValidationReport& r, const std::string& needle) {
  return std::any_of(r.findings.begin(), r.findings.end(),
                     [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

CredalNetwork example1_precise() {
  const auto net = testing::load_network("example1");
  const Pmf half{Rational(1, 2), Rational(1, 2)};
  return net.with_specs(0, {singleton(half)}).with_specs(1, {singleton(half)});
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("example 1 parses and validates") {
    const auto net = testing::load_network("example1");
    CHECK(net.size() == 3);
    CHECK(net.arcs().size() == 2);
    CHECK(net.parents(2) == std::vector<NodeId>{0, 1});
    CHECK(net.config_count(2) == 4);
    CHECK(net.spec(0, 0).extrema.size() == 2);
    CHECK(validate_network(net).ok());
    CHECK(net.joint_size() == 8);
  }

  TEST_CASE("single vacuous node") {
    const auto net = parse_network(
        R"({"variables":[{"name":"A","card":2}],"arcs":[],"cpts":[[{"extrema":[["1","0"],["0","1"]]}]]})");
    CHECK(net.size() == 1);
    CHECK(net.spec(0, 0).is_vacuous());
  }

  TEST_CASE("unnormalized pmf is rejected") {
    try {
      parse_network(R"({"variables":[{"name":"A","card":2}],"arcs":[],"cpts":[[{"extrema":[["1/2","2/5"]]}]]})");
      FAIL("accepted");
    } catch (const CredalError& e) {
      CHECK(e.kind() == ErrorKind::Validation);
      CHECK(std::string(e.what()).find("pmf not normalized") != std::string::npos);
    }
  }

  TEST_CASE("syntax errors carry the byte offset") {
    try {
      parse_network(R"({"variables": [}")");
      FAIL("accepted");
    } catch (const CredalError& e) {
      CHECK(e.kind() == ErrorKind::Parse);
      CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
  }

  TEST_CASE("cycle and redundant points are reported") {
    const Pmf half{Rational(1, 2), Rational(1, 2)};
    const CredalNetwork cyc({{"A", 2}, {"B", 2}}, {{0, 1}, {1, 0}},
                            {{singleton(half), singleton(half)}, {singleton(half), singleton(half)}});
    CHECK(has_finding(validate_network(cyc), "cycle detected"));

    CredalSpec redundant{{{1, 0}, {0, 1}, half}, {}};
    const CredalNetwork red({{"A", 2}}, {}, {{redundant}});
    CHECK(has_finding(validate_network(red), "non-extreme point at index 2"));
  }

  TEST_CASE("round trip through the file format") {
    testing::Rng rng(11);
    for (int k = 0; k < 20; ++k) {
      const auto inst = testing::random_general_network(rng);
      const auto text = serialize_network(inst.network);
      const auto back = parse_network(text);
      CHECK(back == inst.network);
      CHECK(serialize_network(back) == text);
      const auto task_back = parse_task(serialize_task(inst.task));
      CHECK(task_back.query == inst.task.query);
      CHECK(task_back.f == inst.task.f);
      CHECK(task_back.evidence == inst.task.evidence);
      CHECK(task_back.bound == inst.task.bound);
    }
  }

  TEST_CASE("task validation") {
    const auto net = testing::load_network("example1");
    GbrTask t{2, {1, 0}, {}, Bound::Lower};
    CHECK_NOTHROW(check_task(net, t));
    t.f = {1};
    CHECK_THROWS_AS(check_task(net, t), CredalError);
    t = {2, {1, 0}, {{2, 0}}, Bound::Lower};
    CHECK_THROWS_AS(check_task(net, t), CredalError);
    t = {2, {1, 0}, {{0, 5}}, Bound::Lower};
    CHECK_THROWS_AS(check_task(net, t), CredalError);
  }

  TEST_CASE("bn_expectation") {
    const auto net = example1_precise();
    CHECK(bn_expectation(net, {2, {1, 0}, {}, Bound::Lower}) == Rational(1, 2));
    CHECK(bn_expectation(net, {2, {3, 3}, {}, Bound::Lower}) == 3);
    CHECK(bn_expectation(net, {0, {1, 0}, {{2, 0}}, Bound::Lower}) == Rational(1, 2));

    // Deterministic chain contradicting the evidence.
    const CredalNetwork chain({{"A", 2}, {"B", 2}}, {{0, 1}},
                              {{singleton({1, 0})}, {singleton({1, 0}), singleton({0, 1})}});
    try {
      bn_expectation(chain, {0, {1, 0}, {{1, 1}}, Bound::Lower});
      FAIL("accepted");
    } catch (const CredalError& e) {
      CHECK(e.kind() == ErrorKind::GbrUndefined);
    }
  }

  TEST_CASE("accumulate matches the full joint") {
    testing::Rng rng(5);
    for (int k = 0; k < 30; ++k) {
      const auto inst = testing::random_general_network(rng);
      const auto& net = inst.network;
      const PmfChooser first = [&](NodeId i, std::size_t c) -> const Pmf& { return net.spec(i, c).extrema[0]; };
      const auto joint = testing::brute_joint(net, first);
      const auto [num, den] = testing::conditional_sums(net, inst.task, joint);
      const auto sums = accumulate(net, inst.task, first);
      CHECK(sums.weighted == num);
      CHECK(sums.mass == den);
    }
  }

  TEST_CASE("ancestral restriction keeps order and remaps the task") {
    const auto net = testing::load_network("example3");
    const auto task = testing::load_task("example3");
    const auto r = restrict_to_ancestors(net, task);
    CHECK(r.original == std::vector<NodeId>{0, 1, 2, 3});
    const auto only = restrict_to_ancestors(net, {3, {1, 0}, {}, Bound::Lower});
    CHECK(only.original == std::vector<NodeId>{0, 3});
    CHECK(only.task.query == 1);
    CHECK(only.network.parents(1) == std::vector<NodeId>{0});
  }
}

TEST_SUITE("polytope") {
  TEST_CASE("interval on two states") {
    const CredalSpec spec{{{Rational(2, 5), Rational(3, 5)}, {Rational(1, 2), Rational(1, 2)}}, {}};
    const auto facets = v_to_h(spec, 2);
    for (int k = 0; k <= 20; ++k) {
      const Rational q0 = Rational(k) / 20;
      const Pmf q{q0, 1 - q0};
      const bool inside = std::all_of(facets.begin(), facets.end(), [&](const Facet& f) { return satisfies(f, q); });
      CAPTURE(k);
      CHECK(inside == (q0 >= Rational(2, 5) && q0 <= Rational(1, 2)));
    }
  }

  TEST_CASE("vacuous simplex has only non-negativity facets") {
    const auto facets = v_to_h(testing::vacuous_spec(3), 3);
    CHECK(facets.size() == 3);
    for (const auto& f : facets) CHECK(is_nonnegativity_facet(f));
  }

  TEST_CASE("singleton is pinned by equalities") {
    const Rational t(1, 3);
    const auto facets = v_to_h(singleton({t, t, t}), 3);
    CHECK(!facets.empty());
    CHECK(std::all_of(facets.begin(), facets.end(), [](const Facet& f) { return f.equality; }));
    CHECK(std::all_of(facets.begin(), facets.end(), [&](const Facet& f) { return satisfies(f, {t, t, t}); }));
    CHECK_FALSE(std::all_of(facets.begin(), facets.end(), [&](const Facet& f) {
      return satisfies(f, {Rational(1, 2), Rational(1, 4), Rational(1, 4)});
    }));
  }

  TEST_CASE("cardinality cap") {
    CHECK_THROWS_AS(v_to_h(testing::vacuous_spec(6), 6), CredalError);
  }

  TEST_CASE("random sets: facets are tight, valid and exact") {
    testing::Rng rng(3);
    for (int k = 0; k < 40; ++k) {
      const int card = testing::uniform_int(rng, 2, 4);
      const auto spec = testing::random_spec(rng, card, 5, true);
      const auto facets = v_to_h(spec, card);
      for (const auto& f : facets) {
        int tight = 0;
        for (const auto& q : spec.extrema) {
          CHECK(satisfies(f, q));
          tight += dot(f.coefficients, q) == f.bound;
        }
        CHECK(tight >= 1);
      }
      // Random simplex points: inside the facets iff inside the hull.
      for (int s = 0; s < 10; ++s) {
        const auto q = testing::random_pmf(rng, card, true);
        const bool by_facets =
            std::all_of(facets.begin(), facets.end(), [&](const Facet& f) { return satisfies(f, q); });
        CHECK(by_facets == in_convex_hull(q, spec.extrema));
      }
      for (const auto& q : spec.extrema) CHECK(in_convex_hull(q, spec.extrema));
    }
  }
}
