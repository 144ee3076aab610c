#include <random>

#include <gtest/gtest.h>

#include "networks.hpp"
#include "spinnet/network/canonicalize.hpp"
#include "spinnet/network/decomposition.hpp"
#include "spinnet/network/refinement.hpp"
#include "spinnet/state/evaluate.hpp"

using namespace spinnet;

namespace {

std::shared_ptr<SegmentRegistry> theta_registry() {
  auto reg = std::make_shared<SegmentRegistry>();
  reg->add_segment("a", "A", "B");
  reg->add_segment("b", "A", "B");
  reg->add_segment("c", "A", "B");
  return reg;
}

SpinNetwork theta_network(RegistryPtr reg, Spin ja, Spin jb, Spin jc) {
  SpinNetwork n{reg, {{"a", {{0, false}}, 0, 1, ja}, {"b", {{1, false}}, 0, 1, jb}, {"c", {{2, false}}, 0, 1, jc}}, {}};
  n.vertices[0] = intertwiner_basis(expected_legs(n.edges, 0)).at(0);
  n.vertices[1] = intertwiner_basis(expected_legs(n.edges, 1)).at(0);
  return n;
}

double max_eval_diff(const SpinNetwork& a, const SpinNetwork& b, int trials, std::uint64_t seed) {
  CounterRng rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    auto h = testnet::random_holonomies(*a.registry, rng);
    worst = std::max(worst, std::abs(evaluate(a, h) - evaluate(b, h)));
  }
  return worst;
}

}  // namespace

TEST(Registry, RejectsDuplicatesAndComparesByContent) {
  SegmentRegistry r;
  r.add_segment("s", "p", "q");
  EXPECT_THROW(r.add_segment("s", "p", "q"), ValidationError);
  EXPECT_THROW(r.add_segment("t~", "p", "q"), ValidationError);
  SegmentRegistry r2;
  r2.add_segment("s", "p", "q");
  EXPECT_TRUE(r == r2);
  EmbeddedGraph g1(std::make_shared<SegmentRegistry>(r), {0});
  EmbeddedGraph g2(std::make_shared<SegmentRegistry>(r2), {0, 0});
  EXPECT_TRUE(g1 == g2);
}

TEST(Decompose, Examples) {
  auto theta = theta_registry();
  auto d = decompose(EmbeddedGraph(theta, {0, 1, 2}));
  EXPECT_EQ(d.points.size(), 2u);
  EXPECT_EQ(d.intervals.size(), 3u);
  EXPECT_EQ(d.circles.size(), 0u);

  auto circle = circle_registry(4);
  d = decompose(EmbeddedGraph(circle, {0, 1, 2, 3}));
  EXPECT_EQ(d.points.size(), 0u);
  EXPECT_EQ(d.intervals.size(), 0u);
  ASSERT_EQ(d.circles.size(), 1u);
  EXPECT_EQ(d.circles[0].word.size(), 4u);
  EXPECT_EQ(d.circles[0].word[0], (SignedSegment{0, false}));

  d = decompose(EmbeddedGraph(circle, {1, 2}));
  EXPECT_EQ(d.points.size(), 2u);
  ASSERT_EQ(d.intervals.size(), 1u);
  EXPECT_EQ(d.circles.size(), 0u);
  EXPECT_EQ(d.intervals[0].word.size(), 2u);
}

TEST(Decompose, OrientsByLeastSegmentAndIsStable) {
  auto reg = std::make_shared<SegmentRegistry>();
  reg->add_segment("x", "B", "C");  // 0
  reg->add_segment("y", "B", "A");  // 1: traversed backwards from A
  reg->add_segment("z", "C", "D");  // 2
  auto d = decompose(EmbeddedGraph(reg, {0, 1, 2}));
  ASSERT_EQ(d.intervals.size(), 1u);
  const Word expected{{1, true}, {0, false}, {2, false}};
  EXPECT_EQ(d.intervals[0].word, expected);

  std::mt19937_64 rng(3);
  for (int t = 0; t < 40; ++t) {
    auto sub = testnet::random_substrate(rng, 5, 8, 0.15);
    auto g = EmbeddedGraph(sub, testnet::random_subset(rng, 8, 1, 8));
    auto d1 = decompose(g);
    std::vector<SegmentId> covered;
    std::size_t pieces = 0;
    for (const auto* list : {&d1.intervals, &d1.circles})
      for (const auto& c : *list) {
        ++pieces;
        bool least_forward = false;
        for (const auto& s : c.word) {
          covered.push_back(s.id);
          if (s.id == c.least()) least_forward = !s.reversed;
        }
        EXPECT_TRUE(least_forward);
      }
    std::sort(covered.begin(), covered.end());
    EXPECT_EQ(covered, g.segments);
    EXPECT_EQ(decompose(EmbeddedGraph(sub, covered)), d1);
    EXPECT_GT(pieces, 0u);
  }
}

TEST(Validate, NamesOffendingEdge) {
  auto reg = circle_registry(1);
  auto n = loop_network(reg, {{0, false}}, Spin::half(), "ring");
  EXPECT_NO_THROW(validate(n));
  n.edges[0].spin = Spin(0);
  try {
    validate(n);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("ring"), std::string::npos);
  }
  n = loop_network(reg, {{0, false}}, Spin::half());
  n.vertices[0].components[1] = 0.3;
  EXPECT_THROW(validate(n), ValidationError);
}

TEST(Evaluate, LoopIsTwiceW) {
  auto reg = circle_registry(3);
  auto n = loop_network(reg, {{0, false}, {1, false}, {2, false}}, Spin::half());
  CounterRng rng(5);
  for (int t = 0; t < 20; ++t) {
    GroupElement g = haar_sample(rng);
    HolonomyAssignment h({{0, g}, {1, GroupElement::identity()}, {2, GroupElement::identity()}});
    EXPECT_NEAR(std::abs(evaluate(n, h) - 2.0 * g.w), 0.0, 1e-12);
  }
  HolonomyAssignment missing({{0, GroupElement::identity()}});
  EXPECT_THROW(evaluate(n, missing), ValidationError);
}

TEST(Evaluate, IdentityHolonomiesContractIntertwiners) {
  auto reg = theta_registry();
  auto n = theta_network(reg, Spin::half(), Spin::half(), Spin::one());
  HolonomyAssignment h({{0, {}}, {1, {}}, {2, {}}});
  cplx direct = 0;
  const auto& a = n.vertices.at(0).components;
  const auto& b = n.vertices.at(1).components;
  for (std::size_t i = 0; i < a.size(); ++i) direct += a[i] * b[i];
  EXPECT_NEAR(std::abs(evaluate(n, h) - direct), 0.0, 1e-12);
}

TEST(Evaluate, MatchesNaiveIndexSum) {
  std::mt19937_64 rng(11);
  CounterRng hrng(12);
  int checked = 0;
  for (int t = 0; t < 60 && checked < 30; ++t) {
    auto sub = testnet::random_substrate(rng, 4, 6);
    auto n = testnet::random_network(sub, testnet::closed_subset(rng, *sub, 1, 5), rng);
    if (!n || n->edges.size() > 6) continue;
    ++checked;
    auto h = testnet::random_holonomies(*sub, hrng);
    const cplx fast = evaluate(*n, h), slow = testnet::naive_evaluate(*n, h);
    EXPECT_NEAR(std::abs(fast - slow), 0.0, 1e-10 * std::max(1.0, std::abs(slow)));
  }
  EXPECT_GE(checked, 20);
}

TEST(Evaluate, GaugeInvariant) {
  std::mt19937_64 rng(21);
  CounterRng hrng(22);
  for (int t = 0; t < 20; ++t) {
    auto sub = testnet::random_substrate(rng, 4, 6);
    auto n = testnet::random_network(sub, testnet::closed_subset(rng, *sub, 1, 6), rng);
    if (!n) continue;
    auto h = testnet::random_holonomies(*sub, hrng);
    std::vector<GroupElement> gauge;
    for (std::size_t p = 0; p < sub->point_count(); ++p) gauge.push_back(haar_sample(hrng));
    HolonomyAssignment moved;
    for (const auto& [s, g] : h.values()) {
      const auto& seg = sub->segment(s);
      moved.set(s, gauge[static_cast<std::size_t>(seg.target)] * g * gauge[static_cast<std::size_t>(seg.source)].inverse());
    }
    EXPECT_NEAR(std::abs(evaluate(*n, h) - evaluate(*n, moved)), 0.0, 1e-9);
  }
}

TEST(Refine, PerSegmentEdgesSameState) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 20; ++t) {
    auto sub = testnet::random_substrate(rng, 4, 7);
    auto n = testnet::random_network(sub, testnet::closed_subset(rng, *sub, 2, 7), rng);
    if (!n) continue;
    auto r = refine(*n);
    EXPECT_NO_THROW(validate(r));
    for (const auto& e : r.edges) EXPECT_EQ(e.word.size(), 1u);
    EXPECT_LT(max_eval_diff(*n, r, 10, 100 + static_cast<std::uint64_t>(t)), 1e-10);
  }
}

TEST(CommonRefinement, LoopsWithDifferentSubdivision) {
  auto reg = circle_registry(4);
  auto a = loop_network(reg, {{0, false}, {1, false}, {2, false}, {3, false}}, Spin::half());
  auto b = loop_network(reg, {{2, false}, {3, false}, {0, false}, {1, false}}, Spin::one());
  auto [ra, rb] = common_refinement(a, b);
  EXPECT_EQ(ra.edges.size(), 4u);
  EXPECT_EQ(rb.edges.size(), 4u);
  EXPECT_LT(max_eval_diff(a, ra, 10, 7), 1e-12);
  EXPECT_LT(max_eval_diff(b, rb, 10, 8), 1e-12);
  auto other = circle_registry(4, "t");
  auto c = loop_network(other, {{0, false}, {1, false}, {2, false}, {3, false}}, Spin::half());
  EXPECT_THROW(common_refinement(a, c), ValidationError);
}

TEST(Canonicalize, ReversedLoopHasSameForm) {
  auto reg = circle_registry(3);
  auto fwd = loop_network(reg, {{1, false}, {2, false}, {0, false}}, Spin::half());
  auto bwd = loop_network(reg, {{2, true}, {1, true}, {0, true}}, Spin::half());
  auto cf = canonicalize(fwd), cb = canonicalize(bwd);
  EXPECT_LT(max_abs_diff(cf, cb), 1e-12);
  ASSERT_EQ(cf.edges.size(), 1u);
  EXPECT_EQ(cf.edges[0].word, (Word{{0, false}, {1, false}, {2, false}}));
  EXPECT_LT(max_eval_diff(fwd, bwd, 20, 9), 1e-12);
}

TEST(Canonicalize, AbsorbsIdentityBivalentVertex) {
  auto reg = std::make_shared<SegmentRegistry>();
  reg->add_segment("a", "A", "B");
  reg->add_segment("m1", "A", "M");
  reg->add_segment("m2", "M", "B");
  reg->add_segment("c", "A", "B");
  SpinNetwork n{reg,
                {{"x", {{0, false}}, 0, 1, Spin::half()},
                 {"y1", {{1, false}}, 0, 2, Spin::half()},
                 {"y2", {{2, false}}, 2, 1, Spin::half()},
                 {"z", {{3, false}}, 0, 1, Spin::one()}},
                {}};
  n.vertices[0] = intertwiner_basis(expected_legs(n.edges, 0)).at(0);
  n.vertices[1] = intertwiner_basis(expected_legs(n.edges, 1)).at(0);
  n.vertices[2] = canonical_bivalent({Spin::half(), Direction::in}, {Spin::half(), Direction::out});
  auto c = canonicalize(n);
  EXPECT_EQ(c.edges.size(), 3u);
  EXPECT_EQ(c.vertices.size(), 2u);
  EXPECT_FALSE(c.vertices.contains(2));
  EXPECT_LT(max_eval_diff(n, c, 30, 10), 1e-10);
}

TEST(Canonicalize, RandomNetworksAgreeAndAreIdempotent) {
  std::mt19937_64 rng(41);
  int checked = 0;
  for (int t = 0; t < 60 && checked < 30; ++t) {
    auto sub = testnet::random_substrate(rng, 5, 8, 0.15);
    auto n = testnet::random_network(sub, testnet::closed_subset(rng, *sub, 1, 8), rng, {3, 0.5});
    if (!n) continue;
    ++checked;
    auto c = canonicalize(*n);
    EXPECT_NO_THROW(validate(c));
    const auto d = decompose(c.graph());
    EXPECT_EQ(c.edges.size(), d.intervals.size() + d.circles.size());
    EXPECT_LT(max_eval_diff(*n, c, 20, 200 + static_cast<std::uint64_t>(t)), 1e-10);
    EXPECT_LT(max_abs_diff(canonicalize(c), c), 1e-10);
  }
  EXPECT_GE(checked, 20);
}

TEST(Canonicalize, RejectsWebsAndUnequalBivalentSpins) {
  auto reg = circle_registry(2);
  auto a = loop_network(reg, {{0, false}, {1, false}}, Spin::half(), "a");
  auto b = loop_network(reg, {{0, false}, {1, false}}, Spin::half(), "b");
  SpinNetwork web{reg, {a.edges[0], b.edges[0]}, {}};
  auto ta = LabeledTensor::from_intertwiner(a.vertices[0], std::vector<LegId>{end_leg(0, End::source), end_leg(0, End::target)});
  auto tb = LabeledTensor::from_intertwiner(b.vertices[0], std::vector<LegId>{end_leg(1, End::source), end_leg(1, End::target)});
  web.vertices[0] = to_intertwiner(outer(ta, tb), web.edges, 0);
  EXPECT_NO_THROW(validate(web));
  EXPECT_FALSE(is_graph(web));
  EXPECT_THROW(canonicalize(web), ValidationError);

  SpinNetwork bad{reg, {{"x", {{0, false}}, 0, 1, Spin::half()}, {"y", {{1, false}}, 1, 0, Spin::one()}}, {}};
  bad.vertices[0] = Intertwiner{expected_legs(bad.edges, 0), std::vector<cplx>(6)};
  bad.vertices[1] = Intertwiner{expected_legs(bad.edges, 1), std::vector<cplx>(6)};
  EXPECT_THROW(canonicalize(bad), ValidationError);
}
