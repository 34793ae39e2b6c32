#include <gtest/gtest.h>

#include <sstream>

#include "hyperfind/graph.hpp"

using namespace hyperfind;
using namespace hyperfind::graph;
using logic::CmpOp;
using logic::mk_cmp;
using logic::mk_int;
using logic::mk_var;

namespace {

// loop { input x; if x > 0 then output 1 else output 0 }
ProgramGraph fig2() {
  ProgramGraph g;
  Location l0 = g.add_location("l0");
  Location l1 = g.add_location("l1");
  g.add_variable("x");
  g.add_variable("output");
  g.set_initial(l0);
  g.add_edge(l0, l1, logic::mk_true(), Havoc{"x"});
  g.add_edge(l1, l0, mk_cmp(CmpOp::Gt, mk_var("x"), mk_int(0)), Assign{"output", mk_int(1)});
  g.add_edge(l1, l0, mk_cmp(CmpOp::Le, mk_var("x"), mk_int(0)), Assign{"output", mk_int(0)});
  return g;
}

// l0 --(v := v + 1)--> l1, l1 --skip--> l0, l1 observed.
ProgramGraph counter(const std::string &v) {
  ProgramGraph g;
  Location l0 = g.add_location("l0");
  Location l1 = g.add_location("l1");
  g.add_variable(v);
  g.add_edge(l0, l1, logic::mk_true(), Assign{v, logic::mk_add(mk_var(v), mk_int(1))});
  g.add_edge(l1, l0, logic::mk_true(), Skip{});
  return g;
}

bool mentions(const std::vector<ValidationError> &errors, const std::string &needle) {
  for (const auto &e : errors)
    if (e.message.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST(GraphValidate, Fig2IsValid) { EXPECT_TRUE(validate(fig2()).empty()); }

TEST(GraphValidate, DanglingEdge) {
  ProgramGraph g = fig2();
  g.add_edge(Location{1}, Location{7}, logic::mk_true(), Skip{});
  auto errors = validate(g);
  ASSERT_FALSE(errors.empty());
  EXPECT_TRUE(mentions(errors, "dangling edge"));
}

TEST(GraphValidate, UnknownVariableInGuard) {
  ProgramGraph g = fig2();
  g.add_edge(Location{0}, Location{1}, mk_cmp(CmpOp::Lt, mk_var("z"), mk_int(0)), Skip{});
  auto errors = validate(g);
  ASSERT_FALSE(errors.empty());
  EXPECT_TRUE(mentions(errors, "unknown variable 'z'"));
}

TEST(GraphValidate, AssignmentToUnknownVariable) {
  ProgramGraph g = fig2();
  g.add_edge(Location{0}, Location{1}, logic::mk_true(), Assign{"w", mk_int(0)});
  EXPECT_TRUE(mentions(validate(g), "'w'"));
}

TEST(GraphValidate, ObservedLocationMustExist) {
  EXPECT_TRUE(mentions(validate(fig2(), ObservationSet{Location{4}}), "observed location"));
}

TEST(GraphEdges, DeclarationOrder) {
  ProgramGraph g = fig2();
  const auto &out = g.out_edges(Location{1});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_LT(out[0], out[1]);
  EXPECT_EQ(g.edges()[out[0]].guard, mk_cmp(CmpOp::Gt, mk_var("x"), mk_int(0)));
}

TEST(GraphDump, OneEdgePerLine) {
  std::ostringstream os;
  dump(os, fig2());
  EXPECT_NE(os.str().find("l0 -> l1 [true] havoc x\n"), std::string::npos) << os.str();
  EXPECT_NE(os.str().find("l1 -> l0 [x > 0]"), std::string::npos) << os.str();
}

TEST(GraphPrefix, RenamesEveryVariable) {
  ProgramGraph g = fig2().with_prefixed_variables("p1.");
  EXPECT_EQ(g.variables(), (std::vector<std::string>{"p1.output", "p1.x"}));
  EXPECT_TRUE(validate(g).empty());
  EXPECT_EQ(g.edges()[1].guard, mk_cmp(CmpOp::Gt, mk_var("p1.x"), mk_int(0)));
}

TEST(GraphReentry, ObservedLocationBecomesSink) {
  ProgramGraph g = counter("a");
  ObservationSet obs{Location{1}};
  Reentry r = add_reentry_points(g, obs);
  ASSERT_EQ(r.graph.num_locations(), 3u);
  ASSERT_EQ(r.reentry.size(), 1u);
  EXPECT_TRUE(r.graph.out_edges(Location{1}).empty());
  ASSERT_EQ(r.graph.out_edges(r.reentry[0]).size(), 1u);
  EXPECT_EQ(r.graph.edges()[r.graph.out_edges(r.reentry[0])[0]].dst, Location{0});
  EXPECT_TRUE(validate(r.graph).empty());
}

TEST(GraphProduct, SchematicHasNineLocations) {
  ProgramGraph g1 = counter("a"), g2 = counter("b");
  ObservationSet o{Location{1}};
  AsyncProduct p = async_product(g1, o, g2, o);
  // Two copies of the 3-location G1' and one copy of the 3-location G2'.
  EXPECT_EQ(p.graph.num_locations(), 9u);
  EXPECT_TRUE(validate(p.graph, p.observed).empty());
  EXPECT_EQ(p.observed.size(), 1u);
  EXPECT_EQ(p.graph.variables(), (std::vector<std::string>{"a", "b"}));
  for (Location l : p.observed) EXPECT_EQ(p.origin[l.id].side, 2);
}

TEST(GraphProduct, RedirectEdgesAreUnconditionalSkips) {
  ProgramGraph g1 = counter("a"), g2 = counter("b");
  ObservationSet o{Location{1}};
  AsyncProduct p = async_product(g1, o, g2, o);
  std::size_t redirects = 0;
  for (const Edge &e : p.graph.edges()) {
    if (p.origin[e.src.id].side == p.origin[e.dst.id].side) continue;
    ++redirects;
    EXPECT_TRUE(e.guard.is_true());
    EXPECT_TRUE(std::holds_alternative<Skip>(e.effect));
  }
  // G1(0) -> G2(1), G1(1) -> G2(1), G2(1) -> G1(1).
  EXPECT_EQ(redirects, 3u);
}

TEST(GraphProduct, EmptyObservationSetRejected) {
  ProgramGraph g1 = counter("a"), g2 = counter("b");
  EXPECT_THROW(async_product(g1, ObservationSet{Location{1}}, g2, ObservationSet{}), ProductError);
}

TEST(GraphProduct, SharedVariablesRejected) {
  ProgramGraph g = counter("a");
  ObservationSet o{Location{1}};
  EXPECT_THROW(async_product(g, o, g, o), ProductError);
}
