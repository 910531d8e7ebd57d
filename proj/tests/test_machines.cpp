#include <doctest.h>

#include "symsched/machines.hpp"

using namespace symsched;

namespace {

long long sum(const ClassCost& c) {
  long long t = 0;
  for (const auto& kv : c) t += kv.second;
  return t;
}

}  // namespace

TEST_CASE("torus") {
  MachineModel m = torus({3, 3});
  CHECK(m.node_count() == 9);
  CHECK(m.processor_count() == 9);
  CHECK(sum(m.link_cost(modvec({1, 0}))) == 1);
  CHECK(m.link_cost(modvec({2, 2})) == ClassCost{{"torus-dim-0", 1}, {"torus-dim-1", 1}});
  CHECK(m.link_cost(modvec({0, 0})).empty());
  CHECK(m.coords(5) == std::vector<int>{1, 2});
  CHECK(m.node_at({1, 2}) == 5);
  CHECK(m.translate(modvec({2, 2}), 0) == m.node_at({2, 2}));

  MachineModel z = torus({4, 4, 2});
  CHECK(z.link_cost(modvec({0, 0, 1})) == ClassCost{{"torus-dim-2", 1}});
  CHECK(z.move_cost(z.node_at({0, 0, 0}), z.node_at({3, 2, 1})) ==
        ClassCost{{"torus-dim-0", 1}, {"torus-dim-1", 2}, {"torus-dim-2", 1}});

  // the network group acts on the nodes
  const GroupAction& a = m.node_action();
  for (const auto& g : m.network_group().enumerate())
    for (int n = 0; n < 9; ++n) CHECK(a.act(g, n) == m.translate(g, n));
}

TEST_CASE("fat tree") {
  MachineModel m = fat_tree(2);
  CHECK(m.node_count() == 4);
  CHECK(m.node_label(2) == "P01");
  const FiniteGroup& N = m.network_group();
  CHECK(*N.order() == 8);
  GroupElement top = *N.from_perm(Perm{{2, 3, 0, 1}});
  GroupElement lower = *N.from_perm(Perm{{1, 0, 3, 2}});
  // the top swap: every leaf climbs to the root
  CHECK(m.link_cost(top).at("tree-level-2") == 4);
  CHECK(m.link_cost(lower) == ClassCost{{"tree-level-1", 4}});
  CHECK(m.link_cost(N.identity()).empty());

  // per-leaf path length (up and down) is twice the level crossings
  MachineModel big = fat_tree(3);
  for (const auto& g : big.network_group().enumerate()) {
    long long path = 0;
    for (int x = 0; x < 8; ++x) {
      int y = big.translate(g, x), h = 0;
      for (int d = x ^ y; d; d >>= 1) ++h;
      path += 2 * h;
    }
    CHECK(path == 2 * sum(big.link_cost(g)));
  }
}

TEST_CASE("pmh") {
  MachineModel one = pmh({{12, 4}});
  CHECK(one.node_count() == 4);
  CHECK(one.processor_count() == 4);

  MachineModel two = pmh({{12, 2}, {48, 2}});
  CHECK(two.node_count() == 16);
  CHECK(two.processor_count() == 4);
  // N2 = S4 wr S4
  CHECK(*two.network_group().order() == 24ULL * 24 * 24 * 24 * 24);
  CHECK(two.move_cost(0, 4) == ClassCost{{"level-2", 1}});
  CHECK(two.move_cost(0, 3) == ClassCost{{"level-1", 1}});
  CHECK(two.link_classes() == std::vector<std::string>{"level-1", "level-2"});

  CHECK_THROWS_AS(pmh({{10, 1}}), Error);
  CHECK_THROWS_AS(pmh({{12, 1}, {36, 1}}), Error);
  CHECK_THROWS_AS(pmh({{12, 3}}), Error);
  try {
    pmh({{24, 1}, {12, 1}});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidHierarchy);
  }
}

TEST_CASE("hex array") {
  MachineModel h = hex_array(9);
  int c = h.node_at({4, 4});
  CHECK(h.coords(h.translate(hex_g1(), h.node_at({0, 0}))) == std::vector<int>{1, 1});
  CHECK(h.translate(modvec({0, 0}), c) == c);
  FiniteGroup N = h.network_group();
  CHECK(N.compose(N.inverse(hex_g2()), hex_g1()) == hex_g3());
  CHECK(h.link_cost(hex_g1()) == ClassCost{{"hex+g1", 1}});
  CHECK(h.link_cost(N.inverse(hex_g1())) == ClassCost{{"hex-g1", 1}});
  CHECK(h.link_cost(modvec({1, -1})) == ClassCost{{"hex+g2", 1}, {"hex-g3", 1}});
  try {
    h.translate(modvec({5, 0}), c);
    FAIL("no overflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::WindowOverflow);
  }
  CHECK_THROWS_AS(h.node_action(), Error);
}

TEST_CASE("time flattening") {
  TimeModel one = flatten_time(time_model({4}), {5});
  CHECK(one.clock({3}) == 15);
  TimeModel bin = flatten_time(time_model({2, 2, 2}), {4, 2, 1});
  CHECK(bin.clock({0, 0, 1}) == 1);
  CHECK(bin.clock({0, 1, 0}) == 2);
  CHECK(bin.clock({1, 0, 0}) == 4);
  CHECK(bin.clock({0, 0, 0}) == 0);
  CHECK(time_model({3, 4}).clock({2, 3}) == 11);
  CHECK(time_model({3, 4}).total_steps() == 12);
  CHECK_THROWS_AS(flatten_time(time_model({2}), {0}), Error);
  CHECK_THROWS_AS(time_model({2}).clock({2}), Error);
  CHECK(*time_model({3, 4}).delta_group().order() == 12);
}

TEST_CASE("config files") {
  MachineSpec s = parse_machine_config("# torus\nkind = torus\ndims = 4,4,2\nmemory_words = 12\nweight.torus-dim-2 = 3\n");
  CHECK(s.kind == MachineKind::Torus);
  CHECK(s.dims == std::vector<int>{4, 4, 2});
  CHECK(s.memory_words == 12);
  CHECK(build_machine(s).weight("torus-dim-2") == 3);
  CHECK(build_machine(s).weight("torus-dim-0") == 1);

  MachineSpec p = parse_machine_config("kind=pmh\nlevels=12:1,192:8\n");
  CHECK(p.pmh == std::vector<PmhLevel>{{12, 1}, {192, 8}});
  CHECK(parse_machine_config("kind=fat-tree\nlevels=4").levels == 4);

  for (const char* bad : {"dims=3", "kind=ring", "kind=torus\ndims=a", "kind=torus\nfoo=1", "kind torus",
                          "kind=torus\nweight.x=-1"}) {
    CAPTURE(bad);
    try {
      parse_machine_config(bad);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ParseError);
    }
  }
}
