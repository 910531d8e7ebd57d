#include <doctest.h>

#include "oracles.hpp"
#include "symsched/groups.hpp"
#include "symsched/matmul.hpp"

#include <functional>

using namespace symsched;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

std::vector<std::vector<int>> perm_gens(const FiniteGroup& G) {
  std::vector<std::vector<int>> out;
  for (const auto& g : G.generators()) out.push_back(G.as_perm(g).images);
  return out;
}

}  // namespace

TEST_CASE("perm basics") {
  Perm p{{1, 2, 0}};
  CHECK(perm_compose(p, perm_inverse(p)).images == Perm::identity(3).images);
  CHECK(perm_inverse(p).images == std::vector<int>{2, 0, 1});
  // a∘b applies b first
  Perm a{{1, 0, 2}}, b{{0, 2, 1}};
  CHECK(perm_compose(a, b).images == std::vector<int>{1, 2, 0});
  CHECK_FALSE(perm_valid(Perm{{0, 0, 1}}));
  CHECK(Perm::cycle(4).images == std::vector<int>{1, 2, 3, 0});
}

TEST_CASE("compose examples") {
  FiniteGroup sh = shift(3);
  GroupElement s = sh.generators()[0];
  CHECK(sh.compose(s, s).perm().images == std::vector<int>{2, 0, 1});

  FiniteGroup t = abelian({3, 3});
  CHECK(t.compose(modvec({1, 0}), modvec({2, 2})) == modvec({0, 2}));

  FiniteGroup W = iterated_wreath(2, 2);
  GroupElement top = *W.from_perm(Perm{{2, 3, 0, 1}});
  GroupElement left = *W.from_perm(Perm{{1, 0, 2, 3}});
  Perm r = W.as_perm(W.compose(top, left));
  CHECK(r.images == std::vector<int>{3, 2, 0, 1});
  // the arrangement: position p holds the item sent there
  CHECK(perm_inverse(r).images == std::vector<int>{2, 3, 1, 0});

  CHECK(kind_of([&] { t.compose(modvec({1}), modvec({1, 1})); }) == ErrorKind::StructureMismatch);
  CHECK(kind_of([&] { sh.compose(Perm{{1, 0}}, s); }) == ErrorKind::StructureMismatch);
}

TEST_CASE("inverse examples") {
  FiniteGroup sh = shift(5);
  GroupElement s = sh.generators()[0];
  CHECK(sh.inverse(s) == sh.power(s, 4));
  CHECK(abelian({3, 3}).inverse(modvec({1, 2})) == modvec({2, 1}));
  CHECK(symmetric(3).inverse(Perm{{1, 2, 0}}).perm().images == std::vector<int>{2, 0, 1});
  CHECK(kind_of([&] { symmetric(3).inverse(modvec({1})); }) == ErrorKind::StructureMismatch);
}

TEST_CASE("orders match closed forms and brute closure") {
  CHECK(enumerate(iterated_wreath(2, 2)).size() == 8);
  CHECK(enumerate(shift(3)).size() == 3);
  CHECK(enumerate(symmetric(3)).size() == 6);
  CHECK(enumerate(symmetric(4)).size() == 24);
  CHECK(enumerate(abelian({2, 3})).size() == 6);
  CHECK(enumerate(product({symmetric(3), cyclic(2)})).size() == 12);

  FiniteGroup S2 = symmetric(2);
  CHECK(*wreath(S2, 2, S2).order() == 8);
  CHECK(enumerate(wreath(S2, 2, S2)).size() == 8);
  FiniteGroup triv_top = generated(S2, {}, "trivial");
  CHECK(enumerate(wreath(S2, 2, triv_top)).size() == 4);
  CHECK(*wreath(symmetric(3), 2, S2).order() == 72);

  FiniteGroup W3 = iterated_wreath(2, 3);
  CHECK(*W3.order() == 128);
  CHECK(W3.enumerate().size() == 128);
  CHECK(oracle::closure(8, perm_gens(W3)).size() == 128);

  for (const FiniteGroup& G : {symmetric(3), symmetric(4), shift(5), iterated_wreath(2, 2), wreath(symmetric(3), 2, S2)}) {
    auto want = oracle::closure(G.degree(), perm_gens(G));
    std::set<std::vector<int>> got;
    for (const auto& g : G.enumerate()) got.insert(G.as_perm(g).images);
    CHECK(got == want);
    CHECK(got.size() == *G.order());
  }
}

TEST_CASE("enumeration cap") {
  CHECK(kind_of([] { symmetric(12).enumerate(); }) == ErrorKind::CapExceeded);
  CHECK(kind_of([] { symmetric(4).with_cap(10).enumerate(); }) == ErrorKind::CapExceeded);
  CHECK(kind_of([] { abelian({0, 0}).enumerate(); }) == ErrorKind::CapExceeded);
  CHECK(!abelian({0}).order().has_value());
}

TEST_CASE("closure under compose and inverse") {
  for (const FiniteGroup& G : {symmetric(3), iterated_wreath(2, 2), product({shift(3), cyclic(2)}),
                               wreath(cyclic(2), 2, symmetric(2))}) {
    auto el = G.enumerate();
    std::set<std::vector<long long>> keys;
    for (const auto& g : el) keys.insert(encode(g));
    for (const auto& a : el) {
      CHECK(keys.count(encode(G.inverse(a))));
      CHECK(G.compose(a, G.inverse(a)) == G.identity());
      for (const auto& b : el) CHECK(keys.count(encode(G.compose(a, b))));
    }
  }
}

TEST_CASE("wreath action is block preserving then block permuting") {
  FiniteGroup W = wreath(symmetric(3), 2, symmetric(2));
  for (const auto& g : W.enumerate()) {
    Perm p = W.as_perm(g);
    CHECK(perm_valid(p));
    // the block of i decides the block of p(i)
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        if (i / 3 == j / 3) CHECK(p.images[i] / 3 == p.images[j] / 3);
  }
  // as_perm is a homomorphism into S_6
  auto el = W.enumerate();
  for (std::size_t a = 0; a < el.size(); a += 5)
    for (std::size_t b = 0; b < el.size(); b += 7)
      CHECK(W.as_perm(W.compose(el[a], el[b])).images ==
            perm_compose(W.as_perm(el[a]), W.as_perm(el[b])).images);
}

TEST_CASE("words evaluate back to the element") {
  FiniteGroup G = iterated_wreath(2, 2);
  for (const auto& [g, w] : G.enumerate_with_words()) {
    CHECK(G.eval_word(w) == g);
    CHECK(G.eval_word(G.express(g)) == g);
  }
}

TEST_CASE("make_hom examples") {
  FiniteGroup sh = shift(3);
  Homomorphism ok = make_hom(sh, cyclic(3), {modvec({1})});
  CHECK(ok.validated());
  CHECK(ok.apply(sh.power(sh.generators()[0], 2)) == modvec({2}));
  CHECK(kind_of([&] { make_hom(sh, cyclic(2), {modvec({1})}); }) == ErrorKind::NotAHomomorphism);
  CHECK(kind_of([&] { make_hom(sh, cyclic(3), {}); }) == ErrorKind::InvalidArgument);

  Homomorphism alt = fat_tree_alt_table();
  CHECK(alt.validated());
  CHECK(oracle::is_hom(alt.source(), alt.target(), alt.images()));
}

TEST_CASE("make_hom agrees with the brute-force oracle") {
  struct Pair {
    FiniteGroup src, tgt;
  };
  std::vector<Pair> cases = {
      {shift(3), cyclic(3)},          {shift(3), cyclic(2)},   {shift(4), cyclic(2)},
      {symmetric(3), cyclic(2)},      {symmetric(3), cyclic(3)}, {symmetric(3), symmetric(3)},
      {cyclic(4), cyclic(6)},         {abelian({2, 2}), symmetric(3)},
      {iterated_wreath(2, 2), cyclic(2)}, {product({symmetric(2), symmetric(2)}), iterated_wreath(2, 2)},
      {wreath(symmetric(2), 2, symmetric(2)), cyclic(4)},
  };
  int accepted = 0, total = 0;
  for (const auto& c : cases)
    oracle::for_each_image_tuple(c.src, c.tgt, [&](const std::vector<GroupElement>& imgs) {
      bool want = oracle::is_hom(c.src, c.tgt, imgs);
      bool got = !hom_failure(c.src, c.tgt, imgs).has_value();
      CHECK(want == got);
      bool made = true;
      try {
        make_hom(c.src, c.tgt, imgs);
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotAHomomorphism);
        made = false;
      }
      CHECK(made == want);
      accepted += want;
      ++total;
    });
  CHECK(total > 100);
  CHECK(accepted > 20);
}

TEST_CASE("relation-based validation above the cap matches exhaustive") {
  // same candidates validated both ways: a tiny cap forces the presentation path
  std::vector<std::pair<FiniteGroup, FiniteGroup>> cases = {
      {shift(5), cyclic(5)}, {abelian({2, 3}), cyclic(6)},
      {product({shift(3), symmetric(2)}), cyclic(6)},
      {iterated_wreath(2, 2), cyclic(2)}, {wreath(cyclic(2), 3, shift(3)), cyclic(2)}};
  for (const auto& [src, tgt] : cases) {
    FiniteGroup capped = src.with_cap(2);
    oracle::for_each_image_tuple(src, tgt, [&](const std::vector<GroupElement>& imgs) {
      bool want = oracle::is_hom(src, tgt, imgs);
      CHECK(!hom_failure(capped, tgt, imgs).has_value() == want);
    });
  }
}

TEST_CASE("apply_hom") {
  Homomorphism alt = fat_tree_alt_table();
  const FiniteGroup& G = alt.source();
  CHECK(apply_hom(alt, G.identity()) == alt.target().identity());
  // σ_j flips all four leaves and the time bit
  GroupElement sj = G.generators()[1];
  auto img = apply_hom(alt, sj);
  CHECK(alt.target().factors()[0].as_perm(img.product().parts[0]).images == std::vector<int>{3, 2, 1, 0});
  CHECK(img.product().parts[1] == modvec({1}));

  auto el = G.enumerate();
  for (const auto& a : el)
    for (const auto& b : el)
      CHECK(apply_hom(alt, G.compose(a, b)) == alt.target().compose(apply_hom(alt, a), apply_hom(alt, b)));

  ScheduleBundle cb = cannon(3);
  const Homomorphism& rho = cb.find_hom("rho")->hom;
  GroupElement s1 = rho.source().generators()[0];
  CHECK(rho.apply(s1) == tuple({modvec({1, 0}), modvec({2})}));

  CHECK_THROWS_AS(apply_hom(alt, Perm{{1, 0}}), Error);
}

TEST_CASE("compose_hom and identity_hom") {
  FiniteGroup S3 = symmetric(3);
  Homomorphism id = identity_hom(S3);
  Homomorphism sign = make_hom(S3, cyclic(2), {modvec({1}), modvec({0})});
  Homomorphism c = compose_hom(sign, id);
  for (const auto& g : S3.enumerate()) CHECK(c.apply(g) == sign.apply(g));
}

TEST_CASE("wreath with an intransitive top") {
  FiniteGroup W = wreath(symmetric(2), 3, generated(symmetric(3), {Perm{{1, 0, 2}}}, "<(0 1)>"));
  CHECK(*W.order() == 16);
  CHECK(W.enumerate().size() == 16);
  for (const auto& g : W.enumerate()) CHECK(W.eval_word(W.express(g)) == g);
}
