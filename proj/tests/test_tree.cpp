#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "medf/tree.hpp"

using namespace medf;

namespace {

const TreePredicate& pred() {
  static TreePredicate p = tree_from_stage(family_chain()[3]);
  return p;
}

}  // namespace

TEST_CASE("the empty string is accepted") {
  CHECK(pred().accepts({}));
}

TEST_CASE("member prefixes are accepted") {
  auto root = make_periodic({}, {0, 1});
  auto m3 = member_node(3, root);
  TreeWalker walker(pred());
  for (BigInt i = 0; i < 120; ++i) {
    walker.push(eval(m3, i));
    CHECK(!walker.rejected());
  }
  // the one-shot decision agrees
  CHECK(pred().accepts(fun_prefix(m3, 40)));
}

TEST_CASE("walker and one-shot decisions agree") {
  auto root = make_eventually_constant({2}, 0);
  auto m3 = member_node(3, root);
  LazySeq pfx = fun_prefix(m3, 24);
  pfx[4] = Nat(BigInt(3));  // corrupt an even coordinate
  TreeWalker walker(pred());
  std::optional<BigInt> walk_depth;
  for (size_t i = 0; i < pfx.size(); ++i) {
    walker.push(pfx[i]);
    if (walker.rejected()) {
      walk_depth = BigInt(i + 1);
      break;
    }
  }
  REQUIRE(walk_depth.has_value());
  // the one-shot decision rejects from that length on
  for (BigInt l = 1; l <= BigInt(pfx.size()); ++l) {
    LazySeq cut(pfx.begin(), pfx.begin() + static_cast<size_t>(l));
    CHECK(pred().accepts(cut) == (l < *walk_depth));
  }
}

TEST_CASE("members are never rejected within the tested horizon") {
  auto root = make_eventually_constant({}, 0);
  auto m3 = member_node(3, root);
  CHECK(!rejection_depth(pred(), m3, 200).has_value());
}

TEST_CASE("single-coordinate corruptions are rejected quickly") {
  auto root = make_eventually_constant({}, 0);
  auto m3 = member_node(3, root);
  LazySeq base = fun_prefix(m3, 60);
  for (BigInt c : {BigInt(0), BigInt(1), BigInt(2), BigInt(5), BigInt(8), BigInt(13)}) {
    LazySeq bad = base;
    Nat original = bad[static_cast<size_t>(c)];
    Nat corrupted = Nat(BigInt(4));
    if (nat_eq(original, corrupted)) corrupted = Nat(BigInt(5));
    bad[static_cast<size_t>(c)] = corrupted;
    // locate the first rejected length
    std::optional<BigInt> depth;
    for (BigInt l = c + 1; l <= BigInt(bad.size()); ++l) {
      LazySeq cut(bad.begin(), bad.begin() + static_cast<size_t>(l));
      if (!pred().accepts(cut)) {
        depth = l;
        break;
      }
    }
    REQUIRE(depth.has_value());
    CHECK(*depth <= 2 * pred().coordinate_use_bound(c));
  }
}

TEST_CASE("rejection is monotone under extension") {
  auto root = make_periodic({1}, {0, 2});
  auto m3 = member_node(3, root);
  LazySeq bad = fun_prefix(m3, 20);
  bad[2] = Nat(BigInt(9));
  // find the rejection point, then check every extension stays rejected
  std::optional<size_t> depth;
  for (size_t l = 1; l <= bad.size(); ++l) {
    LazySeq cut(bad.begin(), bad.begin() + l);
    if (!pred().accepts(cut)) {
      depth = l;
      break;
    }
  }
  REQUIRE(depth.has_value());
  for (size_t extra = 0; extra < 6; ++extra) {
    LazySeq ext(bad.begin(), bad.begin() + *depth);
    for (size_t i = 0; i < extra; ++i) ext.push_back(Nat(BigInt(i)));
    CHECK(!pred().accepts(ext));
  }
}

TEST_CASE("explore returns accepted extensions only") {
  // below a member prefix the member's own continuation is found
  auto root = make_eventually_constant({}, 0);
  auto m3 = member_node(3, root);
  LazySeq sigma = fun_prefix(m3, 2);
  BigInt cap = 8;
  auto found = explore(pred(), sigma, 1, cap);
  CHECK(!found.empty());
  for (const auto& ext : found) {
    CHECK(ext.size() >= sigma.size());
    CHECK(pred().accepts(ext));
  }
  // the member's own next value is within the cap here, so its extension
  // must be among the accepted ones
  Nat next = eval(m3, 2);
  bool member_found = false;
  for (const auto& ext : found) {
    if (ext.size() == 3 && nat_eq(ext[2], next)) member_found = true;
  }
  CHECK(member_found);
}

TEST_CASE("explore depth zero accepts or rejects the point itself") {
  auto root = make_eventually_constant({}, 0);
  auto m3 = member_node(3, root);
  LazySeq sigma = fun_prefix(m3, 4);
  auto found = explore(pred(), sigma, 0, 4);
  CHECK(found.size() == 1);
  LazySeq bad = sigma;
  bad[0] = Nat(BigInt(9));
  CHECK(explore(pred(), bad, 0, 4).empty());
}

TEST_CASE("use profile schedules conditions by direct reads") {
  CHECK(pred().use_profile(0) == 2);
  CHECK(pred().use_profile(3) == 8);
  CHECK(pred().coordinate_use_bound(4) == 6);
  CHECK(pred().coordinate_use_bound(5) == 8);
}
