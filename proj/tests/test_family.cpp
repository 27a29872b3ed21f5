#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "medf/family.hpp"

#include <set>

using namespace medf;

namespace {

FunSpecPtr const0() { return make_eventually_constant({}, 0); }
FunSpecPtr const_v(BigInt v) { return make_eventually_constant({}, std::move(v)); }

BigInt ex(const Nat& n) {
  auto v = nat_exact(n);
  REQUIRE(v.has_value());
  return *v;
}

}  // namespace

TEST_CASE("prefix code map") {
  auto f = const0();
  CHECK(ex(e_eval(f, 0)) == 0);
  CHECK(ex(e_eval(f, 1)) == 1);
  CHECK(ex(e_eval(f, 2)) == 2);
}

TEST_CASE("domain membership") {
  auto f = const0();
  CHECK(domain_member(f, 1));      // the empty sequence extends everything
  CHECK(!domain_member(f, 2));     // even numbers never belong
  CHECK(!domain_member(f, 4));
  CHECK(domain_member(f, 3));      // <0> below the zero function
  CHECK(!domain_member(f, 7));     // <1> is not
}

TEST_CASE("domain listing") {
  CHECK(domain_list(const0(), 9) == std::vector<BigInt>{1, 3, 5, 9});
  CHECK(domain_list(const0(), 0).empty());
}

TEST_CASE("domain intersections count common prefixes") {
  // first difference at d: exactly d+1 common prefixes
  auto f = make_eventually_constant({0, 0, 1}, 0);
  auto g = const0();
  auto d = first_difference(f, g, 100);
  REQUIRE(d.has_value());
  CHECK(*d == 2);
  auto la = domain_list(f, 100000);
  auto lb = domain_list(g, 100000);
  std::set<BigInt> sa(la.begin(), la.end());
  size_t common = 0;
  for (const auto& k : lb) common += sa.count(k);
  CHECK(common == 3);
}

TEST_CASE("edb hybrid values") {
  auto f = const0();
  auto empty = [](const BigInt&) { return false; };
  auto full = [](const BigInt&) { return true; };
  CHECK(ex(edb_eval(f, empty, 2)) == 2);   // prefix code of <0,0>
  CHECK(ex(edb_eval(f, full, 2)) == 0);    // the function's own value
  auto dom = [&](const BigInt& n) { return domain_member(f, n); };
  CHECK(ex(edb_eval(f, dom, 3)) == 0);
  CHECK(ex(edb_eval(f, dom, 2)) == 2);
}

TEST_CASE("prefix order on coherent images") {
  auto e0 = make_coherent_image(const0());
  CHECK(order_rel(e0, 1, 2));
  CHECK(order_rel(e0, 3, 5));
  CHECK(!order_rel(e0, 3, 3));
  CHECK(!order_rel(const0(), 3, 5));  // value decodes to the empty sequence
}

TEST_CASE("tangle certificates by class") {
  auto c = tangle_certificate(const0());
  CHECK(c.kind == TangleCertificate::Kind::Tangled);
  CHECK(c.value == 0);

  auto p = tangle_certificate(make_periodic({}, {0, 1}));
  CHECK(p.kind == TangleCertificate::Kind::Tangled);
  CHECK(p.value == 1);  // the sequence coded by 1 has length 1

  auto e = tangle_certificate(make_coherent_image(const0()));
  CHECK(e.kind == TangleCertificate::Kind::Untangled);
  CHECK(e.value == 1);

  auto m = tangle_certificate(make_member_image(0, const0()));
  CHECK(m.kind == TangleCertificate::Kind::Untangled);

  auto m2 = tangle_certificate(make_member_image(1, const0()));
  CHECK(m2.kind == TangleCertificate::Kind::Tangled);
  CHECK(m2.value == 0);
}

TEST_CASE("restricted tangledness verdicts") {
  CHECK(tangled_bounded(const0(), 50) == Verdict::True);
  CHECK(tangled_bounded(make_coherent_image(const0()), 50) == Verdict::False);
  CHECK(tangled_bounded(const0(), 0) == Verdict::Unknown);  // nothing examined
}

TEST_CASE("restricted tangledness brute-force cross-check") {
  // wherever a definite verdict is issued, the triple condition restricted
  // to the examined window must hold or fail accordingly
  std::vector<FunSpecPtr> specs = {
      const0(), const_v(3), make_periodic({}, {0, 1}),
      make_coherent_image(const0()), make_coherent_image(const_v(2))};
  for (const auto& f : specs) {
    BigInt bound = 80;
    Verdict v = tangled_bounded(f, bound);
    if (v == Verdict::Unknown) continue;
    auto dom = domain_list(f, bound);
    bool restricted = true;
    for (const BigInt& n : dom) {
      bool found = false;
      for (const BigInt& m : dom) {
        if (m < n) continue;
        bool all = true;
        for (const BigInt& m2 : dom) {
          if (m2 >= m && order_rel(f, m, m2)) {
            all = false;
            break;
          }
        }
        if (all) {
          found = true;
          break;
        }
      }
      if (!found) {
        restricted = false;
        break;
      }
    }
    if (v == Verdict::True) CHECK(restricted);
    if (v == Verdict::False) {
      // every examined point at or above the certificate start must extend
      TangleCertificate c = tangle_certificate(f);
      for (const BigInt& m : dom) {
        if (m < c.value) continue;
        auto s = ord_successor(f, c, m);
        CHECK(s.has_value());
        if (s) CHECK(order_rel(f, m, *s));
      }
    }
  }
}

TEST_CASE("kept set membership") {
  auto f = const0();
  auto cert = tangle_certificate(f);
  CHECK(h_member(f, cert, 3));
  CHECK(!h_member(f, cert, 2));
  CHECK(!h_member(f, cert, 7));  // not in the domain

  auto e0 = make_coherent_image(const0());
  auto ce = tangle_certificate(e0);
  CHECK(!h_member(e0, ce, 2));
  CHECK(h_member(e0, ce, 1));
}

TEST_CASE("no two kept points are order related") {
  std::vector<FunSpecPtr> specs = {const0(), const_v(1), make_periodic({}, {0, 1}),
                                   make_periodic({2}, {3})};
  for (const auto& f : specs) {
    auto cert = tangle_certificate(f);
    REQUIRE(cert.kind == TangleCertificate::Kind::Tangled);
    auto dom = domain_list(f, 500);
    std::vector<BigInt> kept;
    for (const BigInt& m : dom) {
      if (h_member(f, cert, m)) kept.push_back(m);
    }
    for (size_t i = 0; i < kept.size(); ++i) {
      for (size_t j = i + 1; j < kept.size(); ++j) {
        CHECK(!order_rel(f, kept[i], kept[j]));
      }
    }
  }
}

TEST_CASE("assigned member values") {
  auto f = const0();
  auto cert = tangle_certificate(f);
  CHECK(ex(hdot_eval(f, cert, 2)) == 2);  // off the kept set: prefix code
  CHECK(ex(hdot_eval(f, cert, 3)) == 0);  // kept: own value

  auto e0 = make_coherent_image(const0());
  auto ce = tangle_certificate(e0);
  for (BigInt n = 0; n < 10; ++n) {
    CHECK(nat_eq(hdot_eval(e0, ce, n), e_eval(e0, n)));
  }
}

TEST_CASE("even coordinates always carry prefix codes") {
  std::vector<FunSpecPtr> specs = {const0(), make_periodic({1}, {0, 2}),
                                   make_coherent_image(const0())};
  for (const auto& f : specs) {
    auto cert = tangle_certificate(f);
    for (BigInt n = 0; n < 30; n += 2) {
      CHECK(nat_eq(hdot_eval(f, cert, n), e_eval(f, n)));
    }
  }
}

TEST_CASE("pair coloring") {
  auto e0 = make_coherent_image(const0());
  CHECK(hs_color(e0, 1, 2) == 0);
  CHECK(hs_color(const0(), 3, 5) == 1);
  CHECK_THROWS(hs_color(const0(), 5, 3));
  // transitivity of color 0
  CHECK(hs_color(e0, 1, 2) == 0);
  CHECK(hs_color(e0, 2, 3) == 0);
  CHECK(hs_color(e0, 1, 3) == 0);
}

TEST_CASE("homogeneous search") {
  auto e0 = make_coherent_image(const0());
  auto r0 = homogeneous_search(e0, 3, 50);
  REQUIRE(r0.has_value());
  CHECK(r0->first == 0);
  CHECK(r0->second.size() == 3);

  auto r1 = homogeneous_search(const0(), 3, 50);
  REQUIRE(r1.has_value());
  CHECK(r1->first == 1);
  CHECK(r1->second == std::vector<BigInt>{1, 3, 5});

  auto r2 = homogeneous_search(const0(), 1, 10);
  REQUIRE(r2.has_value());
  CHECK(r2->second.size() == 1);
}

TEST_CASE("coherent reconstruction follows the chain") {
  auto e0 = make_coherent_image(const0());
  auto cert = tangle_certificate(e0);
  auto rc = reconstruct_coherent(e0, cert, 4);
  REQUIRE(rc.chain.size() == 4);
  CHECK(ex(rc.chain[0]) == 1);
  CHECK(ex(rc.chain[1]) == 3);
  CHECK(ex(rc.chain[2]) == 11);
  // successive chain points are order related
  for (size_t i = 0; i + 1 < rc.chain.size(); ++i) {
    CHECK(order_rel(e0, ex(rc.chain[i]), ex(rc.chain[i + 1])));
  }
  // the reconstructed limit is the inner function
  CHECK(specs_equal_structurally(rc.limit, const0()));
  // decoded chain values are prefixes of the limit
  for (const Nat& m : rc.chain) {
    Nat v = eval(e0, ex(m));
    auto len = nat_exact(code_length(v), 30);
    REQUIRE(len.has_value());
    for (BigInt i = 0; i < *len; ++i) {
      CHECK(nat_eq(code_at(v, i), eval(rc.limit, i)));
    }
  }
  CHECK(reconstruct_coherent(e0, cert, 0).chain.empty());
}

TEST_CASE("maximality witness for a tangled target") {
  auto mw = maximality_witness({}, const0(), 32);
  CHECK(mw.member->kind == FunSpecNode::Kind::MemberImage);
  REQUIRE(mw.report.points.size() >= 4);
  CHECK(mw.report.points[0] == 1);
  CHECK(mw.report.points[1] == 3);
  CHECK(mw.report.points[2] == 5);
  CHECK(mw.report.points[3] == 9);
  for (const BigInt& p : mw.report.points) {
    CHECK(nat_eq(eval(mw.member, p), eval(const0(), p)));
  }
}

TEST_CASE("maximality witness for an untangled target") {
  auto target = make_coherent_image(make_periodic({}, {1, 0}));
  auto mw = maximality_witness({}, target, 16);
  CHECK(mw.report.points.size() >= 2);
  for (const BigInt& p : mw.report.points) {
    CHECK(nat_eq(eval(mw.member, p), eval(target, p)));
  }
}

TEST_CASE("overlay of a prefix over a tail spec") {
  auto t = overlay_prefix({7, 7}, make_eventually_constant({1, 2, 3}, 9));
  CHECK(ex(eval(t, 0)) == 7);
  CHECK(ex(eval(t, 1)) == 7);
  CHECK(ex(eval(t, 2)) == 3);
  CHECK(ex(eval(t, 3)) == 9);

  auto p = overlay_prefix({5}, make_periodic({}, {1, 2, 3}));
  CHECK(ex(eval(p, 0)) == 5);
  CHECK(ex(eval(p, 1)) == 2);
  CHECK(ex(eval(p, 2)) == 3);
  CHECK(ex(eval(p, 3)) == 1);
  CHECK(ex(eval(p, 4)) == 2);
}

TEST_CASE("agreement bound covers all member agreements") {
  auto f = const0();
  auto g = const_v(1);
  BigInt b = member_agreement_bound(f, g);
  auto mf = make_member_image(0, f);
  auto mg = make_member_image(0, g);
  auto r = agreements(mf, mg, 400);
  for (const BigInt& p : r.points) CHECK(p <= b);
}
