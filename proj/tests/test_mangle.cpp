#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "medf/mangle.hpp"

using namespace medf;

namespace {

BigInt ex(const Nat& n) {
  auto v = nat_exact(n);
  REQUIRE(v.has_value());
  return *v;
}

Truth eval_condition(const FamilyStage& stage, const FunSpecPtr& member,
                     const BigInt& n, const BigInt& prefix_len) {
  REQUIRE(stage.membership->kind == Formula::Kind::Forall);
  FormulaPtr cond = subst_var(stage.membership->body, stage.membership->var, t_const(n));
  FunOracle oracle(member, prefix_len);
  EvalLimits lim;
  lim.qbound = 4;
  lim.bounded_cap = 64;
  return eval_bounded(cond, oracle, lim).value;
}

}  // namespace

TEST_CASE("chain classifications descend one level per stage") {
  const auto& chain = family_chain();
  REQUIRE(chain.size() == 4);
  CHECK(classification_to_string(chain[0].classification) == "Pi4");
  CHECK(classification_to_string(chain[1].classification) == "Pi3");
  CHECK(classification_to_string(chain[2].classification) == "Pi2");
  CHECK(classification_to_string(chain[3].classification) == "Pi1");
  CHECK(classification_to_string(chain[0].fe.psi_class) == "Pi2");
  CHECK(classification_to_string(chain[1].fe.psi_class) == "Pi1");
  CHECK(chain[2].fe.psi_class.level == 0);
  CHECK(chain[3].fe.psi_class.level == 0);
}

TEST_CASE("mangling rejects level-one stages") {
  const auto& chain = family_chain();
  CHECK_THROWS(mangle_stage(chain[3]));
}

TEST_CASE("engine slot layout is the expected one") {
  const auto& chain = family_chain();
  auto tags = [](const std::vector<PackSlot>& slots) {
    std::vector<std::string> out;
    for (const auto& s : slots) out.push_back(s.tag);
    return out;
  };
  CHECK(tags(chain[0].fe.n_slots) ==
        std::vector<std::string>{"I.n", "II.n", "T.n", "B.n", "C.n", "C.w"});
  CHECK(tags(chain[0].fe.m_slots) == std::vector<std::string>{"T.m", "B.w", "NT.n"});
  CHECK(tags(chain[1].fe.n_slots) ==
        std::vector<std::string>{"g1.n", "T.mp", "NT.m", "E.n"});
  CHECK(tags(chain[1].fe.m_slots) == std::vector<std::string>{"NT.mp", "W"});
  CHECK(tags(chain[2].fe.n_slots) == std::vector<std::string>{"g2.n", "NT.mp"});
  CHECK(tags(chain[2].fe.m_slots) == std::vector<std::string>{"W"});
}

TEST_CASE("interleaved members satisfy the evens law") {
  const auto& chain = family_chain();
  std::vector<FunSpecPtr> roots = {
      make_eventually_constant({}, 0),
      make_periodic({3}, {1, 0}),
      make_coherent_image(make_eventually_constant({}, 1)),
  };
  for (const auto& root : roots) {
    for (int k = 0; k < 3; ++k) {
      FunSpecPtr lower = member_node(k, root);
      FunSpecPtr upper = star_member(lower, chain[k]);
      for (BigInt n = 0; n <= 200; ++n) {
        CHECK(nat_eq(eval(upper, 2 * n), eval(lower, n)));
      }
    }
  }
}

TEST_CASE("odd coordinates code the interleaved prefixes") {
  const auto& chain = family_chain();
  auto root = make_periodic({}, {0, 2});
  for (int k = 0; k < 3; ++k) {
    FunSpecPtr lower = member_node(k, root);
    FunSpecPtr upper = star_member(lower, chain[k]);
    for (BigInt n = 0; n <= 20; ++n) {
      Nat odd = eval(upper, 2 * n + 1);
      CHECK(s2_member_nat(odd));
      CHECK(nat_eq(code_length(odd), Nat(2 * n + 2)));
      auto [fh, gh] = split_even_nat(odd);
      REQUIRE(BigInt(fh.size()) == n + 1);
      for (BigInt i = 0; i <= n; ++i) {
        CHECK(nat_eq(fh[static_cast<size_t>(i)], eval(lower, i)));
        CHECK(nat_eq(gh[static_cast<size_t>(i)],
                     least_witness(chain[k], lower, i)));
      }
    }
  }
}

TEST_CASE("witness values are deterministic") {
  const auto& chain = family_chain();
  auto root = make_eventually_constant({1}, 0);
  auto m0 = member_node(0, root);
  for (BigInt n = 0; n < 64; ++n) {
    Nat a = least_witness(chain[0], m0, n);
    Nat b = least_witness(chain[0], m0, n);
    CHECK(nat_eq(a, b));
  }
}

TEST_CASE("witnesses verify and smaller candidates fail (level-zero stage)") {
  const auto& chain = family_chain();
  const auto& st2 = chain[2];
  auto root = make_eventually_constant({}, 0);
  auto m2 = member_node(2, root);
  FunOracle oracle(m2, 64);
  EvalLimits lim;
  lim.qbound = 4;
  lim.bounded_cap = 64;
  for (BigInt n = 0; n < 10; ++n) {
    Nat w = least_witness(st2, m2, n);
    auto wx = nat_exact(w);
    REQUIRE(wx.has_value());
    FormulaPtr good = subst_var(subst_var(st2.fe.psi, st2.fe.n_var, t_const(n)),
                                st2.fe.m_var, t_const(*wx));
    CHECK(eval_bounded(good, oracle, lim).value == Truth::True);
    BigInt upto = *wx < 4 ? *wx : BigInt(4);
    for (BigInt m = 0; m < upto; ++m) {
      FormulaPtr bad = subst_var(subst_var(st2.fe.psi, st2.fe.n_var, t_const(n)),
                                 st2.fe.m_var, t_const(m));
      CHECK(eval_bounded(bad, oracle, lim).value != Truth::True);
    }
  }
}

TEST_CASE("witness verdicts never contradict the evaluator at higher stages") {
  const auto& chain = family_chain();
  auto root = make_periodic({}, {0, 1});
  for (int k : {0, 1}) {
    auto mk = member_node(k, root);
    FunOracle oracle(mk, 96);
    EvalLimits lim;
    lim.qbound = 3;
    lim.bounded_cap = 48;
    for (BigInt n = 0; n < 8; ++n) {
      Nat w = least_witness(chain[k], mk, n);
      auto wx = nat_exact(w);
      REQUIRE(wx.has_value());
      FormulaPtr good = subst_var(
          subst_var(chain[k].fe.psi, chain[k].fe.n_var, t_const(n)),
          chain[k].fe.m_var, t_const(*wx));
      CHECK(eval_bounded(good, oracle, lim).value != Truth::False);
      for (BigInt m = 0; m < (*wx < 3 ? *wx : BigInt(3)); ++m) {
        FormulaPtr bad = subst_var(
            subst_var(chain[k].fe.psi, chain[k].fe.n_var, t_const(n)),
            chain[k].fe.m_var, t_const(m));
        CHECK(eval_bounded(bad, oracle, lim).value != Truth::True);
      }
    }
  }
}

TEST_CASE("carried-bound instances exercise the refutation collections") {
  const auto& chain = family_chain();
  auto root = make_eventually_constant({}, 0);
  auto m0 = member_node(0, root);
  auto m1 = member_node(1, root);
  // instance whose outer component has a positive stage-0 witness
  Nat packed = pack_values({Nat(BigInt(21)), Nat(BigInt(0)), Nat(BigInt(0)), Nat(BigInt(0))});
  BigInt nval = ex(packed);
  CHECK(!nat_is_zero(least_witness(chain[0], m0, 21)));
  Nat w1 = least_witness(chain[1], m1, nval);
  // the witness packs a value and a pinned-length collection
  Nat collection = nat_snd(w1);
  Nat t1 = least_witness(chain[0], m0, 21);
  CHECK(nat_eq(code_length(collection), t1));
}

TEST_CASE("membership conditions never refute member prefixes") {
  const auto& chain = family_chain();
  std::vector<FunSpecPtr> roots = {make_eventually_constant({}, 0),
                                   make_periodic({1}, {2, 0})};
  for (const auto& root : roots) {
    for (int k = 1; k <= 3; ++k) {
      auto mk = member_node(k, root);
      for (BigInt n = 0; n < 12; ++n) {
        CHECK(eval_condition(chain[k], mk, n, 200) != Truth::False);
      }
    }
  }
}

TEST_CASE("corrupting an odd coordinate refutes some condition") {
  const auto& chain = family_chain();
  auto root = make_eventually_constant({}, 0);
  auto m1 = member_node(1, root);
  // corrupted copy: odd coordinate 5 carries a wrong small code
  LazySeq pfx = fun_prefix(m1, 64);
  pfx[5] = Nat(BigInt(4));
  VectorOracle oracle(pfx);
  EvalLimits lim;
  lim.qbound = 4;
  lim.bounded_cap = 64;
  bool refuted = false;
  for (BigInt n = 0; n < 8 && !refuted; ++n) {
    FormulaPtr cond =
        subst_var(chain[1].membership->body, chain[1].membership->var, t_const(n));
    refuted = eval_bounded(cond, oracle, lim).value == Truth::False;
  }
  CHECK(refuted);
}

TEST_CASE("members of distinct roots are eventually different at every stage") {
  const auto& chain = family_chain();
  auto f = make_eventually_constant({}, 0);
  auto g = make_eventually_constant({}, 1);
  (void)chain;
  for (int k = 0; k <= 3; ++k) {
    auto mf = member_node(k, f);
    auto mg = member_node(k, g);
    auto r = agreements(mf, mg, 400);
    // base-stage agreements stay below the certificate bound; lifted stages
    // agree only where the lower stage does, on doubled coordinates
    BigInt bound = member_agreement_bound(f, g);
    for (int j = 0; j < k; ++j) bound *= 2;
    for (const BigInt& p : r.points) CHECK(p <= bound);
  }
}

TEST_CASE("spanning on even coordinates at every mangled stage") {
  auto f = make_periodic({}, {0, 1});
  for (int k = 1; k <= 3; ++k) {
    auto r = spanning_check(k, f, 16);
    CHECK(!r.points.empty());
    for (const BigInt& p : r.points) CHECK(p % 2 == 0);
  }
}

TEST_CASE("base spanning finds infinitely-equal members") {
  auto f = make_eventually_constant({4, 4}, 7);
  auto r = spanning_check(0, f, 16);
  CHECK(r.points.size() >= 2);
}
