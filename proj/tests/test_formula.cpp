#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "medf/formula.hpp"
#include "medf/formula_library.hpp"

using namespace medf;

namespace {

Verdict3 run(const FormulaPtr& f, LazySeq oracle, BigInt qbound = 24) {
  VectorOracle o(std::move(oracle));
  EvalLimits lim;
  lim.qbound = qbound;
  lim.bounded_cap = 128;
  return eval_bounded(f, o, lim);
}

LazySeq nats(std::vector<unsigned long long> v) {
  LazySeq out;
  for (auto x : v) out.push_back(Nat(BigInt(x)));
  return out;
}

std::string cls(const FormulaPtr& f) { return classification_to_string(classify(f)); }

}  // namespace

TEST_CASE("atom evaluation with use tracking") {
  // h(3) = 5 against a prefix that ends right at point 3
  auto f = f_eq(t_oracle(t_const(3)), t_const(5));
  auto v = run(f, nats({0, 0, 0, 5}));
  CHECK(v.value == Truth::True);
  CHECK(v.use == 3);

  auto w = run(f, nats({0, 0}));
  CHECK(w.value == Truth::Unknown);
  REQUIRE(w.missing_point.has_value());
  CHECK(*w.missing_point == 3);
}

TEST_CASE("universals refute but never confirm at a finite stage") {
  auto f = f_forall("n", f_eq(t_oracle(t_var("n")), t_const(0)));
  CHECK(run(f, nats({0, 0, 0, 0})).value == Truth::Unknown);
  auto v = run(f, nats({0, 1}));
  CHECK(v.value == Truth::False);
  CHECK(v.use == 1);
}

TEST_CASE("existentials confirm but never refute at a finite stage") {
  auto f = f_exists("n", f_eq(t_oracle(t_var("n")), t_const(7)));
  CHECK(run(f, nats({0, 7})).value == Truth::True);
  CHECK(run(f, nats({0, 1, 2})).value == Truth::Unknown);
}

TEST_CASE("bounded quantifiers decide both ways") {
  auto all = f_bforall("i", t_const(3), f_lt(t_oracle(t_var("i")), t_const(9)));
  CHECK(run(all, nats({1, 2, 3})).value == Truth::True);
  CHECK(run(all, nats({1, 12, 3})).value == Truth::False);
  auto ex = f_bexists("i", t_const(3), f_eq(t_oracle(t_var("i")), t_const(2)));
  CHECK(run(ex, nats({1, 2, 3})).value == Truth::True);
  CHECK(run(ex, nats({1, 5, 3})).value == Truth::False);
}

TEST_CASE("sequence atoms") {
  // codes: <0> = 1, <0,0> = 2, <1> = 3
  auto ext = f_seq_ext(t_const(1), t_const(2));
  CHECK(run(ext, {}).value == Truth::True);
  auto pext = f_seq_pext(t_const(1), t_const(1));
  CHECK(run(pext, {}).value == Truth::False);
  CHECK(run(f_seq_pext(t_const(1), t_const(2)), {}).value == Truth::True);
  CHECK(run(f_seq_ext(t_const(3), t_const(2)), {}).value == Truth::False);
  CHECK(run(f_in_s2(t_const(2)), {}).value == Truth::True);
  CHECK(run(f_in_s2(t_const(1)), {}).value == Truth::False);
}

TEST_CASE("classification of basic shapes") {
  auto atom = f_eq(t_const(1), t_const(1));
  CHECK(cls(atom) == "Delta0");
  CHECK(cls(f_forall("a", atom)) == "Pi1");
  CHECK(cls(f_exists("a", atom)) == "Sigma1");
  CHECK(cls(f_forall("a", f_exists("b", atom))) == "Pi2");
  CHECK(cls(f_bforall("a", t_const(5), atom)) == "Delta0");
}

TEST_CASE("classification is invariant under double negation and renaming") {
  auto f = f_forall("a", f_exists("b", f_lt(t_var("a"), t_var("b"))));
  CHECK(cls(f_not(f_not(f))) == cls(f));
  auto g = f_forall("x", f_exists("y", f_lt(t_var("x"), t_var("y"))));
  CHECK(cls(g) == cls(f));
}

TEST_CASE("dummy quantifiers do not raise the level") {
  auto f = f_forall("a", f_exists("b", f_lt(t_var("a"), t_var("b"))));
  auto padded = f_forall("p", f_forall("a", f_exists("b", f_exists("q", f_lt(t_var("a"), t_var("b"))))));
  CHECK(cls(padded) == cls(f));
}

TEST_CASE("library formula classifications") {
  CHECK(cls(lib_tangled("T")) == "Pi3");
  CHECK(cls(lib_cond_tangled_branch()) == "Pi3");
  CHECK(cls(lib_cond_untangled_branch()) == "Sigma3");
  auto disj = f_or({lib_cond_tangled_branch(), lib_cond_untangled_branch()});
  CHECK(cls(disj) == "Pi4");
  CHECK(cls(lib_membership()) == "Pi4");
}

TEST_CASE("prenex preserves bounded verdicts") {
  std::vector<FormulaPtr> formulas = {
      f_forall("a", f_or({f_eq(t_oracle(t_var("a")), t_const(0)),
                          f_exists("b", f_eq(t_oracle(t_var("b")), t_var("a")))})),
      f_and({f_forall("a", f_lt(t_oracle(t_var("a")), t_const(50))),
             f_exists("b", f_eq(t_oracle(t_var("b")), t_const(3)))}),
      f_bforall("i", t_const(4),
                f_exists("b", f_eq(t_oracle(t_var("b")), t_var("i")))),
      f_not(lib_tangled("T")),
  };
  std::vector<LazySeq> oracles = {
      nats({0, 1, 2, 3, 4, 5, 6, 7}),
      nats({3, 3, 3, 3, 0, 1, 0, 1}),
      nats({0, 2, 4, 6, 1, 3, 5, 7}),
  };
  for (const auto& f : formulas) {
    FormulaPtr p = prenex(f);
    for (const auto& o : oracles) {
      Truth a = run(f, o).value;
      Truth b = run(p, o).value;
      // definite verdicts may never contradict
      bool contradiction = (a == Truth::True && b == Truth::False) ||
                           (a == Truth::False && b == Truth::True);
      CHECK(!contradiction);
    }
  }
}

TEST_CASE("prenex of a prenex formula keeps its shape") {
  auto f = f_forall("a", f_exists("b", f_lt(t_var("a"), t_var("b"))));
  CHECK(cls(prenex(f)) == "Pi2");
  CHECK(cls(prenex(prenex(f))) == "Pi2");
}

TEST_CASE("quantifier duality through negation") {
  auto f = f_not(f_forall("n", f_eq(t_oracle(t_var("n")), t_const(0))));
  CHECK(cls(f) == "Sigma1");
  // refuting prefix confirms the negation
  CHECK(run(f, nats({0, 1})).value == Truth::True);
}

TEST_CASE("forall-exists form of simple shapes") {
  // already in shape
  auto f = f_forall("n", f_exists("m", f_eq(t_var("n"), t_var("m"))));
  auto fe = to_forall_exists(f);
  CHECK(fe.n_slots.size() == 1);
  CHECK(fe.m_slots.size() == 1);
  CHECK(fe.psi_class.level == 0);

  // padding: purely universal formula gets a dummy witness block
  auto g = f_forall("n", f_eq(t_oracle(t_var("n")), t_var("n")));
  auto ge = to_forall_exists(g);
  CHECK(ge.m_slots.size() == 1);
  CHECK(ge.m_slots[0].tag == "pad");
}

TEST_CASE("forall-exists equivalence on sampled oracles") {
  auto f = lib_membership();
  auto fe = to_forall_exists(f);
  CHECK(classification_to_string(fe.psi_class) == "Pi2");
  // instantiating over a small grid may not decide anything, but definite
  // verdicts of phi and of its normal form must agree across 20 sampled
  // oracle/bound pairs
  FormulaPtr nf = f_forall(fe.n_var, f_exists(fe.m_var, fe.psi));
  uint64_t state = 0x9e3779b97f4a7c15ULL;
  auto next = [&state]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  };
  for (int t = 0; t < 20; ++t) {
    LazySeq o;
    size_t len = 4 + static_cast<size_t>(next() % 8);
    for (size_t i = 0; i < len; ++i) o.push_back(Nat(BigInt(next() % 6)));
    BigInt qb = BigInt(2 + t % 5);
    Truth direct = run(f, o, qb).value;
    Truth viafe = run(nf, o, qb).value;
    bool contradiction = (direct == Truth::True && viafe == Truth::False) ||
                         (direct == Truth::False && viafe == Truth::True);
    CHECK(!contradiction);
  }
}

TEST_CASE("oracle substitutions") {
  auto atom = f_eq(t_oracle(t_const(3)), t_const(5));
  auto dbl = subst_oracle_double(atom);
  CHECK(run(dbl, nats({0, 0, 0, 0, 0, 0, 5})).value == Truth::True);
  CHECK(cls(dbl) == cls(atom));

  auto even = subst_oracle_even_code(atom);
  // f(3) read through the code at position 8: value = entry 3 of that code
  LazySeq o = nats({0, 0, 0, 0, 0, 0, 0, 0, 0});
  o[8] = Nat(encode_seq({9, 9, 9, 5}));
  CHECK(run(even, o).value == Truth::True);
}

TEST_CASE("stability: definite verdicts survive larger bounds and longer prefixes") {
  auto f = f_forall("n", f_lt(t_oracle(t_var("n")), t_const(3)));
  LazySeq shrt = nats({0, 5});
  LazySeq lng = nats({0, 5, 1, 2, 0, 1});
  auto v1 = run(f, shrt, 4);
  auto v2 = run(f, lng, 16);
  CHECK(v1.value == Truth::False);
  CHECK(v2.value == Truth::False);
}

TEST_CASE("sexpr round trip") {
  auto f = f_forall(
      "n", f_bforall("i", t_succ(t_var("n")),
                     f_or({f_eq(t_at(t_oracle(t_var("n")), t_var("i")), t_const(0)),
                           f_not(f_in_s2(t_var("i")))})));
  std::string s = to_sexpr(f);
  auto g = parse_formula(s);
  CHECK(to_sexpr(g) == s);
  // evaluation agrees
  LazySeq o = nats({2, 2, 2, 2});
  CHECK(run(f, o).value == run(g, o).value);
}
