#include "medf/formula_library.hpp"

namespace medf {

namespace {

TermPtr two_t_plus(TermPtr t, int add) {
  TermPtr r = t_double(std::move(t));
  for (int i = 0; i < add; ++i) r = t_succ(std::move(r));
  return r;
}

}  // namespace

TermPtr lib_inner_value(TermPtr t) {
  // at(g(2t+2), t)
  return t_at(t_oracle(two_t_plus(t, 2)), t);
}

FormulaPtr lib_domain(TermPtr t, const std::string& hint) {
  std::string x = hint + ".x";
  std::string i = hint + ".i";
  FormulaPtr entries = f_bforall(
      i, t_len(t_var(x)),
      f_eq(t_at(t_var(x), t_var(i)), lib_inner_value(t_var(i))));
  FormulaPtr shape = f_eq(t, t_succ(t_double(t_var(x))));
  return f_bexists(x, t, f_and({shape, entries}));
}

FormulaPtr lib_order(TermPtr m, TermPtr m2) {
  return f_and({
      f_eq(t_len(lib_inner_value(m)), m),
      f_eq(t_len(lib_inner_value(m2)), m2),
      f_seq_pext(lib_inner_value(m), lib_inner_value(m2)),
  });
}

namespace {

// (domain(m2) and m2 >= m) -> not order(m, m2)
FormulaPtr lib_keep(TermPtr m, TermPtr m2, const std::string& hint) {
  return f_or({
      f_not(lib_domain(m2, hint)),
      f_lt(m2, m),
      f_not(lib_order(m, m2)),
  });
}

}  // namespace

FormulaPtr lib_eprefix_eq(TermPtr n, const std::string& hint) {
  std::string i = hint + ".i";
  return f_and({
      f_eq(t_len(t_oracle(n)), n),
      f_bforall(i, n, f_eq(t_at(t_oracle(n), t_var(i)), lib_inner_value(t_var(i)))),
  });
}

FormulaPtr lib_tangled(const std::string& tag) {
  std::string n = tag + ".n";
  std::string m = tag + ".m";
  std::string mp = tag + ".mp";
  FormulaPtr body = f_or({
      f_not(lib_domain(t_var(n), tag + "d1")),
      f_and({
          f_ge(t_var(m), t_var(n)),
          lib_domain(t_var(m), tag + "d2"),
          lib_keep(t_var(m), t_var(mp), tag + "d3"),
      }),
  });
  return f_forall(n, f_exists(m, f_forall(mp, body)));
}

FormulaPtr lib_cond_tangled_branch() {
  FormulaPtr tangled = lib_tangled("T");
  // kept points carry the inner function's own values
  FormulaPtr own = f_forall(
      "B.n",
      f_exists("B.w", f_or({
                          f_not(lib_domain(t_var("B.n"), "Bd1")),
                          f_not(lib_keep(t_var("B.n"), t_var("B.w"), "Bd2")),
                          f_eq(t_oracle(t_var("B.n")), lib_inner_value(t_var("B.n"))),
                      })));
  // points outside the kept set carry prefix codes
  FormulaPtr off = f_forall(
      "C.n", f_forall("C.w", f_or({
                                 f_and({
                                     lib_domain(t_var("C.n"), "Cd1"),
                                     lib_keep(t_var("C.n"), t_var("C.w"), "Cd2"),
                                 }),
                                 lib_eprefix_eq(t_var("C.n"), "Ce"),
                             })));
  return f_and({tangled, own, off});
}

FormulaPtr lib_cond_untangled_branch() {
  FormulaPtr untangled = f_not(lib_tangled("NT"));
  FormulaPtr pure = f_forall("E.n", lib_eprefix_eq(t_var("E.n"), "Ee"));
  return f_and({untangled, pure});
}

FormulaPtr lib_cond_evens() {
  FormulaPtr lengths =
      f_forall("I.n", f_eq(t_len(t_oracle(t_double(t_var("I.n")))), t_double(t_var("I.n"))));
  FormulaPtr nesting = f_forall(
      "II.n",
      f_bforall("II.m", t_succ(t_var("II.n")),
                f_seq_ext(t_oracle(t_double(t_var("II.m"))),
                          t_oracle(t_double(t_var("II.n"))))));
  return f_and({lengths, nesting});
}

FormulaPtr lib_membership() {
  return f_and({
      lib_cond_evens(),
      f_or({lib_cond_tangled_branch(), lib_cond_untangled_branch()}),
  });
}

}  // namespace medf
