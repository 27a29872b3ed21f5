#pragma once

// The concrete membership formulas of the base family, written over a single
// candidate oracle g.  Values of the recovered inner function are read
// through even-position prefix codes: F(t) = at(g(2t+2), t).

#include "medf/formula.hpp"

namespace medf {

// F(t): the inner function's value at t, read through the oracle.
TermPtr lib_inner_value(TermPtr t);

// t is a domain point of the inner function: t = 2x+1 with the x-th sequence
// an initial segment.
FormulaPtr lib_domain(TermPtr t, const std::string& hint);

// The prefix order between positions m and m2.
FormulaPtr lib_order(TermPtr m, TermPtr m2);

// g(n) equals the code of the inner function's length-n prefix.
FormulaPtr lib_eprefix_eq(TermPtr n, const std::string& hint);

// The tangledness condition; variables are tagged tag.n / tag.m / tag.mp.
FormulaPtr lib_tangled(const std::string& tag);

// Conjunct (a)-(c) of the tangled membership branch.
FormulaPtr lib_cond_tangled_branch();
// The untangled membership branch.
FormulaPtr lib_cond_untangled_branch();

// (forall n) length/nesting conditions on even coordinates.
FormulaPtr lib_cond_evens();

// Full base-family membership over g.
FormulaPtr lib_membership();

}  // namespace medf
