#pragma once

// Arithmetical formulas over one function oracle.
//
// Terms are built from constants, variables, successor, doubling, the Cantor
// pair with its projections, decoded-sequence length and entries, and oracle
// application.  Atoms are =, <, sequence extension (proper and improper) on
// decoded values, and even-length-code membership.  Quantifiers come in
// unbounded and bounded (v < t) forms; bounded quantifiers do not contribute
// to the classification level.
//
// Bounded evaluation is three-valued with a polarity guard: a verdict is
// definite only when it is stable under extending the oracle prefix and
// raising the quantifier bound.  An unbounded universal can be refuted at a
// finite stage but never confirmed, and dually for existentials.

#include "medf/coding.hpp"
#include "medf/nat.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace medf {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Const, Var, Succ, Double, Pair, Fst, Snd, Len, At, Oracle };
  Kind kind;
  BigInt value;   // Const
  std::string var;  // Var
  TermPtr a, b;
};

TermPtr t_const(const BigInt& v);
TermPtr t_var(const std::string& name);
TermPtr t_succ(TermPtr t);
TermPtr t_double(TermPtr t);
TermPtr t_pair(TermPtr a, TermPtr b);
TermPtr t_fst(TermPtr t);
TermPtr t_snd(TermPtr t);
TermPtr t_len(TermPtr t);
TermPtr t_at(TermPtr code, TermPtr index);
TermPtr t_oracle(TermPtr t);

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind {
    Eq, Lt, SeqExt, SeqPExt, InS2,   // atoms
    Not, And, Or,
    Forall, Exists, BForall, BExists
  };
  Kind kind;
  TermPtr t1, t2;                 // atoms
  std::vector<FormulaPtr> kids;   // And / Or / Not
  std::string var;                // quantifiers
  TermPtr bound;                  // bounded quantifiers
  FormulaPtr body;
};

FormulaPtr f_eq(TermPtr a, TermPtr b);
FormulaPtr f_lt(TermPtr a, TermPtr b);
FormulaPtr f_seq_ext(TermPtr a, TermPtr b);
FormulaPtr f_seq_pext(TermPtr a, TermPtr b);
FormulaPtr f_in_s2(TermPtr t);
FormulaPtr f_not(FormulaPtr a);
FormulaPtr f_and(std::vector<FormulaPtr> kids);
FormulaPtr f_or(std::vector<FormulaPtr> kids);
FormulaPtr f_forall(std::string var, FormulaPtr body);
FormulaPtr f_exists(std::string var, FormulaPtr body);
FormulaPtr f_bforall(std::string var, TermPtr bound, FormulaPtr body);
FormulaPtr f_bexists(std::string var, TermPtr bound, FormulaPtr body);

// convenience: a >= b, a -> b
FormulaPtr f_ge(TermPtr a, TermPtr b);
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);

// --- classification ----------------------------------------------------------

struct Classification {
  enum class Side { Sigma, Pi, Delta };
  Side side = Side::Delta;
  int level = 0;
};

// Syntactic upper bound from the prenex normal form (alternation count of
// unbounded quantifier blocks; bounded quantifiers contribute nothing).
Classification classify(const FormulaPtr& f);

std::string classification_to_string(const Classification& c);

// --- evaluation ----------------------------------------------------------------

enum class Truth { True, False, Unknown };

struct Verdict3 {
  Truth value = Truth::Unknown;
  BigInt use = -1;                     // largest oracle point read; -1 when none
  BigInt quantifier_bound = 0;
  std::optional<BigInt> missing_point; // a read beyond the prefix, when any
};

struct EvalLimits {
  BigInt qbound = 32;        // range of unbounded quantifiers: [0, qbound]
  BigInt bounded_cap = 512;  // iteration cap for bounded quantifiers
};

// Oracle prefixes are exposed via a thin view so callers can present either
// materialized strings or member prefixes without copying.
class OracleView {
 public:
  virtual ~OracleView() = default;
  virtual BigInt size() const = 0;
  virtual Nat at(const BigInt& i) const = 0;
};

// An OracleView over explicit values.
class VectorOracle final : public OracleView {
 public:
  explicit VectorOracle(LazySeq values) : values_(std::move(values)) {}
  BigInt size() const override { return BigInt(values_.size()); }
  Nat at(const BigInt& i) const override { return values_[static_cast<size_t>(i)]; }

 private:
  LazySeq values_;
};

// Evaluate a closed-except-the-oracle formula against a finite oracle prefix.
Verdict3 eval_bounded(const FormulaPtr& f, const OracleView& oracle,
                      const EvalLimits& limits);

// --- transforms ----------------------------------------------------------------

// Prenex normal form.  Existential blocks under bounded universals are
// collected into a coded witness sequence whose length is pinned to the
// bound (and dually), so equivalence is preserved and least witnesses of the
// resulting form stay computable.
FormulaPtr prenex(const FormulaPtr& f);

// f(t) = v read through doubled points: oracle(t) -> oracle(2t).
FormulaPtr subst_oracle_double(const FormulaPtr& f);
// f(t) read through even-position prefix codes: oracle(t) -> at(oracle(2t+2), t).
FormulaPtr subst_oracle_even_code(const FormulaPtr& f);

struct PackSlot {
  std::string tag;     // semantic tag of the original variable
  size_t index;        // position within its block
};

struct ForallExistsForm {
  FormulaPtr psi;          // two distinguished free variables
  std::string n_var, m_var;
  std::vector<PackSlot> n_slots, m_slots;  // left-nested pair packing order
  Classification psi_class;
};

// phi  <=>  (forall n)(exists m) psi(n, m), with psi two levels below phi.
ForallExistsForm to_forall_exists(const FormulaPtr& f);

// Left-nested packing helpers matching the PackSlot layout.
Nat pack_values(const std::vector<Nat>& vals);
std::vector<Nat> unpack_values(const Nat& packed, size_t count);

// Substitution of a free variable by a term.
FormulaPtr subst_var(const FormulaPtr& f, const std::string& var, const TermPtr& t);

// --- textual form ---------------------------------------------------------------

std::string to_sexpr(const FormulaPtr& f);
std::string to_sexpr(const TermPtr& t);
FormulaPtr parse_formula(const std::string& sexpr);

// Tags: variables are named tag#k; the tag survives renaming.
std::string var_tag(const std::string& var);

}  // namespace medf
