#pragma once

// The final stage as a computable tree on finite strings: a total decision
// procedure accepting exactly the prefixes not yet refuted, so that the
// infinite branches are the members of the level-one family.
//
// Condition n is scheduled as soon as the prefix covers its direct reads
// (coordinates 2n-1, 2n, 2n+1).  Deeper reads required by the carried
// witness checks resolve as the prefix grows; while unresolved they leave
// the condition undecided, never refuted, so rejection is monotone.

#include "medf/mangle.hpp"

#include <optional>
#include <vector>

namespace medf {

class TreePredicate {
 public:
  explicit TreePredicate(const FamilyStage& stage);

  bool accepts(const LazySeq& prefix) const;

  // Prefix length needed before condition n is checked.
  BigInt use_profile(const BigInt& n) const { return 2 * n + 2; }

  // Static bound on the conditions that pin coordinate c.
  BigInt coordinate_use_bound(const BigInt& c) const {
    return c % 2 == 0 ? c + 2 : c + 3;
  }

  // Largest coordinate read while evaluating condition n on the prefix,
  // together with the verdict.
  Verdict3 condition_verdict(const LazySeq& prefix, const BigInt& n) const;

  const FormulaPtr& condition() const { return condition_; }
  const std::string& condition_var() const { return n_var_; }

 private:
  FormulaPtr condition_;
  std::string n_var_;
};

TreePredicate tree_from_stage(const FamilyStage& stage);

// Incremental prefix checker: conditions are re-evaluated only when a read
// they were waiting for becomes available, which keeps long-prefix scans
// close to linear.  Decisions agree with TreePredicate::accepts.
class TreeWalker {
 public:
  explicit TreeWalker(const TreePredicate& pred) : pred_(pred) {}

  void push(Nat value);
  bool rejected() const { return rejected_; }
  BigInt length() const { return BigInt(prefix_.size()); }
  const LazySeq& prefix() const { return prefix_; }

 private:
  struct Pending {
    BigInt n;
    BigInt wake_at;  // re-evaluate once the prefix is longer than this
  };

  const TreePredicate& pred_;
  LazySeq prefix_;
  std::vector<Pending> pending_;
  BigInt next_condition_ = 0;
  bool rejected_ = false;
};

// Least L <= bound with the length-L prefix of s rejected, if any.
std::optional<BigInt> rejection_depth(const TreePredicate& pred, const FunSpecPtr& s,
                                      const BigInt& bound);

// All accepted extensions of sigma by at most `depth` coordinates with
// values at most value_cap (including sigma itself when accepted).
std::vector<LazySeq> explore(const TreePredicate& pred, const LazySeq& sigma,
                             size_t depth, const BigInt& value_cap);

}  // namespace medf
