#include "medf/tree.hpp"

namespace medf {

namespace {

// non-owning oracle view over a prefix vector
class SpanOracle final : public OracleView {
 public:
  explicit SpanOracle(const LazySeq& values) : values_(values) {}
  BigInt size() const override { return BigInt(values_.size()); }
  Nat at(const BigInt& i) const override { return values_[static_cast<size_t>(i)]; }

 private:
  const LazySeq& values_;
};

EvalLimits tree_limits(const LazySeq& prefix) {
  EvalLimits limits;
  limits.qbound = BigInt(prefix.size());
  limits.bounded_cap = 64;
  return limits;
}

}  // namespace

TreePredicate::TreePredicate(const FamilyStage& stage) {
  if (stage.classification.level > 1) {
    throw NatError("TreePredicate: stage above level 1");
  }
  FormulaPtr m = stage.membership;
  if (m->kind != Formula::Kind::Forall) {
    throw NatError("TreePredicate: membership is not a universal formula");
  }
  n_var_ = m->var;
  condition_ = m->body;
  Classification c = classify(condition_);
  if (c.level != 0) {
    throw NatError("TreePredicate: condition matrix has unbounded quantifiers");
  }
}

Verdict3 TreePredicate::condition_verdict(const LazySeq& prefix, const BigInt& n) const {
  FormulaPtr inst = subst_var(condition_, n_var_, t_const(n));
  SpanOracle oracle(prefix);
  return eval_bounded(inst, oracle, tree_limits(prefix));
}

bool TreePredicate::accepts(const LazySeq& prefix) const {
  BigInt len(prefix.size());
  for (BigInt n = 0; 2 * n + 2 <= len; ++n) {
    if (condition_verdict(prefix, n).value == Truth::False) return false;
  }
  return true;
}

TreePredicate tree_from_stage(const FamilyStage& stage) { return TreePredicate(stage); }

void TreeWalker::push(Nat value) {
  if (rejected_) {
    prefix_.push_back(std::move(value));
    return;
  }
  prefix_.push_back(std::move(value));
  BigInt len(prefix_.size());
  while (2 * next_condition_ + 2 <= len) {
    pending_.push_back(Pending{next_condition_, len - 1});
    ++next_condition_;
  }
  std::vector<Pending> still;
  still.reserve(pending_.size());
  for (const Pending& p : pending_) {
    if (p.wake_at >= len) {
      // verdicts are stable until a missing read becomes available
      still.push_back(p);
      continue;
    }
    Verdict3 v = pred_.condition_verdict(prefix_, p.n);
    if (v.value == Truth::False) {
      rejected_ = true;
      return;
    }
    if (v.value == Truth::Unknown && v.missing_point) {
      // wake when the missing read becomes available
      BigInt wake = *v.missing_point;
      if (wake < len) wake = len;
      still.push_back(Pending{p.n, wake});
    }
    // True verdicts are stable.  Unknown verdicts without a missing read
    // come from fixed iteration caps and cannot change on extensions.
  }
  pending_ = std::move(still);
}

std::optional<BigInt> rejection_depth(const TreePredicate& pred, const FunSpecPtr& s,
                                      const BigInt& bound) {
  TreeWalker walker(pred);
  for (BigInt len = 1; len <= bound; ++len) {
    walker.push(eval(s, len - 1));
    if (walker.rejected()) return len;
  }
  return std::nullopt;
}

namespace {

void explore_rec(const TreePredicate& pred, LazySeq& cur, size_t depth,
                 const BigInt& value_cap, std::vector<LazySeq>& out) {
  if (!pred.accepts(cur)) return;
  out.push_back(cur);
  if (depth == 0) return;
  for (BigInt v = 0; v <= value_cap; ++v) {
    cur.push_back(Nat(v));
    explore_rec(pred, cur, depth - 1, value_cap, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<LazySeq> explore(const TreePredicate& pred, const LazySeq& sigma,
                             size_t depth, const BigInt& value_cap) {
  std::vector<LazySeq> out;
  LazySeq cur = sigma;
  explore_rec(pred, cur, depth, value_cap, out);
  return out;
}

}  // namespace medf
