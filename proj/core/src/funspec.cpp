#include "medf/funspec.hpp"

#include <map>
#include <mutex>

namespace medf {

FunSpecPtr make_eventually_constant(Seq prefix, BigInt tail) {
  auto n = std::make_shared<FunSpecNode>();
  n->kind = FunSpecNode::Kind::EventuallyConstant;
  n->prefix = std::move(prefix);
  n->tail = std::move(tail);
  return n;
}

FunSpecPtr make_periodic(Seq prefix, Seq cycle) {
  if (cycle.empty()) throw NatError("Periodic: empty cycle");
  auto n = std::make_shared<FunSpecNode>();
  n->kind = FunSpecNode::Kind::Periodic;
  n->prefix = std::move(prefix);
  n->cycle = std::move(cycle);
  return n;
}

FunSpecPtr make_coherent_image(FunSpecPtr inner) {
  if (!inner) throw NatError("CoherentImage: null inner");
  auto n = std::make_shared<FunSpecNode>();
  n->kind = FunSpecNode::Kind::CoherentImage;
  n->inner = std::move(inner);
  return n;
}

FunSpecPtr make_member_image(BigInt stage, FunSpecPtr inner) {
  if (!inner) throw NatError("MemberImage: null inner");
  if (stage < 0) throw NatError("MemberImage: negative stage");
  auto n = std::make_shared<FunSpecNode>();
  n->kind = FunSpecNode::Kind::MemberImage;
  n->stage = std::move(stage);
  n->inner = std::move(inner);
  return n;
}

// Code of s|n as a lazy value whose backing sequence remembers the
// generating function, enabling O(1) equality between prefixes of the same
// function and memoized first-difference comparisons otherwise.
Nat fun_prefix_code(const FunSpecPtr& s, const BigInt& n) {
  FunSpecPtr owner = s;
  auto rep = std::make_shared<RuleSeq>(
      Nat(n), [owner](const BigInt& i) { return eval(owner, i); },
      static_cast<const void*>(owner.get()),
      std::static_pointer_cast<const void>(owner));
  Nat code = Nat::code_of(rep);
  auto v = nat_exact(code, 256);
  if (v) return Nat(*v);
  return code;
}

Nat eval(const FunSpecPtr& s, const BigInt& n) {
  if (!s) throw NatError("eval: null spec");
  if (n < 0) throw NatError("eval: negative argument");
  switch (s->kind) {
    case FunSpecNode::Kind::EventuallyConstant: {
      if (n < BigInt(s->prefix.size())) return Nat(s->prefix[static_cast<size_t>(n)]);
      return Nat(s->tail);
    }
    case FunSpecNode::Kind::Periodic: {
      if (n < BigInt(s->prefix.size())) return Nat(s->prefix[static_cast<size_t>(n)]);
      BigInt k = (n - BigInt(s->prefix.size())) % BigInt(s->cycle.size());
      return Nat(s->cycle[static_cast<size_t>(k)]);
    }
    case FunSpecNode::Kind::CoherentImage:
      return fun_prefix_code(s->inner, n);
    case FunSpecNode::Kind::MemberImage:
      return member_image_eval(*s, n);
  }
  throw NatError("eval: unreachable");
}

LazySeq fun_prefix(const FunSpecPtr& s, const BigInt& L) {
  LazySeq out;
  for (BigInt i = 0; i < L; ++i) out.push_back(eval(s, i));
  return out;
}

AgreementReport agreements(const FunSpecPtr& a, const FunSpecPtr& b, const BigInt& bound) {
  AgreementReport r;
  r.exhausted_bound = bound;
  for (BigInt n = 0; n <= bound; ++n) {
    if (nat_eq(eval(a, n), eval(b, n))) r.points.push_back(n);
  }
  return r;
}

std::optional<BigInt> range_bound(const FunSpecPtr& s) {
  switch (s->kind) {
    case FunSpecNode::Kind::EventuallyConstant: {
      BigInt m = s->tail;
      for (const auto& v : s->prefix) m = v > m ? v : m;
      return m;
    }
    case FunSpecNode::Kind::Periodic: {
      BigInt m = 0;
      for (const auto& v : s->prefix) m = v > m ? v : m;
      for (const auto& v : s->cycle) m = v > m ? v : m;
      return m;
    }
    default:
      return std::nullopt;
  }
}

std::optional<BigInt> first_difference(const FunSpecPtr& a, const FunSpecPtr& b,
                                       const BigInt& cap) {
  for (BigInt n = 0; n < cap; ++n) {
    if (!nat_eq(eval(a, n), eval(b, n))) return n;
  }
  return std::nullopt;
}

bool specs_equal_structurally(const FunSpecPtr& a, const FunSpecPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case FunSpecNode::Kind::EventuallyConstant:
      return a->prefix == b->prefix && a->tail == b->tail;
    case FunSpecNode::Kind::Periodic:
      return a->prefix == b->prefix && a->cycle == b->cycle;
    case FunSpecNode::Kind::CoherentImage:
      return specs_equal_structurally(a->inner, b->inner);
    case FunSpecNode::Kind::MemberImage:
      return a->stage == b->stage && specs_equal_structurally(a->inner, b->inner);
  }
  return false;
}

}  // namespace medf
