#pragma once

// Finite descriptions of total functions N -> N.  These are the only
// representation of infinite objects in the system; every class carries
// enough structure to certify the properties the family construction needs.

#include "medf/coding.hpp"
#include "medf/nat.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace medf {

struct FunSpecNode;
using FunSpecPtr = std::shared_ptr<const FunSpecNode>;

struct FunSpecNode {
  enum class Kind { EventuallyConstant, Periodic, CoherentImage, MemberImage };

  Kind kind;
  Seq prefix;       // EventuallyConstant, Periodic
  BigInt tail = 0;  // EventuallyConstant
  Seq cycle;        // Periodic, nonempty
  FunSpecPtr inner; // CoherentImage, MemberImage
  BigInt stage = 0; // MemberImage
};

FunSpecPtr make_eventually_constant(Seq prefix, BigInt tail);
FunSpecPtr make_periodic(Seq prefix, Seq cycle);
FunSpecPtr make_coherent_image(FunSpecPtr inner);
FunSpecPtr make_member_image(BigInt stage, FunSpecPtr inner);

// Total evaluation.  Values of CoherentImage and MemberImage specs are codes
// that grow too fast to materialize, so the result is a (possibly symbolic)
// Nat.  Deterministic: repeated calls agree.
Nat eval(const FunSpecPtr& s, const BigInt& n);

// Code of s|n, keeping the generating function's identity on the backing
// sequence so prefix codes of the same function compare in O(1).
Nat fun_prefix_code(const FunSpecPtr& s, const BigInt& n);

// <eval(s,0), ..., eval(s,L-1)>
LazySeq fun_prefix(const FunSpecPtr& s, const BigInt& L);

struct AgreementReport {
  std::vector<BigInt> points;  // ascending, every point an agreement
  BigInt exhausted_bound = 0;
};

AgreementReport agreements(const FunSpecPtr& a, const FunSpecPtr& b, const BigInt& bound);

// Upper bound on the range for classes that have one.
std::optional<BigInt> range_bound(const FunSpecPtr& s);

// Least n with eval(a,n) != eval(b,n); nullopt if none below cap.
std::optional<BigInt> first_difference(const FunSpecPtr& a, const FunSpecPtr& b,
                                       const BigInt& cap);

bool specs_equal_structurally(const FunSpecPtr& a, const FunSpecPtr& b);

// Defined in mangle.cpp: value of the stage-k member image of inner.
Nat member_image_eval(const FunSpecNode& node, const BigInt& n);

}  // namespace medf
