#pragma once

// The complexity-reducing transform on family stages.
//
// A stage holds a membership formula over one oracle together with its fixed
// forall-exists presentation (forall n)(exists m) Psi(n,m,h).  Mangling a
// stage produces the interleaved family: members carry their own least
// witnesses on odd coordinates, and the new membership formula
//
//   (forall n) [ (i) structural interleaving  /\  (ii) Psi'(n, g(n), h)
//                /\  (iii) (forall m < g(n)) not Psi'(n, m, h) ]
//
// sits exactly one level below the input.  Condition (i) pins the odd code's
// length and chains consecutive codes, which makes the accepted branches
// coincide with the member family.
//
// Witness values are computed by per-stage engines derived from the fixed
// presentation (never by unbounded search) and cross-validated against the
// bounded evaluator in the test suite.

#include "medf/family.hpp"
#include "medf/formula.hpp"
#include "medf/funspec.hpp"

#include <vector>

namespace medf {

struct FamilyStage {
  int index = 0;
  FormulaPtr membership;
  Classification classification;
  ForallExistsForm fe;       // membership == forall n exists m fe.psi
  FormulaPtr psi_doubled;    // fe.psi with oracle reads doubled
};

// The base family: membership read entirely through the candidate's even
// coordinates; classification Pi4.
FamilyStage base_stage();

// One mangling step; rejects stages below level 2.
FamilyStage mangle_stage(const FamilyStage& s);

// Base stage plus three mangling steps: Pi4, Pi3, Pi2, Pi1.
const std::vector<FamilyStage>& family_chain();

// The interleaved image of a stage member: star(2n) = member(n),
// star(2n+1) = code of member|n+1 followed by the witnesses g|n+1.
// member must be a MemberImage at the stage's index.
FunSpecPtr star_member(const FunSpecPtr& member, const FamilyStage& stage);

// Least witness of the stage's Psi at instance n for the given member.
Nat least_witness(const FamilyStage& stage, const FunSpecPtr& member, const BigInt& n);

// Canonical member node of the stage-k family rooted at `root` (memoized so
// repeated construction shares value nodes).
FunSpecPtr member_node(int stage_index, const FunSpecPtr& root);

// Finds the stage member agreeing with f on even coordinates and reports
// the verified agreement points.  budget counts candidates examined.
AgreementReport spanning_check(int stage_index, const FunSpecPtr& f, size_t budget);

// Oracle view over a member's prefix.
class FunOracle final : public OracleView {
 public:
  FunOracle(FunSpecPtr f, BigInt len) : f_(std::move(f)), len_(std::move(len)) {}
  BigInt size() const override { return len_; }
  Nat at(const BigInt& i) const override { return eval(f_, i); }

 private:
  FunSpecPtr f_;
  BigInt len_;
};

}  // namespace medf
