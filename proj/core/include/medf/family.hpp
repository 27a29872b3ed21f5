#pragma once

// Core maps and predicates of the family construction: the coherent image
// e(f), domain(f), the hybrid edb(f,B), the prefix order on domain points,
// tangledness with per-class certificates, the carved-out set h(f), the
// assigned member, the pair coloring with homogeneous-set search, and
// maximality witness search.

#include "medf/funspec.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace medf {

struct TangleCertificate {
  enum class Kind { Tangled, Untangled, Unknown };
  Kind kind = Kind::Unknown;
  // Tangled: order horizon M; no domain point above M is below another in
  // the prefix order.  Untangled: a domain point from which the chain
  // recursion never gets stuck.  Unknown: bound searched.
  BigInt value = 0;
};

struct ColoredPair {
  BigInt k, k2;
  int color;
};

enum class Verdict { True, False, Unknown };

// e(f)(n): the code of f|n.
Nat e_eval(const FunSpecPtr& f, const BigInt& n);

// k in domain(f)  <=>  k = 2m+1 and the m-th sequence is an initial segment of f.
bool domain_member(const FunSpecPtr& f, const BigInt& k);
std::vector<BigInt> domain_list(const FunSpecPtr& f, const BigInt& bound);

// Value of the k-th domain element 2*code(f|k)+1 (ascending in k), when it
// is small enough to materialize.
std::optional<BigInt> domain_element_exact(const FunSpecPtr& f, const BigInt& k);

// edb(f,B)(n): f(n) on B, the prefix code off B.
Nat edb_eval(const FunSpecPtr& f, const std::function<bool(const BigInt&)>& in_b,
             const BigInt& n);

// The prefix order: decoded values at m and m' are nested proper initial
// segments whose lengths equal their positions.
bool order_rel(const FunSpecPtr& f, const BigInt& m, const BigInt& m2);

TangleCertificate tangle_certificate(const FunSpecPtr& f);

// Three-valued restricted evaluation of the tangledness condition with all
// quantifiers limited to domain(f) within [0,bound].  Definite verdicts are
// issued only when the certificate logic forces the unbounded statement.
Verdict tangled_bounded(const FunSpecPtr& f, const BigInt& bound);

// Membership in h(f).  Requires a definite certificate.
bool h_member(const FunSpecPtr& f, const TangleCertificate& cert, const BigInt& m);

// The member assigned to f: edb(f,h(f)) when tangled, e(f) otherwise.
Nat hdot_eval(const FunSpecPtr& f, const TangleCertificate& cert, const BigInt& n);

// Least domain element >= n that lies in h(f) (tangled certificates only).
BigInt least_h_element_at_least(const FunSpecPtr& f, const TangleCertificate& cert,
                                const BigInt& n);

// Least m' in domain(f), m' >= m, with order_rel(f, m, m'); nullopt if none.
std::optional<BigInt> ord_successor(const FunSpecPtr& f, const TangleCertificate& cert,
                                    const BigInt& m);

// For untangled f: the finite set of domain points without a successor.
std::vector<BigInt> stuck_points(const FunSpecPtr& f, const TangleCertificate& cert);

// Coloring of the maximality sketch: 0 iff lengths match positions and the
// decoded values nest.
int hs_color(const FunSpecPtr& f, const BigInt& k, const BigInt& k2);

std::optional<std::pair<int, std::vector<BigInt>>> homogeneous_search(
    const FunSpecPtr& f, size_t size, const BigInt& bound);

struct CoherentReconstruction {
  std::vector<Nat> chain;   // m_0 < m_1 < ... with successive order relations
  FunSpecPtr limit;         // the function whose prefixes the chain decodes
};

CoherentReconstruction reconstruct_coherent(const FunSpecPtr& f,
                                            const TangleCertificate& cert,
                                            size_t count);

struct MaximalityWitness {
  FunSpecPtr member;        // family member infinitely equal to the target
  AgreementReport report;   // verified agreement points
};

// Completes target_prefix by the tail spec, locates the family member the
// construction assigns, and reports agreement points.  budget counts
// candidate points examined, not their magnitude.
MaximalityWitness maximality_witness(const Seq& target_prefix, const FunSpecPtr& tail,
                                     size_t budget);

// Builds the completed target of maximality_witness (prefix overriding tail).
FunSpecPtr overlay_prefix(const Seq& target_prefix, const FunSpecPtr& tail);

// Largest n such that members assigned to f and g can still agree at n,
// derived from certificates; agreements beyond it are impossible.
BigInt member_agreement_bound(const FunSpecPtr& f, const FunSpecPtr& g);

}  // namespace medf
