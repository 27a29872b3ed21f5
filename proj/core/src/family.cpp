#include "medf/family.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace medf {

namespace {

constexpr unsigned kElementBits = 1u << 16;  // materialization cap for domain points

bool is_odd(const BigInt& k) { return k % 2 != 0; }

// The function whose prefixes the coherent part of f codes, together with
// the last domain point shared with the inner function (-1 when none).
struct LimitInfo {
  FunSpecPtr limit;
  BigInt common_end;  // domain points of f above this are pure prefix codes
};

std::optional<LimitInfo> limit_info(const FunSpecPtr& f);

}  // namespace

Nat e_eval(const FunSpecPtr& f, const BigInt& n) { return fun_prefix_code(f, n); }

bool domain_member(const FunSpecPtr& f, const BigInt& k) {
  if (k <= 0 || !is_odd(k)) return false;
  BigInt m = (k - 1) / 2;
  Seq q = decode_code(m);
  for (size_t i = 0; i < q.size(); ++i) {
    if (!nat_eq(Nat(q[i]), eval(f, BigInt(i)))) return false;
  }
  return true;
}

std::vector<BigInt> domain_list(const FunSpecPtr& f, const BigInt& bound) {
  std::vector<BigInt> out;
  for (BigInt k = 0; k >= 0; ++k) {
    auto e = domain_element_exact(f, k);
    if (!e || *e > bound) break;
    out.push_back(*e);
  }
  return out;
}

std::optional<BigInt> domain_element_exact(const FunSpecPtr& f, const BigInt& k) {
  auto c = nat_exact(e_eval(f, k), kElementBits);
  if (!c) return std::nullopt;
  return 2 * *c + 1;
}

Nat edb_eval(const FunSpecPtr& f, const std::function<bool(const BigInt&)>& in_b,
             const BigInt& n) {
  if (in_b(n)) return eval(f, n);
  return e_eval(f, n);
}

bool order_rel(const FunSpecPtr& f, const BigInt& m, const BigInt& m2) {
  if (m >= m2) return false;  // proper extension forces longer decoded value
  Nat vm = eval(f, m);
  if (!nat_eq(code_length(vm), Nat(m))) return false;
  Nat vm2 = eval(f, m2);
  if (!nat_eq(code_length(vm2), Nat(m2))) return false;
  for (BigInt i = 0; i < m; ++i) {
    if (!nat_eq(code_at(vm, i), code_at(vm2, i))) return false;
  }
  return true;
}

namespace {

std::optional<LimitInfo> limit_info(const FunSpecPtr& f) {
  static std::map<const FunSpecNode*, std::optional<LimitInfo>> memo;
  static std::vector<FunSpecPtr> keepalive;  // pins keys against pointer reuse
  static std::mutex mu;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(f.get());
    if (it != memo.end()) return it->second;
  }
  std::optional<LimitInfo> out;
  if (f->kind == FunSpecNode::Kind::CoherentImage) {
    out = LimitInfo{f->inner, BigInt(-1)};
  } else if (f->kind == FunSpecNode::Kind::MemberImage && f->stage == 0) {
    // Off h(inner) the member codes prefixes of inner; the shared domain
    // points sit below the code of the longest common prefix.
    auto d = first_difference(f, f->inner, BigInt(1) << 20);
    if (!d) throw NatError("limit_info: member indistinguishable from inner");
    auto c = nat_exact(fun_prefix_code(f, *d), kElementBits);
    if (!c) throw NatError("limit_info: common zone beyond materialization");
    out = LimitInfo{f->inner, 2 * *c + 1};
  }
  std::lock_guard<std::mutex> lock(mu);
  memo[f.get()] = out;
  keepalive.push_back(f);
  return out;
}

BigInt tangled_horizon(const FunSpecPtr& f) {
  // max length of a decoded range value
  auto rb = range_bound(f);
  if (!rb) throw NatError("tangled_horizon: unbounded range");
  BigInt m = 0;
  auto consider = [&m](const BigInt& v) {
    BigInt len(decode_code(v).size());
    if (len > m) m = len;
  };
  if (f->kind == FunSpecNode::Kind::EventuallyConstant) {
    for (const auto& v : f->prefix) consider(v);
    consider(f->tail);
  } else {
    for (const auto& v : f->prefix) consider(v);
    for (const auto& v : f->cycle) consider(v);
  }
  return m;
}

}  // namespace

TangleCertificate tangle_certificate(const FunSpecPtr& f) {
  TangleCertificate cert;
  switch (f->kind) {
    case FunSpecNode::Kind::EventuallyConstant:
    case FunSpecNode::Kind::Periodic:
      cert.kind = TangleCertificate::Kind::Tangled;
      cert.value = tangled_horizon(f);
      return cert;
    case FunSpecNode::Kind::CoherentImage:
      // every domain point extends along the coded prefixes
      cert.kind = TangleCertificate::Kind::Untangled;
      cert.value = 1;
      return cert;
    case FunSpecNode::Kind::MemberImage: {
      if (f->stage == 0) {
        TangleCertificate inner = tangle_certificate(f->inner);
        if (inner.kind == TangleCertificate::Kind::Untangled) {
          // the member is the plain coherent image of the inner function
          cert.kind = TangleCertificate::Kind::Untangled;
          cert.value = 1;
          return cert;
        }
        // Off the finite shared zone every domain point is a prefix code
        // with arbitrarily large extensions, so the chain never sticks.
        auto li = limit_info(f);
        BigInt k = 0;
        for (;; ++k) {
          auto e = domain_element_exact(f, k);
          if (!e) throw NatError("tangle_certificate: start beyond materialization");
          if (*e > li->common_end) {
            cert.kind = TangleCertificate::Kind::Untangled;
            cert.value = *e;
            return cert;
          }
        }
      }
      // Interleaved members take even-length codes at odd positions, so no
      // domain point ever sits below another in the prefix order.
      cert.kind = TangleCertificate::Kind::Tangled;
      cert.value = 0;
      return cert;
    }
  }
  return cert;
}

bool h_member(const FunSpecPtr& f, const TangleCertificate& cert, const BigInt& m) {
  if (cert.kind == TangleCertificate::Kind::Unknown) {
    throw NatError("h_member: unknown certificate");
  }
  if (!domain_member(f, m)) return false;
  if (cert.kind == TangleCertificate::Kind::Untangled) return true;
  Nat vm = eval(f, m);
  if (!nat_eq(code_length(vm), Nat(m))) return true;  // never below another point
  for (BigInt m2 = m; m2 <= cert.value; ++m2) {
    if (!is_odd(m2)) continue;
    if (domain_member(f, m2) && order_rel(f, m, m2)) return false;
  }
  return true;
}

Nat hdot_eval(const FunSpecPtr& f, const TangleCertificate& cert, const BigInt& n) {
  if (cert.kind == TangleCertificate::Kind::Unknown) {
    throw NatError("hdot_eval: unknown certificate");
  }
  if (cert.kind == TangleCertificate::Kind::Untangled) return e_eval(f, n);
  if (h_member(f, cert, n)) return eval(f, n);
  return e_eval(f, n);
}

BigInt least_h_element_at_least(const FunSpecPtr& f, const TangleCertificate& cert,
                                const BigInt& n) {
  if (cert.kind != TangleCertificate::Kind::Tangled) {
    throw NatError("least_h_element_at_least: tangled certificate required");
  }
  for (BigInt k = 0; k >= 0; ++k) {
    auto e = domain_element_exact(f, k);
    if (!e) throw NatError("least_h_element_at_least: beyond materialization");
    if (*e >= n && h_member(f, cert, *e)) return *e;
  }
  throw NatError("least_h_element_at_least: unreachable");
}

std::optional<BigInt> ord_successor(const FunSpecPtr& f, const TangleCertificate& cert,
                                    const BigInt& m) {
  Nat vm = eval(f, m);
  if (!nat_eq(code_length(vm), Nat(m))) return std::nullopt;
  if (cert.kind == TangleCertificate::Kind::Tangled) {
    for (BigInt m2 = m; m2 <= cert.value; ++m2) {
      if (!is_odd(m2)) continue;
      if (domain_member(f, m2) && order_rel(f, m, m2)) return m2;
    }
    return std::nullopt;
  }
  if (cert.kind != TangleCertificate::Kind::Untangled) {
    throw NatError("ord_successor: unknown certificate");
  }
  auto li = limit_info(f);
  if (!li) throw NatError("ord_successor: untangled spec without limit structure");
  for (BigInt k = 0; k >= 0; ++k) {
    auto e = domain_element_exact(f, k);
    if (!e) throw NatError("ord_successor: beyond materialization");
    if (*e <= m) continue;
    if (*e > li->common_end) {
      // pure prefix-code zone: a successor exists iff the decoded value at m
      // is the limit function's length-m prefix (constant time through the
      // shared generating-function identity)
      if (nat_eq(vm, fun_prefix_code(li->limit, m))) return *e;
      return std::nullopt;
    }
    if (order_rel(f, m, *e)) return *e;
  }
  return std::nullopt;
}

std::vector<BigInt> stuck_points(const FunSpecPtr& f, const TangleCertificate& cert) {
  if (cert.kind != TangleCertificate::Kind::Untangled) {
    throw NatError("stuck_points: untangled certificate required");
  }
  auto li = limit_info(f);
  if (!li) throw NatError("stuck_points: no limit structure");
  std::vector<BigInt> out;
  for (BigInt k = 0; k >= 0; ++k) {
    auto e = domain_element_exact(f, k);
    if (!e || *e > li->common_end) break;
    if (!ord_successor(f, cert, *e)) out.push_back(*e);
  }
  return out;
}

int hs_color(const FunSpecPtr& f, const BigInt& k, const BigInt& k2) {
  if (k >= k2) throw NatError("hs_color: requires k < k2");
  Nat vk = eval(f, k);
  if (!nat_eq(code_length(vk), Nat(k))) return 1;
  Nat vk2 = eval(f, k2);
  if (!nat_eq(code_length(vk2), Nat(k2))) return 1;
  for (BigInt i = 0; i < k; ++i) {
    if (!nat_eq(code_at(vk, i), code_at(vk2, i))) return 1;
  }
  return 0;
}

namespace {

bool extend_homogeneous(const FunSpecPtr& f, const std::vector<BigInt>& dom, int color,
                        size_t want, size_t from, std::vector<BigInt>& acc) {
  if (acc.size() == want) return true;
  for (size_t i = from; i < dom.size(); ++i) {
    bool ok = true;
    for (const BigInt& a : acc) {
      if (hs_color(f, a, dom[i]) != color) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    acc.push_back(dom[i]);
    if (extend_homogeneous(f, dom, color, want, i + 1, acc)) return true;
    acc.pop_back();
  }
  return false;
}

}  // namespace

std::optional<std::pair<int, std::vector<BigInt>>> homogeneous_search(
    const FunSpecPtr& f, size_t size, const BigInt& bound) {
  std::vector<BigInt> dom = domain_list(f, bound);
  for (int color : {0, 1}) {
    std::vector<BigInt> acc;
    if (extend_homogeneous(f, dom, color, size, 0, acc)) {
      return std::make_pair(color, acc);
    }
  }
  return std::nullopt;
}

CoherentReconstruction reconstruct_coherent(const FunSpecPtr& f,
                                            const TangleCertificate& cert,
                                            size_t count) {
  if (cert.kind != TangleCertificate::Kind::Untangled) {
    throw NatError("reconstruct_coherent: untangled certificate required");
  }
  CoherentReconstruction rc;
  auto li = limit_info(f);
  if (!li) throw NatError("reconstruct_coherent: no limit structure");
  rc.limit = li->limit;
  if (count == 0) return rc;
  // least chain start at or after the certificate point
  BigInt cur = -1;
  for (BigInt k = 0; k >= 0; ++k) {
    auto e = domain_element_exact(f, k);
    if (!e) throw NatError("reconstruct_coherent: chain start beyond materialization");
    if (*e >= cert.value && ord_successor(f, cert, *e)) {
      cur = *e;
      break;
    }
  }
  rc.chain.push_back(Nat(cur));
  while (rc.chain.size() < count) {
    auto nxt = ord_successor(f, cert, cur);
    if (!nxt) throw NatError("reconstruct_coherent: chain stuck (invalid certificate)");
    cur = *nxt;
    rc.chain.push_back(Nat(cur));
  }
  return rc;
}

FunSpecPtr overlay_prefix(const Seq& target_prefix, const FunSpecPtr& tail) {
  BigInt L(target_prefix.size());
  switch (tail->kind) {
    case FunSpecNode::Kind::EventuallyConstant: {
      Seq p = target_prefix;
      for (BigInt i = L; i < BigInt(tail->prefix.size()); ++i) {
        p.push_back(*nat_exact(eval(tail, i)));
      }
      return make_eventually_constant(std::move(p), tail->tail);
    }
    case FunSpecNode::Kind::Periodic: {
      BigInt tp(tail->prefix.size());
      BigInt c(tail->cycle.size());
      BigInt ll = L > tp ? L : tp;
      Seq p = target_prefix;
      for (BigInt i = L; i < ll; ++i) p.push_back(*nat_exact(eval(tail, i)));
      Seq cyc;
      for (BigInt j = 0; j < c; ++j) {
        cyc.push_back(tail->cycle[static_cast<size_t>(((ll - tp) + j) % c)]);
      }
      return make_periodic(std::move(p), std::move(cyc));
    }
    default: {
      // image classes admit no prefix override; require consistency
      for (BigInt i = 0; i < L; ++i) {
        if (!nat_eq(Nat(target_prefix[static_cast<size_t>(i)]), eval(tail, i))) {
          throw NatError("overlay_prefix: prefix inconsistent with image-class tail");
        }
      }
      return tail;
    }
  }
}

MaximalityWitness maximality_witness(const Seq& target_prefix, const FunSpecPtr& tail,
                                     size_t budget) {
  FunSpecPtr target = overlay_prefix(target_prefix, tail);
  TangleCertificate cert = tangle_certificate(target);
  MaximalityWitness w;
  if (cert.kind == TangleCertificate::Kind::Tangled) {
    w.member = make_member_image(0, target);
    BigInt last = 0;
    for (BigInt k = 0; k < BigInt(budget); ++k) {
      auto e = domain_element_exact(target, k);
      if (!e) break;  // points beyond materialization; report what we have
      last = *e;
      if (!h_member(target, cert, *e)) continue;
      if (!nat_eq(eval(w.member, *e), eval(target, *e))) {
        throw NatError("maximality_witness: member disagrees on a kept point");
      }
      w.report.points.push_back(*e);
    }
    w.report.exhausted_bound = last;
    return w;
  }
  size_t chain_len = budget < 14 ? budget : 14;
  CoherentReconstruction rc;
  for (;;) {
    try {
      rc = reconstruct_coherent(target, cert, chain_len);
      break;
    } catch (const NatError&) {
      if (chain_len <= 2) throw;
      chain_len /= 2;  // chain points grow doubly exponentially
    }
  }
  TangleCertificate lcert = tangle_certificate(rc.limit);
  if (lcert.kind == TangleCertificate::Kind::Tangled) {
    w.member = make_member_image(0, rc.limit);
  } else {
    w.member = make_coherent_image(rc.limit);
  }
  BigInt last = 0;
  for (const Nat& p : rc.chain) {
    auto pv = nat_exact(p);
    if (!pv) break;
    last = *pv;
    if (nat_eq(eval(w.member, *pv), eval(target, *pv))) {
      w.report.points.push_back(*pv);
    }
  }
  w.report.exhausted_bound = last;
  return w;
}

Verdict tangled_bounded(const FunSpecPtr& f, const BigInt& bound) {
  std::vector<BigInt> dom = domain_list(f, bound);
  if (dom.empty()) return Verdict::Unknown;
  TangleCertificate cert = tangle_certificate(f);
  if (cert.kind == TangleCertificate::Kind::Tangled) {
    if (bound < cert.value) return Verdict::Unknown;
    // restricted triple check must confirm before the verdict is forced
    for (const BigInt& n : dom) {
      bool found = false;
      for (const BigInt& m : dom) {
        if (m < n) continue;
        bool all = true;
        for (const BigInt& m2 : dom) {
          if (m2 < m) continue;
          if (order_rel(f, m, m2)) {
            all = false;
            break;
          }
        }
        if (all) {
          found = true;
          break;
        }
      }
      if (!found) return Verdict::Unknown;
    }
    return Verdict::True;
  }
  if (cert.kind == TangleCertificate::Kind::Untangled) {
    if (cert.value > bound) return Verdict::Unknown;
    for (const BigInt& m : dom) {
      if (m < cert.value) continue;
      if (!ord_successor(f, cert, m)) return Verdict::Unknown;
    }
    return Verdict::False;
  }
  return Verdict::Unknown;
}

BigInt member_agreement_bound(const FunSpecPtr& f, const FunSpecPtr& g) {
  auto d = first_difference(f, g, BigInt(1) << 16);
  if (!d) throw NatError("member_agreement_bound: indistinguishable specs");
  BigInt b = *d;
  TangleCertificate cf = tangle_certificate(f);
  TangleCertificate cg = tangle_certificate(g);
  bool ft = cf.kind == TangleCertificate::Kind::Tangled;
  bool gt = cg.kind == TangleCertificate::Kind::Tangled;
  if (ft) {
    auto r = range_bound(f);
    if (!r) throw NatError("member_agreement_bound: tangled spec without range bound");
    if (*r > b) b = *r;
  }
  if (gt) {
    auto r = range_bound(g);
    if (!r) throw NatError("member_agreement_bound: tangled spec without range bound");
    if (*r > b) b = *r;
  }
  if (ft && gt) {
    auto c = nat_exact(fun_prefix_code(f, *d), kElementBits);
    if (!c) throw NatError("member_agreement_bound: common zone beyond materialization");
    BigInt bc = 2 * *c + 1;
    if (bc > b) b = bc;
  }
  return b;
}

}  // namespace medf
