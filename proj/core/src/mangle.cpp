#include "medf/mangle.hpp"

#include "medf/formula_library.hpp"

#include <map>
#include <mutex>
#include <tuple>

namespace medf {

namespace {

// --- stage formula construction ------------------------------------------------

TermPtr two_var_plus(const std::string& v, int add) {
  TermPtr r = t_double(t_var(v));
  for (int i = 0; i < add; ++i) r = t_succ(std::move(r));
  return r;
}

// g(n): the witness value carried at the end of the odd code's second half.
TermPtr witness_term(const std::string& n) {
  return t_at(t_oracle(two_var_plus(n, 1)), two_var_plus(n, 1));
}

// Structural interleaving condition at n: the odd coordinate codes an
// even-length sequence of length 2n+2 whose first half ends in the even
// coordinate's value and whose halves extend the previous odd code's halves.
FormulaPtr interleave_condition(const std::string& n) {
  TermPtr odd = t_oracle(two_var_plus(n, 1));
  FormulaPtr shape = f_and({
      f_in_s2(odd),
      f_eq(t_len(odd), t_succ(t_succ(t_double(t_var(n))))),
      f_eq(t_oracle(t_double(t_var(n))), t_at(odd, t_var(n))),
  });
  // p = n-1: both halves extend the previous code's halves.  The first half
  // matches positionwise; second-half positions shift by one, so entry q of
  // the new code equals entry q-1 of the previous one for q in [n+1, 2n].
  std::string p = "ic.p";
  std::string i = "ic.i";
  TermPtr prev = t_oracle(two_var_plus(p, 1));
  FormulaPtr first_half = f_bforall(
      i, t_var(n), f_eq(t_at(odd, t_var(i)), t_at(prev, t_var(i))));
  std::string q = "ic.q";
  FormulaPtr tail_chain = f_bforall(
      q, t_succ(t_double(t_var(n))),
      f_or({
          f_lt(t_var(q), t_succ(t_var(n))),
          f_bexists(std::string("ic.r"), t_var(q),
                    f_and({f_eq(t_succ(t_var("ic.r")), t_var(q)),
                           f_eq(t_at(odd, t_var(q)), t_at(prev, t_var("ic.r")))})),
      }));
  FormulaPtr chain = f_bforall(
      p, t_var(n),
      f_or({
          f_not(f_eq(t_succ(t_var(p)), t_var(n))),
          f_and({first_half, tail_chain}),
      }));
  return f_and({shape, chain});
}

}  // namespace

FamilyStage base_stage() {
  FamilyStage s;
  s.index = 0;
  s.membership = lib_membership();
  s.classification = classify(s.membership);
  s.fe = to_forall_exists(s.membership);
  s.psi_doubled = subst_oracle_double(s.fe.psi);
  return s;
}

FamilyStage mangle_stage(const FamilyStage& s) {
  if (s.classification.level < 2) {
    throw NatError("mangle_stage: stage below level 2");
  }
  FamilyStage out;
  out.index = s.index + 1;
  std::string n = "g" + std::to_string(out.index) + ".n";
  std::string mv = "g" + std::to_string(out.index) + ".m";
  TermPtr gt = witness_term(n);
  FormulaPtr cond_i = interleave_condition(n);
  FormulaPtr psi_at = subst_var(s.psi_doubled, s.fe.n_var, t_var(n));
  FormulaPtr cond_ii = subst_var(psi_at, s.fe.m_var, gt);
  FormulaPtr cond_iii =
      f_bforall(mv, gt, f_not(subst_var(psi_at, s.fe.m_var, t_var(mv))));
  out.membership = f_forall(n, f_and({cond_i, cond_ii, cond_iii}));
  out.classification = classify(out.membership);
  out.fe = to_forall_exists(out.membership);
  out.psi_doubled = subst_oracle_double(out.fe.psi);
  return out;
}

namespace {

// --- chain state and witness engines --------------------------------------------

struct SlotMap {
  size_t count = 0;
  std::map<std::string, size_t> by_tag;
};

SlotMap slot_map(const std::vector<PackSlot>& slots) {
  SlotMap m;
  m.count = slots.size();
  for (const auto& s : slots) {
    if (!m.by_tag.emplace(s.tag, s.index).second) {
      throw NatError("slot_map: duplicate tag " + s.tag);
    }
  }
  return m;
}

// leading universal variables of a prenex formula, in binding order
std::vector<std::string> leading_forall_tags(const FormulaPtr& f) {
  std::vector<std::string> out;
  FormulaPtr cur = f;
  while (cur && cur->kind == Formula::Kind::Forall) {
    out.push_back(var_tag(cur->var));
    cur = cur->body;
  }
  return out;
}

struct StageEngine {
  SlotMap n_slots, m_slots;
  std::vector<std::string> psi_forall_tags;  // order of the collected block entries
};

struct ChainState {
  std::vector<FamilyStage> stages;
  std::vector<StageEngine> engines;
  std::mutex mu;
  std::map<std::pair<int, const FunSpecNode*>, FunSpecPtr> member_nodes;
  std::map<std::tuple<int, const FunSpecNode*, BigInt>, Nat> witness_memo;
  std::map<std::tuple<int, const FunSpecNode*, BigInt>, Nat> value_memo;
  std::map<const FunSpecNode*, TangleCertificate> certs;
  std::map<const FunSpecNode*, std::optional<BigInt>> nonep_memo;
  std::vector<FunSpecPtr> keepalive;
};

ChainState& chain_state() {
  static ChainState* st = [] {
    auto* s = new ChainState();
    s->stages.push_back(base_stage());
    for (int i = 0; i < 3; ++i) s->stages.push_back(mangle_stage(s->stages.back()));
    for (const auto& stage : s->stages) {
      StageEngine e;
      e.n_slots = slot_map(stage.fe.n_slots);
      e.m_slots = slot_map(stage.fe.m_slots);
      e.psi_forall_tags = leading_forall_tags(stage.fe.psi);
      s->engines.push_back(std::move(e));
    }
    return s;
  }();
  return *st;
}

// value of the packed component with the given tag
BigInt comp(const std::vector<Nat>& vals, const SlotMap& m, const std::string& tag) {
  auto it = m.by_tag.find(tag);
  if (it == m.by_tag.end()) throw NatError("missing slot tag " + tag);
  auto v = nat_exact(vals[it->second]);
  if (!v) throw NatError("slot value not materializable: " + tag);
  return *v;
}

Nat comp_nat(const std::vector<Nat>& vals, const SlotMap& m, const std::string& tag) {
  auto it = m.by_tag.find(tag);
  if (it == m.by_tag.end()) throw NatError("missing slot tag " + tag);
  return vals[it->second];
}

// pack values by slot position
Nat pack_slots(const SlotMap& m, const std::map<std::string, Nat>& by_tag) {
  std::vector<Nat> vals(m.count, Nat(BigInt(0)));
  for (const auto& [tag, v] : by_tag) {
    auto it = m.by_tag.find(tag);
    if (it == m.by_tag.end()) throw NatError("pack_slots: missing tag " + tag);
    vals[it->second] = v;
  }
  return pack_values(vals);
}

// Everything the witness engines need about the root function.
struct RootCtx {
  FunSpecPtr root;
  TangleCertificate cert;
  FunSpecPtr member0;

  bool tangled() const { return cert.kind == TangleCertificate::Kind::Tangled; }
  bool dom(const BigInt& k) const { return domain_member(root, k); }
  bool ord(const BigInt& a, const BigInt& b) const { return order_rel(root, a, b); }
  // no point of the domain at or above a extends a in the prefix order
  bool keep(const BigInt& a, const BigInt& b) const {
    return !(dom(b) && b >= a && ord(a, b));
  }
  bool ep(const BigInt& p) const {
    return nat_eq(eval(member0, p), e_eval(root, p));
  }
  bool escape(const BigInt& n2) const {
    return !dom(n2) || nat_eq(eval(member0, n2), eval(root, n2));
  }
  bool tau(const BigInt& n1, const BigInt& m, const BigInt& c) const {
    return !dom(n1) || (m >= n1 && dom(m) && keep(m, c));
  }
  bool beta(const BigInt& n2, const BigInt& w) const {
    return !dom(n2) || (dom(w) && w >= n2 && ord(n2, w)) ||
           nat_eq(eval(member0, n2), eval(root, n2));
  }
  bool gamma(const BigInt& n3, const BigInt& w3) const {
    return (dom(n3) && keep(n3, w3)) || ep(n3);
  }
  // least point where the member deviates from the pure prefix-code image
  std::optional<BigInt> least_nonep() const;
  // least domain point >= n with no extension in the prefix order
  std::optional<BigInt> least_stuck_at_least(const BigInt& n) const {
    if (tangled()) return least_h_element_at_least(root, cert, n);
    for (const BigInt& p : stuck_points(root, cert)) {
      if (p >= n) return p;
    }
    return std::nullopt;
  }
};

std::optional<BigInt> root_least_nonep(const RootCtx& c) {
  if (!c.tangled()) return std::nullopt;  // the member is the pure image
  for (BigInt p = 0; p < (BigInt(1) << 20); ++p) {
    if (!c.ep(p)) return p;
  }
  throw NatError("least_nonep: no deviation found below the scan cap");
}

std::optional<BigInt> RootCtx::least_nonep() const {
  ChainState& st = chain_state();
  {
    std::lock_guard<std::mutex> lock(st.mu);
    auto it = st.nonep_memo.find(root.get());
    if (it != st.nonep_memo.end()) return it->second;
  }
  auto v = root_least_nonep(*this);
  std::lock_guard<std::mutex> lock(st.mu);
  st.nonep_memo[root.get()] = v;
  return v;
}

Nat witness_value(int k, const FunSpecPtr& root, const BigInt& n);
Nat member_value(int k, const FunSpecPtr& root, const BigInt& n);

RootCtx root_ctx(const FunSpecPtr& root) {
  ChainState& st = chain_state();
  RootCtx c;
  c.root = root;
  {
    std::lock_guard<std::mutex> lock(st.mu);
    auto it = st.certs.find(root.get());
    if (it != st.certs.end()) {
      c.cert = it->second;
      c.member0 = st.member_nodes.at({0, root.get()});
      return c;
    }
  }
  TangleCertificate cert = tangle_certificate(root);
  std::lock_guard<std::mutex> lock(st.mu);
  st.certs[root.get()] = cert;
  c.cert = cert;
  auto key = std::make_pair(0, root.get());
  auto it = st.member_nodes.find(key);
  if (it == st.member_nodes.end()) {
    FunSpecPtr node = make_member_image(0, root);
    st.member_nodes[key] = node;
    st.keepalive.push_back(root);
    it = st.member_nodes.find(key);
  }
  c.member0 = it->second;
  return c;
}

// --- stage 0 -----------------------------------------------------------------------

struct Stage0View {
  BigInt i_n, ii_n, n1, n2, n3, w3;
};

Stage0View stage0_n_components(const BigInt& nval) {
  ChainState& st = chain_state();
  const StageEngine& e = st.engines[0];
  auto vals = unpack_values(Nat(nval), e.n_slots.count);
  Stage0View v;
  v.i_n = comp(vals, e.n_slots, "I.n");
  v.ii_n = comp(vals, e.n_slots, "II.n");
  v.n1 = comp(vals, e.n_slots, "T.n");
  v.n2 = comp(vals, e.n_slots, "B.n");
  v.n3 = comp(vals, e.n_slots, "C.n");
  v.w3 = comp(vals, e.n_slots, "C.w");
  return v;
}

struct Stage0Pack {
  BigInt m1, m2, n4;
};

Stage0Pack stage0_m_components(const Nat& mval) {
  ChainState& st = chain_state();
  const StageEngine& e = st.engines[0];
  auto vals = unpack_values(mval, e.m_slots.count);
  Stage0Pack p;
  p.m1 = comp(vals, e.m_slots, "T.m");
  p.m2 = comp(vals, e.m_slots, "B.w");
  p.n4 = comp(vals, e.m_slots, "NT.n");
  return p;
}

Nat witness0(const RootCtx& c, const BigInt& nval) {
  ChainState& st = chain_state();
  const StageEngine& e = st.engines[0];
  Stage0View v = stage0_n_components(nval);
  std::optional<BigInt> best;
  // branch where the candidate keeps its own values on the kept set
  std::optional<BigInt> m1, m2;
  if (!c.dom(v.n1)) {
    m1 = 0;
  } else {
    m1 = c.least_stuck_at_least(v.n1);
  }
  if (c.escape(v.n2)) {
    m2 = 0;
  } else {
    m2 = ord_successor(c.root, c.cert, v.n2);
  }
  if (m1 && m2) {
    Nat packed = pack_slots(e.m_slots, {{"T.m", Nat(*m1)},
                                        {"B.w", Nat(*m2)},
                                        {"NT.n", Nat(BigInt(0))}});
    auto px = nat_exact(packed, 1u << 16);
    if (!px) throw NatError("witness0: witness beyond materialization");
    best = *px;
  }
  // branch through the refutation of tangledness
  if (!c.tangled()) {
    Nat packed = pack_slots(e.m_slots, {{"T.m", Nat(BigInt(0))},
                                        {"B.w", Nat(BigInt(0))},
                                        {"NT.n", Nat(c.cert.value)}});
    auto px = nat_exact(packed, 1u << 16);
    if (!px) throw NatError("witness0: witness beyond materialization");
    if (!best || *px < *best) best = *px;
  }
  if (!best) throw NatError("witness0: no witness (input is not a member instance)");
  return Nat(*best);
}

// least entry refuting Psi0 at (nval, m): packed by the psi forall-block order
Nat refuter0(const RootCtx& c, const BigInt& nval, const BigInt& m) {
  ChainState& st = chain_state();
  const StageEngine& e = st.engines[0];
  Stage0View v = stage0_n_components(nval);
  Stage0Pack p = stage0_m_components(Nat(m));
  // component killing the kept-values branch
  BigInt cc = 0;
  if (!c.gamma(v.n3, v.w3) || !c.beta(v.n2, p.m2)) {
    cc = 0;
  } else if (!c.dom(v.n1)) {
    throw NatError("refuter0: branch not refutable (instance is a witness)");
  } else if (p.m1 < v.n1 || !c.dom(p.m1)) {
    cc = 0;
  } else {
    auto s = ord_successor(c.root, c.cert, p.m1);
    if (!s) throw NatError("refuter0: kept point admits no refuting extension");
    cc = *s;
  }
  // components killing the untangledness branch, for every extension choice
  BigInt m4 = 0, n5 = 0;
  if (c.dom(p.n4)) {
    auto pack3 = [&](const BigInt& a, const BigInt& b) {
      return cantor_pair(cantor_pair(cc, a), b);
    };
    std::optional<BigInt> best;
    auto dev = c.least_nonep();
    if (dev) {
      best = pack3(0, *dev);
      m4 = 0;
      n5 = *dev;
    }
    auto stuck = c.least_stuck_at_least(p.n4);
    if (stuck) {
      BigInt alt = pack3(*stuck, 0);
      if (!best || alt < *best) {
        best = alt;
        m4 = *stuck;
        n5 = 0;
      }
    }
    if (!best) {
      throw NatError("refuter0: untangledness branch not refutable");
    }
  }
  // pack by the order of the psi's leading universal block
  std::map<std::string, BigInt> by_tag = {{"T.mp", cc}, {"NT.m", m4}, {"E.n", n5}};
  std::vector<Nat> vals;
  for (const auto& tag : e.psi_forall_tags) {
    auto it = by_tag.find(tag);
    if (it == by_tag.end()) throw NatError("refuter0: unexpected block tag " + tag);
    vals.push_back(Nat(it->second));
  }
  return pack_values(vals);
}

// --- stage 1 -----------------------------------------------------------------------

struct Stage1View {
  BigInt n0;      // outer instance
  BigInt cC, m4C, n5C;  // universal-block components of the inner presentation
};

Stage1View stage1_n_components(const BigInt& nval) {
  ChainState& st = chain_state();
  const StageEngine& e = st.engines[1];
  auto vals = unpack_values(Nat(nval), e.n_slots.count);
  Stage1View v;
  v.n0 = comp(vals, e.n_slots, "g1.n");
  v.cC = comp(vals, e.n_slots, "T.mp");
  v.m4C = comp(vals, e.n_slots, "NT.m");
  v.n5C = comp(vals, e.n_slots, "E.n");
  return v;
}

// truth of the stage-0 matrix at fixed components and witness x
bool matrix0_holds(const RootCtx& c, const Stage0View& v, const Stage0Pack& t,
                   const BigInt& cC, const BigInt& m4C, const BigInt& n5C,
                   const BigInt& x) {
  bool dl = c.tau(v.n1, t.m1, cC) && c.beta(v.n2, t.m2) && c.gamma(v.n3, v.w3);
  if (dl) return true;
  bool not_tau = c.dom(t.n4) && (m4C < t.n4 || !c.dom(m4C) ||
                                 (c.dom(x) && x >= m4C && c.ord(m4C, x)));
  return not_tau && c.ep(n5C);
}

Nat witness1(const RootCtx& c, const BigInt& nval) {
  ChainState& st = chain_state();
  const StageEngine& e1 = st.engines[1];
  Stage1View v = stage1_n_components(nval);
  auto t1n = witness_value(0, c.root, v.n0);
  BigInt t1 = *nat_exact(t1n);
  Stage0View v0 = stage0_n_components(v.n0);
  Stage0Pack tp = stage0_m_components(t1n);
  // least x making the inner matrix true at the carried witness
  BigInt x = 0;
  bool dl = c.tau(v0.n1, tp.m1, v.cC) && c.beta(v0.n2, tp.m2) && c.gamma(v0.n3, v0.w3);
  if (!dl) {
    if (!c.ep(v.n5C) || !c.dom(tp.n4)) {
      throw NatError("witness1: inner matrix unsatisfiable (not a member instance)");
    }
    if (v.m4C < tp.n4 || !c.dom(v.m4C)) {
      x = 0;
    } else {
      auto s = ord_successor(c.root, c.cert, v.m4C);
      if (!s) throw NatError("witness1: no extension for a chained point");
      x = *s;
    }
  }
  // pointwise-least refutation collection of full pinned length
  FunSpecPtr root = c.root;
  BigInt n0 = v.n0;
  auto rule = std::make_shared<RuleSeq>(
      t1n,
      [root, n0](const BigInt& m) {
        RootCtx rc = root_ctx(root);
        return refuter0(rc, n0, m);
      },
      nullptr, nullptr);
  Nat w = Nat::code_of(rule);
  auto wx = nat_exact(w, 512);
  if (wx) w = Nat(*wx);
  return pack_slots(e1.m_slots, {{"NT.mp", Nat(x)}, {"W", w}});
}

// least value refuting the stage-1 matrix at (nval, m)
Nat refuter1(const RootCtx& c, const BigInt& nval, const BigInt& m) {
  ChainState& st = chain_state();
  const StageEngine& e1 = st.engines[1];
  Stage1View v = stage1_n_components(nval);
  auto mvals = unpack_values(Nat(m), e1.m_slots.count);
  BigInt xm = comp(mvals, e1.m_slots, "NT.mp");
  Nat wm = comp_nat(mvals, e1.m_slots, "W");
  auto t1n = witness_value(0, c.root, v.n0);
  BigInt t1 = *nat_exact(t1n);
  Stage0View v0 = stage0_n_components(v.n0);
  Stage0Pack tp = stage0_m_components(t1n);
  if (!matrix0_holds(c, v0, tp, v.cC, v.m4C, v.n5C, xm)) return Nat(BigInt(0));
  if (!nat_eq(code_length(wm), t1n)) return Nat(BigInt(0));  // pinned length
  // otherwise some carried entry fails to refute; find the least such value
  std::optional<BigInt> best;
  for (BigInt mm = 0; mm < t1; ++mm) {
    Nat entry = code_at(wm, mm);
    auto evals = unpack_values(entry, st.engines[0].psi_forall_tags.size());
    std::map<std::string, BigInt> by_tag;
    for (size_t i = 0; i < st.engines[0].psi_forall_tags.size(); ++i) {
      auto ev = nat_exact(evals[i]);
      if (!ev) throw NatError("refuter1: entry component not materializable");
      by_tag[st.engines[0].psi_forall_tags[i]] = *ev;
    }
    BigInt cc = by_tag.at("T.mp");
    BigInt m4e = by_tag.at("NT.m");
    BigInt n5e = by_tag.at("E.n");
    Stage0Pack mp = stage0_m_components(Nat(mm));
    bool dl = c.tau(v0.n1, mp.m1, cc) && c.beta(v0.n2, mp.m2) && c.gamma(v0.n3, v0.w3);
    std::optional<BigInt> cand;
    if (dl) {
      cand = 0;
    } else if (c.ep(n5e) && c.dom(mp.n4)) {
      if (m4e < mp.n4 || !c.dom(m4e)) {
        cand = 0;
      } else {
        cand = ord_successor(c.root, c.cert, m4e);
      }
    }
    if (cand && (!best || *cand < *best)) best = *cand;
    if (best && *best == 0) break;
  }
  if (!best) {
    throw NatError("refuter1: instance is a valid witness (nothing to refute)");
  }
  return Nat(*best);
}

// --- stage 2 -----------------------------------------------------------------------

Nat witness2(const RootCtx& c, const BigInt& nval) {
  ChainState& st = chain_state();
  const StageEngine& e2 = st.engines[2];
  auto vals = unpack_values(Nat(nval), e2.n_slots.count);
  BigInt n0 = comp(vals, e2.n_slots, "g2.n");
  Nat t2 = witness_value(1, c.root, n0);
  FunSpecPtr root = c.root;
  auto rule = std::make_shared<RuleSeq>(
      t2,
      [root, n0](const BigInt& m) {
        RootCtx rc = root_ctx(root);
        return refuter1(rc, n0, m);
      },
      nullptr, nullptr);
  Nat w = Nat::code_of(rule);
  auto wx = nat_exact(w, 512);
  if (wx) return Nat(*wx);
  return w;
}

// --- witness and member values ------------------------------------------------------

Nat witness_value(int k, const FunSpecPtr& root, const BigInt& n) {
  ChainState& st = chain_state();
  auto key = std::make_tuple(k, static_cast<const FunSpecNode*>(root.get()), n);
  {
    std::lock_guard<std::mutex> lock(st.mu);
    auto it = st.witness_memo.find(key);
    if (it != st.witness_memo.end()) return it->second;
  }
  RootCtx c = root_ctx(root);
  Nat out;
  switch (k) {
    case 0: out = witness0(c, n); break;
    case 1: out = witness1(c, n); break;
    case 2: out = witness2(c, n); break;
    default: out = Nat(BigInt(0)); break;  // final stage: the matrix is witness-free
  }
  std::lock_guard<std::mutex> lock(st.mu);
  auto [it, inserted] = st.witness_memo.emplace(key, out);
  return it->second;
}

Nat member_value(int k, const FunSpecPtr& root, const BigInt& n) {
  ChainState& st = chain_state();
  auto key = std::make_tuple(k, static_cast<const FunSpecNode*>(root.get()), n);
  {
    std::lock_guard<std::mutex> lock(st.mu);
    auto it = st.value_memo.find(key);
    if (it != st.value_memo.end()) return it->second;
  }
  Nat out;
  if (k == 0) {
    RootCtx c = root_ctx(root);
    out = hdot_eval(root, c.cert, n);
  } else if (n % 2 == 0) {
    out = member_value(k - 1, root, n / 2);
  } else {
    BigInt j = (n - 1) / 2;
    LazySeq s;
    for (BigInt i = 0; i <= j; ++i) s.push_back(member_value(k - 1, root, i));
    for (BigInt i = 0; i <= j; ++i) s.push_back(witness_value(k - 1, root, i));
    out = encode_lazy(std::move(s));
  }
  std::lock_guard<std::mutex> lock(st.mu);
  auto [it, inserted] = st.value_memo.emplace(key, out);
  return it->second;
}

}  // namespace

Nat member_image_eval(const FunSpecNode& node, const BigInt& n) {
  if (node.stage > 8) throw NatError("member_image_eval: stage too deep");
  int k = static_cast<int>(node.stage);
  return member_value(k, node.inner, n);
}

const std::vector<FamilyStage>& family_chain() { return chain_state().stages; }

FunSpecPtr member_node(int stage_index, const FunSpecPtr& root) {
  ChainState& st = chain_state();
  std::lock_guard<std::mutex> lock(st.mu);
  auto key = std::make_pair(stage_index, static_cast<const FunSpecNode*>(root.get()));
  auto it = st.member_nodes.find(key);
  if (it != st.member_nodes.end()) return it->second;
  FunSpecPtr node = make_member_image(BigInt(stage_index), root);
  st.member_nodes[key] = node;
  st.keepalive.push_back(root);
  return node;
}

FunSpecPtr star_member(const FunSpecPtr& member, const FamilyStage& stage) {
  if (member->kind != FunSpecNode::Kind::MemberImage ||
      member->stage != stage.index) {
    throw NatError("star_member: expected a member image at the stage index");
  }
  return member_node(stage.index + 1, member->inner);
}

Nat least_witness(const FamilyStage& stage, const FunSpecPtr& member, const BigInt& n) {
  if (member->kind != FunSpecNode::Kind::MemberImage ||
      member->stage != stage.index) {
    throw NatError("least_witness: expected a member image at the stage index");
  }
  return witness_value(stage.index, member->inner, n);
}

namespace {

FunSpecPtr pullback_by_power_of_two(const FunSpecPtr& f, int k) {
  BigInt step = BigInt(1) << k;
  auto value = [&](const BigInt& i) { return *nat_exact(eval(f, step * i)); };
  switch (f->kind) {
    case FunSpecNode::Kind::EventuallyConstant: {
      Seq p;
      for (BigInt i = 0; step * i < BigInt(f->prefix.size()); ++i) p.push_back(value(i));
      return make_eventually_constant(std::move(p), f->tail);
    }
    case FunSpecNode::Kind::Periodic: {
      BigInt pl(f->prefix.size());
      BigInt cl(f->cycle.size());
      BigInt n0 = (pl + step - 1) / step;
      Seq p, c;
      for (BigInt i = 0; i < n0; ++i) p.push_back(value(i));
      for (BigInt j = 0; j < cl; ++j) c.push_back(value(n0 + j));
      return make_periodic(std::move(p), std::move(c));
    }
    default:
      throw NatError("spanning_check: target class unsupported for pullback");
  }
}

}  // namespace

AgreementReport spanning_check(int stage_index, const FunSpecPtr& f, size_t budget) {
  if (stage_index == 0) {
    return maximality_witness({}, f, budget).report;
  }
  FunSpecPtr target = pullback_by_power_of_two(f, stage_index);
  MaximalityWitness mw = maximality_witness({}, target, budget);
  FunSpecPtr lifted = member_node(stage_index, mw.member->inner);
  BigInt step = BigInt(1) << stage_index;
  AgreementReport out;
  for (const BigInt& p : mw.report.points) {
    BigInt q = step * p;
    if (nat_eq(eval(lifted, q), eval(f, q))) out.points.push_back(q);
  }
  out.exhausted_bound = step * mw.report.exhausted_bound;
  return out;
}

}  // namespace medf
