#include "medf/formula.hpp"

#include <cctype>
#include <sstream>

namespace medf {

namespace {

TermPtr mk_term(Term t) { return std::make_shared<const Term>(std::move(t)); }
FormulaPtr mk_formula(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

}  // namespace

TermPtr t_const(const BigInt& v) {
  Term t;
  t.kind = Term::Kind::Const;
  t.value = v;
  return mk_term(std::move(t));
}
TermPtr t_var(const std::string& name) {
  Term t;
  t.kind = Term::Kind::Var;
  t.var = name;
  return mk_term(std::move(t));
}
namespace {
TermPtr t_unary(Term::Kind k, TermPtr a) {
  Term t;
  t.kind = k;
  t.a = std::move(a);
  return mk_term(std::move(t));
}
TermPtr t_binary(Term::Kind k, TermPtr a, TermPtr b) {
  Term t;
  t.kind = k;
  t.a = std::move(a);
  t.b = std::move(b);
  return mk_term(std::move(t));
}
}  // namespace
TermPtr t_succ(TermPtr t) { return t_unary(Term::Kind::Succ, std::move(t)); }
TermPtr t_double(TermPtr t) { return t_unary(Term::Kind::Double, std::move(t)); }
TermPtr t_pair(TermPtr a, TermPtr b) { return t_binary(Term::Kind::Pair, std::move(a), std::move(b)); }
TermPtr t_fst(TermPtr t) { return t_unary(Term::Kind::Fst, std::move(t)); }
TermPtr t_snd(TermPtr t) { return t_unary(Term::Kind::Snd, std::move(t)); }
TermPtr t_len(TermPtr t) { return t_unary(Term::Kind::Len, std::move(t)); }
TermPtr t_at(TermPtr code, TermPtr index) { return t_binary(Term::Kind::At, std::move(code), std::move(index)); }
TermPtr t_oracle(TermPtr t) { return t_unary(Term::Kind::Oracle, std::move(t)); }

namespace {
FormulaPtr f_atom(Formula::Kind k, TermPtr a, TermPtr b) {
  Formula f;
  f.kind = k;
  f.t1 = std::move(a);
  f.t2 = std::move(b);
  return mk_formula(std::move(f));
}
}  // namespace

FormulaPtr f_eq(TermPtr a, TermPtr b) { return f_atom(Formula::Kind::Eq, std::move(a), std::move(b)); }
FormulaPtr f_lt(TermPtr a, TermPtr b) { return f_atom(Formula::Kind::Lt, std::move(a), std::move(b)); }
FormulaPtr f_seq_ext(TermPtr a, TermPtr b) { return f_atom(Formula::Kind::SeqExt, std::move(a), std::move(b)); }
FormulaPtr f_seq_pext(TermPtr a, TermPtr b) { return f_atom(Formula::Kind::SeqPExt, std::move(a), std::move(b)); }
FormulaPtr f_in_s2(TermPtr t) { return f_atom(Formula::Kind::InS2, std::move(t), nullptr); }

FormulaPtr f_not(FormulaPtr a) {
  Formula f;
  f.kind = Formula::Kind::Not;
  f.kids.push_back(std::move(a));
  return mk_formula(std::move(f));
}

FormulaPtr f_and(std::vector<FormulaPtr> kids) {
  if (kids.empty()) throw NatError("f_and: no children");
  if (kids.size() == 1) return kids[0];
  Formula f;
  f.kind = Formula::Kind::And;
  f.kids = std::move(kids);
  return mk_formula(std::move(f));
}

FormulaPtr f_or(std::vector<FormulaPtr> kids) {
  if (kids.empty()) throw NatError("f_or: no children");
  if (kids.size() == 1) return kids[0];
  Formula f;
  f.kind = Formula::Kind::Or;
  f.kids = std::move(kids);
  return mk_formula(std::move(f));
}

namespace {
FormulaPtr f_quant(Formula::Kind k, std::string var, TermPtr bound, FormulaPtr body) {
  Formula f;
  f.kind = k;
  f.var = std::move(var);
  f.bound = std::move(bound);
  f.body = std::move(body);
  return mk_formula(std::move(f));
}
}  // namespace

FormulaPtr f_forall(std::string var, FormulaPtr body) {
  return f_quant(Formula::Kind::Forall, std::move(var), nullptr, std::move(body));
}
FormulaPtr f_exists(std::string var, FormulaPtr body) {
  return f_quant(Formula::Kind::Exists, std::move(var), nullptr, std::move(body));
}
FormulaPtr f_bforall(std::string var, TermPtr bound, FormulaPtr body) {
  return f_quant(Formula::Kind::BForall, std::move(var), std::move(bound), std::move(body));
}
FormulaPtr f_bexists(std::string var, TermPtr bound, FormulaPtr body) {
  return f_quant(Formula::Kind::BExists, std::move(var), std::move(bound), std::move(body));
}

FormulaPtr f_ge(TermPtr a, TermPtr b) { return f_not(f_lt(std::move(a), std::move(b))); }
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
  return f_or({f_not(std::move(a)), std::move(b)});
}

std::string var_tag(const std::string& var) {
  auto pos = var.find('#');
  return pos == std::string::npos ? var : var.substr(0, pos);
}

// --- substitution -------------------------------------------------------------

namespace {

TermPtr subst_term(const TermPtr& t, const std::string& var, const TermPtr& repl) {
  if (!t) return t;
  switch (t->kind) {
    case Term::Kind::Const: return t;
    case Term::Kind::Var: return t->var == var ? repl : t;
    default: {
      TermPtr a = subst_term(t->a, var, repl);
      TermPtr b = subst_term(t->b, var, repl);
      if (a == t->a && b == t->b) return t;
      Term n = *t;
      n.a = a;
      n.b = b;
      return mk_term(std::move(n));
    }
  }
}

}  // namespace

FormulaPtr subst_var(const FormulaPtr& f, const std::string& var, const TermPtr& repl) {
  if (!f) return f;
  switch (f->kind) {
    case Formula::Kind::Eq:
    case Formula::Kind::Lt:
    case Formula::Kind::SeqExt:
    case Formula::Kind::SeqPExt:
    case Formula::Kind::InS2: {
      TermPtr a = subst_term(f->t1, var, repl);
      TermPtr b = subst_term(f->t2, var, repl);
      if (a == f->t1 && b == f->t2) return f;
      Formula n = *f;
      n.t1 = a;
      n.t2 = b;
      return mk_formula(std::move(n));
    }
    case Formula::Kind::Not:
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      Formula n = *f;
      bool changed = false;
      for (auto& k : n.kids) {
        FormulaPtr s = subst_var(k, var, repl);
        if (s != k) changed = true;
        k = s;
      }
      return changed ? mk_formula(std::move(n)) : f;
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
    case Formula::Kind::BForall:
    case Formula::Kind::BExists: {
      if (f->var == var) {
        // the bound term is outside the binder's scope
        TermPtr b = subst_term(f->bound, var, repl);
        if (b == f->bound) return f;
        Formula n = *f;
        n.bound = b;
        return mk_formula(std::move(n));
      }
      TermPtr b = subst_term(f->bound, var, repl);
      FormulaPtr body = subst_var(f->body, var, repl);
      if (b == f->bound && body == f->body) return f;
      Formula n = *f;
      n.bound = b;
      n.body = body;
      return mk_formula(std::move(n));
    }
  }
  return f;
}

// --- oracle substitutions -------------------------------------------------------

namespace {

TermPtr map_oracle_term(const TermPtr& t, const std::function<TermPtr(TermPtr)>& wrap) {
  if (!t) return t;
  switch (t->kind) {
    case Term::Kind::Const:
    case Term::Kind::Var:
      return t;
    case Term::Kind::Oracle: {
      TermPtr arg = map_oracle_term(t->a, wrap);
      return wrap(arg);
    }
    default: {
      Term n = *t;
      n.a = map_oracle_term(t->a, wrap);
      n.b = map_oracle_term(t->b, wrap);
      return mk_term(std::move(n));
    }
  }
}

FormulaPtr map_oracle(const FormulaPtr& f, const std::function<TermPtr(TermPtr)>& wrap) {
  if (!f) return f;
  Formula n = *f;
  n.t1 = map_oracle_term(f->t1, wrap);
  n.t2 = map_oracle_term(f->t2, wrap);
  n.bound = map_oracle_term(f->bound, wrap);
  for (auto& k : n.kids) k = map_oracle(k, wrap);
  n.body = map_oracle(f->body, wrap);
  return mk_formula(std::move(n));
}

}  // namespace

FormulaPtr subst_oracle_double(const FormulaPtr& f) {
  return map_oracle(f, [](TermPtr arg) { return t_oracle(t_double(std::move(arg))); });
}

FormulaPtr subst_oracle_even_code(const FormulaPtr& f) {
  return map_oracle(f, [](TermPtr arg) {
    return t_at(t_oracle(t_succ(t_succ(t_double(arg)))), arg);
  });
}

// --- evaluation -----------------------------------------------------------------

namespace {

struct EvalCtx {
  const OracleView& oracle;
  const EvalLimits& limits;
  BigInt max_use = -1;
  std::optional<BigInt> missing;
};

using Env = std::map<std::string, Nat>;

std::optional<Nat> eval_term(const TermPtr& t, const Env& env, EvalCtx& ctx) {
  switch (t->kind) {
    case Term::Kind::Const:
      return Nat(t->value);
    case Term::Kind::Var: {
      auto it = env.find(t->var);
      if (it == env.end()) throw NatError("unbound variable " + t->var);
      return it->second;
    }
    case Term::Kind::Succ: {
      auto a = eval_term(t->a, env, ctx);
      if (!a) return std::nullopt;
      return nat_succ(*a);
    }
    case Term::Kind::Double: {
      auto a = eval_term(t->a, env, ctx);
      if (!a) return std::nullopt;
      return nat_double(*a);
    }
    case Term::Kind::Pair: {
      auto a = eval_term(t->a, env, ctx);
      auto b = eval_term(t->b, env, ctx);
      if (!a || !b) return std::nullopt;
      return nat_pair(*a, *b);
    }
    case Term::Kind::Fst: {
      auto a = eval_term(t->a, env, ctx);
      if (!a) return std::nullopt;
      return nat_fst(*a);
    }
    case Term::Kind::Snd: {
      auto a = eval_term(t->a, env, ctx);
      if (!a) return std::nullopt;
      return nat_snd(*a);
    }
    case Term::Kind::Len: {
      auto a = eval_term(t->a, env, ctx);
      if (!a) return std::nullopt;
      return code_length(*a);
    }
    case Term::Kind::At: {
      auto a = eval_term(t->a, env, ctx);
      auto b = eval_term(t->b, env, ctx);
      if (!a || !b) return std::nullopt;
      auto i = nat_exact(*b, 64);
      if (!i) {
        // enormous index: entry is 0 only when the length is provably smaller
        auto len = nat_exact(code_length(*a), 30);
        if (len) return Nat(BigInt(0));
        return std::nullopt;
      }
      return code_at(*a, *i);
    }
    case Term::Kind::Oracle: {
      auto a = eval_term(t->a, env, ctx);
      if (!a) return std::nullopt;
      auto i = nat_exact(*a, 64);
      if (!i) return std::nullopt;  // astronomical read: beyond any prefix
      if (*i >= ctx.oracle.size()) {
        if (!ctx.missing || *ctx.missing > *i) ctx.missing = *i;
        return std::nullopt;
      }
      if (*i > ctx.max_use) ctx.max_use = *i;
      return ctx.oracle.at(*i);
    }
  }
  throw NatError("eval_term: unreachable");
}

Truth t_not(Truth v) {
  if (v == Truth::True) return Truth::False;
  if (v == Truth::False) return Truth::True;
  return Truth::Unknown;
}

// quantifier-free subformulas are cheap; evaluate them first inside
// connectives so structural refutations short-circuit the expensive parts
bool is_cheap(const Formula* f) {
  static std::map<const Formula*, bool> memo;
  static std::mutex mu;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(f);
    if (it != memo.end()) return it->second;
  }
  bool out = true;
  switch (f->kind) {
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
    case Formula::Kind::BForall:
    case Formula::Kind::BExists:
      out = false;
      break;
    default:
      for (const auto& k : f->kids) {
        if (!is_cheap(k.get())) {
          out = false;
          break;
        }
      }
      break;
  }
  std::lock_guard<std::mutex> lock(mu);
  memo[f] = out;
  return out;
}

Truth eval_formula(const FormulaPtr& f, Env& env, EvalCtx& ctx) {
  switch (f->kind) {
    case Formula::Kind::Eq:
    case Formula::Kind::Lt:
    case Formula::Kind::SeqExt:
    case Formula::Kind::SeqPExt:
    case Formula::Kind::InS2: {
      auto a = eval_term(f->t1, env, ctx);
      if (!a) return Truth::Unknown;
      std::optional<Nat> b;
      if (f->t2) {
        b = eval_term(f->t2, env, ctx);
        if (!b) return Truth::Unknown;
      }
      try {
        switch (f->kind) {
          case Formula::Kind::Eq:
            return nat_eq(*a, *b) ? Truth::True : Truth::False;
          case Formula::Kind::Lt:
            return nat_lt(*a, *b) ? Truth::True : Truth::False;
          case Formula::Kind::SeqExt:
          case Formula::Kind::SeqPExt: {
            Nat la = code_length(*a);
            Nat lb = code_length(*b);
            bool proper = f->kind == Formula::Kind::SeqPExt;
            if (proper ? !nat_lt(la, lb) : !nat_le(la, lb)) return Truth::False;
            auto lax = nat_exact(la, 40);
            if (!lax) return Truth::Unknown;
            for (BigInt i = 0; i < *lax; ++i) {
              if (!nat_eq(code_at(*a, i), code_at(*b, i))) return Truth::False;
            }
            return Truth::True;
          }
          case Formula::Kind::InS2:
            return code_length_is_even(*a) ? Truth::True : Truth::False;
          default:
            break;
        }
      } catch (const NatError&) {
        return Truth::Unknown;  // not decidable at this finite stage
      }
      return Truth::Unknown;
    }
    case Formula::Kind::Not:
      return t_not(eval_formula(f->kids[0], env, ctx));
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      bool conj = f->kind == Formula::Kind::And;
      Truth cut = conj ? Truth::False : Truth::True;
      bool unknown = false;
      for (int phase = 0; phase < 2; ++phase) {
        for (const auto& k : f->kids) {
          if (is_cheap(k.get()) != (phase == 0)) continue;
          Truth v = eval_formula(k, env, ctx);
          if (v == cut) return cut;
          if (v == Truth::Unknown) unknown = true;
        }
      }
      return unknown ? Truth::Unknown : t_not(cut);
    }
    case Formula::Kind::Forall: {
      // refutable at a finite stage, never confirmable
      for (BigInt i = 0; i <= ctx.limits.qbound; ++i) {
        env[f->var] = Nat(i);
        Truth v = eval_formula(f->body, env, ctx);
        env.erase(f->var);
        if (v == Truth::False) return Truth::False;
      }
      return Truth::Unknown;
    }
    case Formula::Kind::Exists: {
      for (BigInt i = 0; i <= ctx.limits.qbound; ++i) {
        env[f->var] = Nat(i);
        Truth v = eval_formula(f->body, env, ctx);
        env.erase(f->var);
        if (v == Truth::True) return Truth::True;
      }
      return Truth::Unknown;
    }
    case Formula::Kind::BForall:
    case Formula::Kind::BExists: {
      auto bv = eval_term(f->bound, env, ctx);
      if (!bv) return Truth::Unknown;
      auto range = nat_exact(*bv, 64);
      bool complete = true;
      BigInt limit;
      if (range && *range <= ctx.limits.bounded_cap) {
        limit = *range;
      } else {
        limit = ctx.limits.bounded_cap;
        complete = false;
      }
      bool exists_mode = f->kind == Formula::Kind::BExists;
      bool unknown = false;
      for (BigInt i = 0; i < limit; ++i) {
        env[f->var] = Nat(i);
        Truth v = eval_formula(f->body, env, ctx);
        env.erase(f->var);
        if (!exists_mode && v == Truth::False) return Truth::False;
        if (exists_mode && v == Truth::True) return Truth::True;
        if (v == Truth::Unknown) unknown = true;
      }
      if (!complete || unknown) return Truth::Unknown;
      return exists_mode ? Truth::False : Truth::True;
    }
  }
  return Truth::Unknown;
}

}  // namespace

Verdict3 eval_bounded(const FormulaPtr& f, const OracleView& oracle,
                      const EvalLimits& limits) {
  EvalCtx ctx{oracle, limits};
  Env env;
  Verdict3 out;
  Truth v = eval_formula(f, env, ctx);
  out.value = v;
  out.use = ctx.max_use;
  out.quantifier_bound = limits.qbound;
  out.missing_point = ctx.missing;
  return out;
}

// --- prenex ---------------------------------------------------------------------

namespace {

struct PBlock {
  bool universal;
  std::vector<std::string> vars;
};

struct PForm {
  std::vector<PBlock> blocks;
  FormulaPtr matrix;
};

struct FreshNames {
  size_t counter = 0;
  std::string fresh(const std::string& tag) {
    return var_tag(tag) + "#" + std::to_string(counter++);
  }
};

FormulaPtr nnf(const FormulaPtr& f, bool negate) {
  switch (f->kind) {
    case Formula::Kind::Eq:
    case Formula::Kind::Lt:
    case Formula::Kind::SeqExt:
    case Formula::Kind::SeqPExt:
    case Formula::Kind::InS2:
      return negate ? f_not(f) : f;
    case Formula::Kind::Not:
      return nnf(f->kids[0], !negate);
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<FormulaPtr> kids;
      for (const auto& k : f->kids) kids.push_back(nnf(k, negate));
      bool is_and = (f->kind == Formula::Kind::And) != negate;
      return is_and ? f_and(std::move(kids)) : f_or(std::move(kids));
    }
    case Formula::Kind::Forall:
      return negate ? f_exists(f->var, nnf(f->body, true))
                    : f_forall(f->var, nnf(f->body, false));
    case Formula::Kind::Exists:
      return negate ? f_forall(f->var, nnf(f->body, true))
                    : f_exists(f->var, nnf(f->body, false));
    case Formula::Kind::BForall:
      return negate ? f_bexists(f->var, f->bound, nnf(f->body, true))
                    : f_bforall(f->var, f->bound, nnf(f->body, false));
    case Formula::Kind::BExists:
      return negate ? f_bforall(f->var, f->bound, nnf(f->body, true))
                    : f_bexists(f->var, f->bound, nnf(f->body, false));
  }
  throw NatError("nnf: unreachable");
}

// projection of the i-th of k left-nested paired values
TermPtr proj_term(TermPtr p, size_t i, size_t k) {
  if (k == 1) return p;
  if (i == 0) {
    TermPtr t = std::move(p);
    for (size_t j = 0; j + 1 < k; ++j) t = t_fst(std::move(t));
    return t;
  }
  TermPtr t = std::move(p);
  for (size_t j = 0; j < k - 1 - i; ++j) t = t_fst(std::move(t));
  return t_snd(std::move(t));
}

// Deterministic minimal interleave of two block sequences.
std::vector<PBlock> merge_block_lists(const std::vector<PBlock>& a,
                                      const std::vector<PBlock>& b) {
  size_t na = a.size(), nb = b.size();
  // last: 0 none, 1 universal, 2 existential
  std::vector<int> memo((na + 1) * (nb + 1) * 3, -1);
  auto idx = [&](size_t i, size_t j, int last) {
    return (i * (nb + 1) + j) * 3 + last;
  };
  std::function<int(size_t, size_t, int)> cost = [&](size_t i, size_t j, int last) -> int {
    if (i == na && j == nb) return 0;
    int& m = memo[idx(i, j, last)];
    if (m >= 0) return m;
    int best = 1 << 20;
    if (i < na) {
      int pol = a[i].universal ? 1 : 2;
      int c = (pol == last ? 0 : 1) + cost(i + 1, j, pol);
      if (c < best) best = c;
    }
    if (j < nb) {
      int pol = b[j].universal ? 1 : 2;
      int c = (pol == last ? 0 : 1) + cost(i, j + 1, pol);
      if (c < best) best = c;
    }
    return m = best;
  };
  std::vector<PBlock> out;
  size_t i = 0, j = 0;
  int last = 0;
  auto emit = [&out](const PBlock& blk) {
    if (!out.empty() && out.back().universal == blk.universal) {
      out.back().vars.insert(out.back().vars.end(), blk.vars.begin(), blk.vars.end());
    } else {
      out.push_back(blk);
    }
  };
  while (i < na || j < nb) {
    int ca = 1 << 20, cb = 1 << 20;
    int pa = 0, pb = 0;
    if (i < na) {
      pa = a[i].universal ? 1 : 2;
      ca = (pa == last ? 0 : 1) + cost(i + 1, j, pa);
    }
    if (j < nb) {
      pb = b[j].universal ? 1 : 2;
      cb = (pb == last ? 0 : 1) + cost(i, j + 1, pb);
    }
    bool take_a;
    if (ca != cb) {
      take_a = ca < cb;
    } else if (i < na && j < nb && pa != pb) {
      // break ties toward continuing the current polarity, else universal
      if (pa == last || pb == last) {
        take_a = pa == last;
      } else {
        take_a = pa == 1;
      }
    } else {
      take_a = i < na;
    }
    if (take_a) {
      emit(a[i]);
      last = pa;
      ++i;
    } else {
      emit(b[j]);
      last = pb;
      ++j;
    }
  }
  return out;
}

PForm pren(const FormulaPtr& f, FreshNames& names);

PForm pren_connective(const FormulaPtr& f, FreshNames& names) {
  std::vector<PForm> parts;
  for (const auto& k : f->kids) parts.push_back(pren(k, names));
  PForm acc = std::move(parts[0]);
  for (size_t i = 1; i < parts.size(); ++i) {
    PForm& p = parts[i];
    std::vector<PBlock> merged = merge_block_lists(acc.blocks, p.blocks);
    std::vector<FormulaPtr> kids = {acc.matrix, p.matrix};
    FormulaPtr matrix =
        f->kind == Formula::Kind::And ? f_and(std::move(kids)) : f_or(std::move(kids));
    acc = PForm{std::move(merged), std::move(matrix)};
  }
  return acc;
}

// Bounded quantifier over a prenexed body: hoist blocks of the same
// polarity, collect blocks of the opposite polarity into coded witness
// sequences.  For a bounded universal the collected existential witness is
// length-pinned so that the least witness of the resulting form is the code
// of the pointwise-least witness sequence of full length.
PForm pren_bounded(bool universal, const std::string& v, const TermPtr& bound,
                   PForm body, FreshNames& names) {
  std::vector<PBlock> out;
  std::vector<FormulaPtr> pins;
  size_t at = 0;
  while (at < body.blocks.size()) {
    PBlock& blk = body.blocks[at];
    if (blk.universal == universal) {
      out.push_back(blk);  // commutes with the bounded quantifier
      ++at;
      continue;
    }
    std::string w = names.fresh("W");
    TermPtr entry = t_at(t_var(w), t_var(v));
    size_t k = blk.vars.size();
    for (size_t i = 0; i < k; ++i) {
      body.matrix = subst_var(body.matrix, blk.vars[i], proj_term(entry, i, k));
    }
    if (universal) pins.push_back(f_eq(t_len(t_var(w)), bound));
    out.push_back(PBlock{!universal, {w}});
    ++at;
  }
  FormulaPtr matrix = universal ? f_bforall(v, bound, body.matrix)
                                : f_bexists(v, bound, body.matrix);
  if (!pins.empty()) {
    pins.push_back(matrix);
    matrix = f_and(std::move(pins));
  }
  // merge adjacent same-polarity blocks
  std::vector<PBlock> norm;
  for (auto& blk : out) {
    if (!norm.empty() && norm.back().universal == blk.universal) {
      norm.back().vars.insert(norm.back().vars.end(), blk.vars.begin(), blk.vars.end());
    } else {
      norm.push_back(std::move(blk));
    }
  }
  return PForm{std::move(norm), std::move(matrix)};
}

PForm pren(const FormulaPtr& f, FreshNames& names) {
  switch (f->kind) {
    case Formula::Kind::Eq:
    case Formula::Kind::Lt:
    case Formula::Kind::SeqExt:
    case Formula::Kind::SeqPExt:
    case Formula::Kind::InS2:
    case Formula::Kind::Not:
      return PForm{{}, f};
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return pren_connective(f, names);
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      bool universal = f->kind == Formula::Kind::Forall;
      std::string nv = names.fresh(f->var);
      FormulaPtr body = subst_var(f->body, f->var, t_var(nv));
      PForm p = pren(body, names);
      if (!p.blocks.empty() && p.blocks.front().universal == universal) {
        p.blocks.front().vars.insert(p.blocks.front().vars.begin(), nv);
      } else {
        p.blocks.insert(p.blocks.begin(), PBlock{universal, {nv}});
      }
      return p;
    }
    case Formula::Kind::BForall:
    case Formula::Kind::BExists: {
      bool universal = f->kind == Formula::Kind::BForall;
      std::string nv = names.fresh(f->var);
      FormulaPtr body = subst_var(f->body, f->var, t_var(nv));
      PForm p = pren(body, names);
      return pren_bounded(universal, nv, f->bound, std::move(p), names);
    }
  }
  throw NatError("pren: unreachable");
}

PForm pren_full(const FormulaPtr& f) {
  FreshNames names;
  return pren(nnf(f, false), names);
}

FormulaPtr rebuild(const std::vector<PBlock>& blocks, FormulaPtr matrix) {
  FormulaPtr out = std::move(matrix);
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
    for (auto v = it->vars.rbegin(); v != it->vars.rend(); ++v) {
      out = it->universal ? f_forall(*v, out) : f_exists(*v, out);
    }
  }
  return out;
}

Classification classify_blocks(const std::vector<PBlock>& blocks) {
  Classification c;
  if (blocks.empty()) {
    c.side = Classification::Side::Delta;
    c.level = 0;
    return c;
  }
  c.side = blocks.front().universal ? Classification::Side::Pi
                                    : Classification::Side::Sigma;
  c.level = static_cast<int>(blocks.size());
  return c;
}

}  // namespace

FormulaPtr prenex(const FormulaPtr& f) {
  PForm p = pren_full(f);
  return rebuild(p.blocks, p.matrix);
}

Classification classify(const FormulaPtr& f) {
  PForm p = pren_full(f);
  return classify_blocks(p.blocks);
}

std::string classification_to_string(const Classification& c) {
  switch (c.side) {
    case Classification::Side::Delta: return "Delta" + std::to_string(c.level);
    case Classification::Side::Pi: return "Pi" + std::to_string(c.level);
    case Classification::Side::Sigma: return "Sigma" + std::to_string(c.level);
  }
  return "?";
}

Nat pack_values(const std::vector<Nat>& vals) {
  if (vals.empty()) return Nat(BigInt(0));
  Nat acc = vals[0];
  for (size_t i = 1; i < vals.size(); ++i) acc = nat_pair(acc, vals[i]);
  return acc;
}

std::vector<Nat> unpack_values(const Nat& packed, size_t count) {
  if (count == 0) return {};
  std::vector<Nat> out(count);
  Nat cur = packed;
  for (size_t i = count; i-- > 1;) {
    out[i] = nat_snd(cur);
    cur = nat_fst(cur);
  }
  out[0] = cur;
  return out;
}

ForallExistsForm to_forall_exists(const FormulaPtr& f) {
  PForm p = pren_full(f);
  FreshNames names;
  names.counter = 1u << 20;  // distinct from prenex-produced names
  if (p.blocks.empty()) {
    p.blocks.push_back(PBlock{true, {names.fresh("pad")}});
  }
  if (!p.blocks.front().universal) {
    p.blocks.insert(p.blocks.begin(), PBlock{true, {names.fresh("pad")}});
  }
  if (p.blocks.size() == 1) {
    p.blocks.push_back(PBlock{false, {names.fresh("pad")}});
  }
  ForallExistsForm out;
  out.n_var = "n!";
  out.m_var = "m!";
  const PBlock& b1 = p.blocks[0];
  const PBlock& b2 = p.blocks[1];
  FormulaPtr matrix = p.matrix;
  for (size_t i = 0; i < b1.vars.size(); ++i) {
    matrix = subst_var(matrix, b1.vars[i], proj_term(t_var(out.n_var), i, b1.vars.size()));
    out.n_slots.push_back(PackSlot{var_tag(b1.vars[i]), i});
  }
  for (size_t i = 0; i < b2.vars.size(); ++i) {
    matrix = subst_var(matrix, b2.vars[i], proj_term(t_var(out.m_var), i, b2.vars.size()));
    out.m_slots.push_back(PackSlot{var_tag(b2.vars[i]), i});
  }
  std::vector<PBlock> rest(p.blocks.begin() + 2, p.blocks.end());
  out.psi = rebuild(rest, matrix);
  out.psi_class = classify_blocks(rest);
  return out;
}

// --- textual form ---------------------------------------------------------------

namespace {

void term_sexpr(const TermPtr& t, std::ostringstream& os) {
  switch (t->kind) {
    case Term::Kind::Const: os << t->value.str(); return;
    case Term::Kind::Var: os << t->var; return;
    case Term::Kind::Succ: os << "(succ "; term_sexpr(t->a, os); os << ")"; return;
    case Term::Kind::Double: os << "(dbl "; term_sexpr(t->a, os); os << ")"; return;
    case Term::Kind::Pair:
      os << "(pair ";
      term_sexpr(t->a, os);
      os << " ";
      term_sexpr(t->b, os);
      os << ")";
      return;
    case Term::Kind::Fst: os << "(fst "; term_sexpr(t->a, os); os << ")"; return;
    case Term::Kind::Snd: os << "(snd "; term_sexpr(t->a, os); os << ")"; return;
    case Term::Kind::Len: os << "(len "; term_sexpr(t->a, os); os << ")"; return;
    case Term::Kind::At:
      os << "(at ";
      term_sexpr(t->a, os);
      os << " ";
      term_sexpr(t->b, os);
      os << ")";
      return;
    case Term::Kind::Oracle: os << "(h "; term_sexpr(t->a, os); os << ")"; return;
  }
}

void formula_sexpr(const FormulaPtr& f, std::ostringstream& os) {
  auto atom2 = [&](const char* name) {
    os << "(" << name << " ";
    term_sexpr(f->t1, os);
    os << " ";
    term_sexpr(f->t2, os);
    os << ")";
  };
  switch (f->kind) {
    case Formula::Kind::Eq: atom2("="); return;
    case Formula::Kind::Lt: atom2("<"); return;
    case Formula::Kind::SeqExt: atom2("ext"); return;
    case Formula::Kind::SeqPExt: atom2("pext"); return;
    case Formula::Kind::InS2:
      os << "(s2 ";
      term_sexpr(f->t1, os);
      os << ")";
      return;
    case Formula::Kind::Not:
      os << "(not ";
      formula_sexpr(f->kids[0], os);
      os << ")";
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      os << (f->kind == Formula::Kind::And ? "(and" : "(or");
      for (const auto& k : f->kids) {
        os << " ";
        formula_sexpr(k, os);
      }
      os << ")";
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      os << (f->kind == Formula::Kind::Forall ? "(all " : "(ex ") << f->var << " ";
      formula_sexpr(f->body, os);
      os << ")";
      return;
    case Formula::Kind::BForall:
    case Formula::Kind::BExists:
      os << (f->kind == Formula::Kind::BForall ? "(ball " : "(bex ") << f->var << " ";
      term_sexpr(f->bound, os);
      os << " ";
      formula_sexpr(f->body, os);
      os << ")";
      return;
  }
}

struct Parser {
  const std::string& s;
  size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string token() {
    skip();
    size_t start = pos;
    while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) &&
           s[pos] != '(' && s[pos] != ')') {
      ++pos;
    }
    if (start == pos) throw NatError("parse: token expected at " + std::to_string(pos));
    return s.substr(start, pos - start);
  }

  TermPtr term() {
    skip();
    if (pos >= s.size()) throw NatError("parse: unexpected end");
    if (s[pos] != '(') {
      std::string tok = token();
      if (std::isdigit(static_cast<unsigned char>(tok[0]))) return t_const(BigInt(tok));
      return t_var(tok);
    }
    ++pos;  // (
    std::string head = token();
    TermPtr out;
    if (head == "succ") out = t_succ(term());
    else if (head == "dbl") out = t_double(term());
    else if (head == "pair") { TermPtr a = term(); out = t_pair(a, term()); }
    else if (head == "fst") out = t_fst(term());
    else if (head == "snd") out = t_snd(term());
    else if (head == "len") out = t_len(term());
    else if (head == "at") { TermPtr a = term(); out = t_at(a, term()); }
    else if (head == "h") out = t_oracle(term());
    else throw NatError("parse: unknown term head " + head);
    if (!eat(')')) throw NatError("parse: expected )");
    return out;
  }

  FormulaPtr formula() {
    skip();
    if (!eat('(')) throw NatError("parse: expected (");
    std::string head = token();
    FormulaPtr out;
    if (head == "=") { TermPtr a = term(); out = f_eq(a, term()); }
    else if (head == "<") { TermPtr a = term(); out = f_lt(a, term()); }
    else if (head == "ext") { TermPtr a = term(); out = f_seq_ext(a, term()); }
    else if (head == "pext") { TermPtr a = term(); out = f_seq_pext(a, term()); }
    else if (head == "s2") out = f_in_s2(term());
    else if (head == "not") out = f_not(formula());
    else if (head == "and" || head == "or") {
      std::vector<FormulaPtr> kids;
      while (true) {
        skip();
        if (pos < s.size() && s[pos] == ')') break;
        kids.push_back(formula());
      }
      out = head == "and" ? f_and(std::move(kids)) : f_or(std::move(kids));
    } else if (head == "all" || head == "ex") {
      std::string v = token();
      FormulaPtr body = formula();
      out = head == "all" ? f_forall(v, body) : f_exists(v, body);
    } else if (head == "ball" || head == "bex") {
      std::string v = token();
      TermPtr b = term();
      FormulaPtr body = formula();
      out = head == "ball" ? f_bforall(v, b, body) : f_bexists(v, b, body);
    } else {
      throw NatError("parse: unknown formula head " + head);
    }
    if (!eat(')')) throw NatError("parse: expected )");
    return out;
  }
};

}  // namespace

std::string to_sexpr(const FormulaPtr& f) {
  std::ostringstream os;
  formula_sexpr(f, os);
  return os.str();
}

std::string to_sexpr(const TermPtr& t) {
  std::ostringstream os;
  term_sexpr(t, os);
  return os.str();
}

FormulaPtr parse_formula(const std::string& sexpr) {
  Parser p{sexpr};
  FormulaPtr f = p.formula();
  p.skip();
  if (p.pos != sexpr.size()) throw NatError("parse: trailing input");
  return f;
}

}  // namespace medf
