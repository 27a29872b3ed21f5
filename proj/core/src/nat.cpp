#include "medf/nat.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace medf {

namespace {

constexpr size_t kBitsCap = size_t(1) << 24;  // "astronomical" marker
constexpr unsigned kMaterializeDefaultBits = 4096;

size_t bigint_bits(const BigInt& v) {
  if (v == 0) return 1;
  return boost::multiprecision::msb(v) + 1;
}

}  // namespace

Nat Nat::pair_of(Nat a, Nat b) {
  Nat n;
  n.kind_ = Kind::PairV;
  n.pa_ = std::make_shared<const Nat>(std::move(a));
  n.pb_ = std::make_shared<const Nat>(std::move(b));
  return n;
}

Nat Nat::code_of(SeqRepPtr rep) {
  Nat n;
  n.kind_ = Kind::CodeV;
  n.seq_ = std::move(rep);
  return n;
}

bool Nat::same_node(const Nat& o) const {
  if (kind_ != o.kind_) return false;
  switch (kind_) {
    case Kind::Exact: return exact_ == o.exact_;
    case Kind::PairV: return pa_ == o.pa_ && pb_ == o.pb_;
    case Kind::CodeV: return seq_ == o.seq_;
  }
  return false;
}

BigInt cantor_pair(const BigInt& a, const BigInt& b) {
  BigInt s = a + b;
  return s * (s + 1) / 2 + b;
}

std::pair<BigInt, BigInt> cantor_unpair(const BigInt& p) {
  if (p < 0) throw NatError("unpair of negative");
  BigInt w = (boost::multiprecision::sqrt(BigInt(8) * p + 1) - 1) / 2;
  // guard rounding of integer sqrt
  while (w * (w + 1) / 2 > p) --w;
  while ((w + 1) * (w + 2) / 2 <= p) ++w;
  BigInt t = w * (w + 1) / 2;
  BigInt b = p - t;
  BigInt a = w - b;
  return {a, b};
}

std::optional<BigInt> nat_exact(const Nat& n, unsigned max_bits) {
  switch (n.kind()) {
    case Nat::Kind::Exact: {
      if (bigint_bits(n.exact_value()) > max_bits) return std::nullopt;
      return n.exact_value();
    }
    case Nat::Kind::PairV: {
      auto a = nat_exact(n.pair_first(), max_bits);
      if (!a) return std::nullopt;
      auto b = nat_exact(n.pair_second(), max_bits);
      if (!b) return std::nullopt;
      BigInt v = cantor_pair(*a, *b);
      if (bigint_bits(v) > max_bits) return std::nullopt;
      return v;
    }
    case Nat::Kind::CodeV: {
      const auto& rep = n.code_seq();
      auto len = nat_exact(rep->length(), 30);
      if (!len) return std::nullopt;
      BigInt acc = 0;
      for (BigInt i = 0; i < *len; ++i) {
        auto e = nat_exact(rep->at(i), max_bits);
        if (!e) return std::nullopt;
        acc = cantor_pair(acc, *e) + 1;
        if (bigint_bits(acc) > max_bits) return std::nullopt;
      }
      return acc;
    }
  }
  return std::nullopt;
}

namespace {

// bit-length lower bound of encode(0^len)
size_t tower_bits(size_t len) {
  // values 0,1,2,4,11,67,2279,...: bits roughly double per entry
  size_t b = 1;
  for (size_t k = 0; k < len; ++k) {
    if (b >= kBitsCap / 2) return kBitsCap;
    b = b * 2 - 1;
    if (b < 1) b = 1;
  }
  return b;
}

}  // namespace

size_t nat_bits_lower_bound(const Nat& n) {
  switch (n.kind()) {
    case Nat::Kind::Exact:
      return bigint_bits(n.exact_value());
    case Nat::Kind::PairV: {
      size_t a = nat_bits_lower_bound(n.pair_first());
      size_t b = nat_bits_lower_bound(n.pair_second());
      size_t m = a > b ? a : b;
      // pair(a,b) >= max(a,b) and pair(a,b) >= tri(max) when max >= 1
      size_t grown = m >= kBitsCap / 2 ? kBitsCap : (m >= 2 ? 2 * m - 2 : 1);
      return grown > m ? grown : m;
    }
    case Nat::Kind::CodeV: {
      const auto& rep = n.code_seq();
      auto len = nat_exact(rep->length(), 30);
      if (!len) return kBitsCap;  // symbolic length: enormous
      if (*len > 64) return kBitsCap;
      return tower_bits(static_cast<size_t>(*len));
    }
  }
  return 1;
}

namespace {

// Prefix view of a backing sequence, sharing the original rep.
struct PrefixRep final : SeqRep {
  SeqRepPtr base;
  Nat len;
  PrefixRep(SeqRepPtr b, Nat l) : base(std::move(b)), len(std::move(l)) {}
  Nat length() const override { return len; }
  Nat at(const BigInt& i) const override { return base->at(i); }
  const void* family() const override { return base->family(); }
};

// Value-level pair view: n = pair(x, y).  Total on naturals.
std::pair<Nat, Nat> pair_view(const Nat& n);

// first-difference memo for sequences of distinct generating functions
struct DiffEntry {
  BigInt scanned = 0;                // entries [0, scanned) known equal
  std::optional<BigInt> diff;        // least differing index, when known
};
std::map<std::pair<const void*, const void*>, DiffEntry> g_diff_memo;
std::mutex g_diff_mutex;

bool seqs_equal(const SeqRepPtr& a, const SeqRepPtr& b);

bool nat_eq_impl(const Nat& a, const Nat& b) {
  if (a.same_node(b)) return true;
  if (a.is_exact() && b.is_exact()) return a.exact_value() == b.exact_value();
  if (a.is_exact() || b.is_exact()) {
    const Nat& e = a.is_exact() ? a : b;
    const Nat& s = a.is_exact() ? b : a;
    size_t eb = bigint_bits(e.exact_value());
    if (nat_bits_lower_bound(s) > eb) return false;
    auto v = nat_exact(s, static_cast<unsigned>(eb + 2));
    if (!v) return false;  // s exceeds the budget, hence exceeds e
    return *v == e.exact_value();
  }
  if (a.kind() == Nat::Kind::PairV && b.kind() == Nat::Kind::PairV) {
    return nat_eq_impl(a.pair_first(), b.pair_first()) &&
           nat_eq_impl(a.pair_second(), b.pair_second());
  }
  if (a.kind() == Nat::Kind::CodeV && b.kind() == Nat::Kind::CodeV) {
    return seqs_equal(a.code_seq(), b.code_seq());
  }
  // mixed PairV / CodeV: compare through the pair view
  auto [ax, ay] = pair_view(a);
  auto [bx, by] = pair_view(b);
  return nat_eq_impl(ax, bx) && nat_eq_impl(ay, by);
}

bool seqs_equal(const SeqRepPtr& a, const SeqRepPtr& b) {
  if (a == b) return true;
  Nat la = a->length(), lb = b->length();
  if (!nat_eq_impl(la, lb)) return false;  // coding is injective across lengths
  if (a->family() && a->family() == b->family()) return true;
  auto len = nat_exact(la, 30);
  if (len && *len <= (BigInt(1) << 20)) {
    if (a->family() && b->family()) {
      const void* fa = a->family();
      const void* fb = b->family();
      auto key = fa < fb ? std::make_pair(fa, fb) : std::make_pair(fb, fa);
      std::lock_guard<std::mutex> lock(g_diff_mutex);
      DiffEntry& de = g_diff_memo[key];
      if (de.diff && *de.diff < *len) return false;
      if (de.scanned >= *len) return true;
      for (BigInt i = de.scanned; i < *len; ++i) {
        if (!nat_eq_impl(a->at(i), b->at(i))) {
          de.diff = i;
          return false;
        }
        de.scanned = i + 1;
      }
      return true;
    }
    for (BigInt i = 0; i < *len; ++i) {
      if (!nat_eq_impl(a->at(i), b->at(i))) return false;
    }
    return true;
  }
  throw NatError("equality of rule sequences with enormous length");
}

std::pair<Nat, Nat> pair_view(const Nat& n) {
  switch (n.kind()) {
    case Nat::Kind::Exact: {
      auto [x, y] = cantor_unpair(n.exact_value());
      return {Nat(x), Nat(y)};
    }
    case Nat::Kind::PairV:
      return {n.pair_first(), n.pair_second()};
    case Nat::Kind::CodeV: {
      // encode(q) = pair(encode(q'), last) + 1 where q = q'^<last>;
      // shift one step along the pairing diagonal to view it as a raw pair.
      const auto& rep = n.code_seq();
      Nat len = rep->length();
      if (nat_is_zero(len)) return {Nat(BigInt(0)), Nat(BigInt(0))};
      auto lx = nat_exact(len, 30);
      if (!lx) throw NatError("pair view of code with symbolic length");
      Nat last = rep->at(*lx - 1);
      if (*lx == 1) {
        // pair(0, last) + 1 = pair(last + 1, 0)
        return {nat_succ(last), Nat(BigInt(0))};
      }
      // prefix code is itself a CodeV over the same rep, one entry shorter
      Nat pc = Nat::code_of(std::make_shared<PrefixRep>(rep, Nat(*lx - 1)));
      // pair(pc, last) + 1 = pair(pc - 1, last + 1) since pc >= 1 here
      return {nat_pred(pc), nat_succ(last)};
    }
  }
  throw NatError("pair view: unreachable");
}

}  // namespace

bool nat_eq(const Nat& a, const Nat& b) { return nat_eq_impl(a, b); }

bool nat_is_zero(const Nat& n) {
  switch (n.kind()) {
    case Nat::Kind::Exact: return n.exact_value() == 0;
    case Nat::Kind::PairV:
      return nat_is_zero(n.pair_first()) && nat_is_zero(n.pair_second());
    case Nat::Kind::CodeV: return nat_is_zero(n.code_seq()->length());
  }
  return false;
}

bool nat_lt(const Nat& a, const Nat& b) {
  if (a.same_node(b)) return false;
  if (a.is_exact() && b.is_exact()) return a.exact_value() < b.exact_value();
  if (a.is_exact()) {
    size_t ab = bigint_bits(a.exact_value());
    if (nat_bits_lower_bound(b) > ab) return true;
    auto v = nat_exact(b, static_cast<unsigned>(ab + 2));
    if (!v) return true;
    return a.exact_value() < *v;
  }
  if (b.is_exact()) {
    size_t bb = bigint_bits(b.exact_value());
    if (nat_bits_lower_bound(a) > bb) return false;
    auto v = nat_exact(a, static_cast<unsigned>(bb + 2));
    if (!v) return false;
    return *v < b.exact_value();
  }
  auto va = nat_exact(a);
  auto vb = nat_exact(b);
  if (va && vb) return *va < *vb;
  // nat_exact aborts only when the value exceeds the bit budget, so a
  // one-sided failure decides the order.
  if (va && !vb) return true;
  if (vb && !va) return false;
  if (nat_eq_impl(a, b)) return false;
  throw NatError("order of two symbolic naturals is not decidable here");
}

Nat nat_succ(const Nat& n) {
  if (n.is_exact()) return Nat(n.exact_value() + 1);
  auto [x, y] = pair_view(n);
  if (!nat_is_zero(x)) return Nat::pair_of(nat_pred(x), nat_succ(y));
  return Nat::pair_of(nat_succ(y), Nat(BigInt(0)));
}

Nat nat_pred(const Nat& n) {
  if (n.is_exact()) {
    if (n.exact_value() == 0) throw NatError("pred of zero");
    return Nat(n.exact_value() - 1);
  }
  if (n.kind() == Nat::Kind::CodeV) {
    // encode(q) - 1 = pair(encode(q without last), last entry)
    const auto& rep = n.code_seq();
    Nat len = rep->length();
    if (nat_is_zero(len)) throw NatError("pred of zero code");
    auto lx = nat_exact(len, 30);
    if (!lx) throw NatError("pred of code with symbolic length");
    Nat last = rep->at(*lx - 1);
    Nat pc = *lx == 1 ? Nat(BigInt(0))
                      : Nat::code_of(std::make_shared<PrefixRep>(rep, Nat(*lx - 1)));
    return Nat::pair_of(pc, last);
  }
  auto [x, y] = pair_view(n);
  if (!nat_is_zero(y)) return Nat::pair_of(nat_succ(x), nat_pred(y));
  if (!nat_is_zero(x)) return Nat::pair_of(Nat(BigInt(0)), nat_pred(x));
  throw NatError("pred of zero");
}

Nat nat_add_small(const Nat& n, const BigInt& k) {
  if (k < 0) throw NatError("nat_add_small negative");
  if (n.is_exact()) return Nat(n.exact_value() + k);
  Nat r = n;
  for (BigInt i = 0; i < k; ++i) r = nat_succ(r);
  return r;
}

Nat nat_double(const Nat& n) {
  if (n.is_exact()) return Nat(n.exact_value() * 2);
  auto v = nat_exact(n);
  if (v) return Nat(*v * 2);
  throw NatError("double of a symbolic natural");
}

Nat nat_pair(const Nat& a, const Nat& b) {
  if (a.is_exact() && b.is_exact()) {
    if (bigint_bits(a.exact_value()) <= 2048 && bigint_bits(b.exact_value()) <= 2048) {
      return Nat(cantor_pair(a.exact_value(), b.exact_value()));
    }
  }
  return Nat::pair_of(a, b);
}

Nat nat_fst(const Nat& p) { return pair_view(p).first; }
Nat nat_snd(const Nat& p) { return pair_view(p).second; }

Nat code_length(const Nat& n) {
  switch (n.kind()) {
    case Nat::Kind::Exact: {
      BigInt v = n.exact_value();
      BigInt len = 0;
      while (v != 0) {
        auto [p, last] = cantor_unpair(v - 1);
        (void)last;
        v = p;
        ++len;
      }
      return Nat(len);
    }
    case Nat::Kind::CodeV:
      return n.code_seq()->length();
    case Nat::Kind::PairV: {
      if (nat_is_zero(n)) return Nat(BigInt(0));
      auto [x, y] = pair_view(n);
      // decode(n): n - 1 = pair(pc, last); stepping back along the diagonal
      Nat pc = nat_is_zero(y) ? Nat(BigInt(0)) : nat_succ(x);
      if (nat_is_zero(y) && !nat_is_zero(x)) {
        // n - 1 = pair(0, x - 1): prefix code 0, so length 1
        return Nat(BigInt(1));
      }
      return nat_add_small(code_length(pc), 1);
    }
  }
  throw NatError("code_length: unreachable");
}

Nat code_at(const Nat& n, const BigInt& i) {
  if (i < 0) throw NatError("code_at negative index");
  switch (n.kind()) {
    case Nat::Kind::Exact: {
      BigInt v = n.exact_value();
      std::vector<BigInt> rev;
      while (v != 0) {
        auto [p, last] = cantor_unpair(v - 1);
        rev.push_back(last);
        v = p;
      }
      BigInt len = BigInt(rev.size());
      if (i >= len) return Nat(BigInt(0));
      return Nat(rev[static_cast<size_t>(len - 1 - i)]);
    }
    case Nat::Kind::CodeV: {
      const auto& rep = n.code_seq();
      if (!nat_lt(Nat(i), rep->length())) return Nat(BigInt(0));
      return rep->at(i);
    }
    case Nat::Kind::PairV: {
      if (nat_is_zero(n)) return Nat(BigInt(0));
      Nat len = code_length(n);
      auto lx = nat_exact(len, 30);
      if (!lx) throw NatError("code_at on code with symbolic length");
      if (i >= *lx) return Nat(BigInt(0));
      auto [x, y] = pair_view(n);
      Nat pc, last;
      if (!nat_is_zero(y)) {
        pc = nat_succ(x);
        last = nat_pred(y);
      } else {
        pc = Nat(BigInt(0));
        last = nat_pred(x);
      }
      if (i == *lx - 1) return last;
      return code_at(pc, i);
    }
  }
  throw NatError("code_at: unreachable");
}

bool code_length_is_even(const Nat& n) {
  Nat len = code_length(n);
  auto lx = nat_exact(len, 64);
  if (!lx) throw NatError("parity of symbolic code length");
  return (*lx % 2) == 0;
}

std::string nat_to_string(const Nat& n) {
  auto v = nat_exact(n, 512);
  if (v) return v->str();
  switch (n.kind()) {
    case Nat::Kind::Exact:
      return n.exact_value().str();
    case Nat::Kind::PairV:
      return "pair(" + nat_to_string(n.pair_first()) + "," +
             nat_to_string(n.pair_second()) + ")";
    case Nat::Kind::CodeV: {
      const auto& rep = n.code_seq();
      std::ostringstream os;
      os << "code[len=" << nat_to_string(rep->length()) << "](";
      auto len = nat_exact(rep->length(), 30);
      if (len) {
        BigInt show = *len < 8 ? *len : BigInt(8);
        for (BigInt i = 0; i < show; ++i) {
          if (i > 0) os << ",";
          os << nat_to_string(rep->at(i));
        }
        if (*len > show) os << ",...";
      } else {
        os << "rule";
      }
      os << ")";
      return os.str();
    }
  }
  return "?";
}

}  // namespace medf
