#include "medf/coding.hpp"

namespace medf {

BigInt pair_nat(const BigInt& a, const BigInt& b) { return cantor_pair(a, b); }

std::pair<BigInt, BigInt> unpair_nat(const BigInt& p) { return cantor_unpair(p); }

BigInt encode_seq(const Seq& q) {
  BigInt acc = 0;
  for (const BigInt& a : q) acc = cantor_pair(acc, a) + 1;
  return acc;
}

Seq decode_code(const BigInt& n) {
  if (n < 0) throw NatError("decode of negative");
  Seq rev;
  BigInt v = n;
  while (v != 0) {
    auto [p, last] = cantor_unpair(v - 1);
    rev.push_back(last);
    v = p;
  }
  return Seq(rev.rbegin(), rev.rend());
}

bool s2_member(const BigInt& code) { return decode_code(code).size() % 2 == 0; }

std::pair<Seq, Seq> split_even(const BigInt& code) {
  Seq q = decode_code(code);
  if (q.size() % 2 != 0) throw NatError("split_even: odd-length code");
  size_t h = q.size() / 2;
  return {Seq(q.begin(), q.begin() + h), Seq(q.begin() + h, q.end())};
}

Seq concat_seqs(const Seq& u, const Seq& v) {
  Seq r = u;
  r.insert(r.end(), v.begin(), v.end());
  return r;
}

Nat encode_lazy(LazySeq entries) {
  Nat code = Nat::code_of(std::make_shared<ItemsSeq>(std::move(entries)));
  auto v = nat_exact(code, 512);
  if (v) return Nat(*v);
  return code;
}

bool s2_member_nat(const Nat& code) { return code_length_is_even(code); }

std::pair<LazySeq, LazySeq> split_even_nat(const Nat& code) {
  Nat len = code_length(code);
  auto lx = nat_exact(len, 30);
  if (!lx) throw NatError("split_even: symbolic length");
  if (*lx % 2 != 0) throw NatError("split_even: odd-length code");
  BigInt h = *lx / 2;
  LazySeq a, b;
  for (BigInt i = 0; i < h; ++i) a.push_back(code_at(code, i));
  for (BigInt i = 0; i < h; ++i) b.push_back(code_at(code, h + i));
  return {a, b};
}

}  // namespace medf
