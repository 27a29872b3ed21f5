#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "medf/coding.hpp"

using namespace medf;

TEST_CASE("cantor pairing small values") {
  CHECK(pair_nat(0, 0) == 0);
  CHECK(pair_nat(1, 0) == 1);
  CHECK(pair_nat(0, 1) == 2);
  CHECK(pair_nat(1, 1) == 4);
}

TEST_CASE("pairing round trip") {
  for (BigInt p = 0; p < 5000; ++p) {
    auto [a, b] = unpair_nat(p);
    CHECK(pair_nat(a, b) == p);
  }
}

TEST_CASE("encode base cases") {
  CHECK(encode_seq({}) == 0);
  CHECK(encode_seq({0}) == 1);
  CHECK(encode_seq({0, 0}) == 2);
  CHECK(encode_seq({1}) == 3);
  CHECK(encode_seq({0, 0, 0}) == 4);
}

TEST_CASE("decode base cases") {
  CHECK(decode_code(0) == Seq{});
  CHECK(decode_code(3) == Seq{1});
  CHECK(decode_code(4) == Seq{0, 0, 0});
}

TEST_CASE("bijection: every code below 100000 round-trips") {
  for (BigInt n = 0; n < 100000; ++n) {
    CHECK(encode_seq(decode_code(n)) == n);
  }
}

TEST_CASE("bijection: short sequences round-trip") {
  // all sequences of length <= 4 with entries < 8
  std::vector<Seq> all = {Seq{}};
  for (int len = 1; len <= 4; ++len) {
    std::vector<Seq> next;
    for (const Seq& q : all) {
      if (BigInt(q.size()) + 1 != len) continue;
      (void)q;
    }
    // regenerate from scratch per length
    std::vector<Seq> cur = {Seq{}};
    for (int l = 0; l < len; ++l) {
      std::vector<Seq> ext;
      for (const Seq& q : cur) {
        for (BigInt v = 0; v < 8; ++v) {
          Seq r = q;
          r.push_back(v);
          ext.push_back(std::move(r));
        }
      }
      cur = std::move(ext);
    }
    for (const Seq& q : cur) all.push_back(q);
  }
  for (const Seq& q : all) {
    CHECK(decode_code(encode_seq(q)) == q);
  }
}

TEST_CASE("prefix codes are strictly smaller") {
  Seq q = {3, 1, 4, 1, 5};
  for (size_t l = 0; l < q.size(); ++l) {
    Seq p(q.begin(), q.begin() + l);
    CHECK(encode_seq(p) < encode_seq(q));
  }
}

TEST_CASE("even-length membership") {
  CHECK(s2_member(0));
  CHECK(!s2_member(1));
  CHECK(s2_member(2));
  CHECK(!s2_member(encode_seq({5, 7, 9})));
}

TEST_CASE("split of interleaved codes") {
  CHECK(split_even(encode_seq({})) == std::make_pair(Seq{}, Seq{}));
  CHECK(split_even(encode_seq({5, 7})) == std::make_pair(Seq{5}, Seq{7}));
  CHECK(split_even(encode_seq({1, 2, 3, 4})) == std::make_pair(Seq{1, 2}, Seq{3, 4}));
  CHECK_THROWS(split_even(encode_seq({1, 2, 3})));
}

TEST_CASE("split inverts concatenation of equal halves") {
  Seq u = {2, 0, 9};
  Seq v = {4, 4, 1};
  CHECK(split_even(encode_seq(concat_seqs(u, v))) == std::make_pair(u, v));
  CHECK(s2_member(encode_seq(concat_seqs(u, v))));
}

TEST_CASE("lazy codes agree with exact codes") {
  LazySeq entries;
  for (int i = 0; i < 5; ++i) entries.push_back(Nat(BigInt(i * 3 % 4)));
  Nat lazy = encode_lazy(entries);
  Seq exact;
  for (int i = 0; i < 5; ++i) exact.push_back(BigInt(i * 3 % 4));
  CHECK(nat_eq(lazy, Nat(encode_seq(exact))));
  CHECK(nat_eq(code_length(lazy), Nat(BigInt(5))));
  CHECK(nat_eq(code_at(lazy, 2), Nat(BigInt(2))));
}

TEST_CASE("symbolic codes: length and entries without materialization") {
  // a rule sequence far too long to materialize
  auto rep = std::make_shared<RuleSeq>(
      Nat(BigInt(1000)), [](const BigInt& i) { return Nat(i % 7); });
  Nat big = Nat::code_of(rep);
  CHECK(nat_eq(code_length(big), Nat(BigInt(1000))));
  CHECK(nat_eq(code_at(big, 8), Nat(BigInt(1))));
  CHECK(code_length_is_even(big));
  CHECK(!nat_eq(big, Nat(BigInt(12345))));
  CHECK(nat_lt(Nat(BigInt(1) << 62), big));
}

TEST_CASE("symbolic pair values decode structurally") {
  auto rep = std::make_shared<RuleSeq>(
      Nat(BigInt(64)), [](const BigInt& i) { return Nat(i); });
  Nat w = Nat::code_of(rep);
  Nat packed = Nat::pair_of(Nat(BigInt(5)), w);
  // decode(pair(5, w)) = s_6 ^ <w - 1>
  Nat len = code_length(packed);
  Seq s6 = decode_code(6);
  CHECK(nat_eq(len, Nat(BigInt(s6.size() + 1))));
  CHECK(nat_eq(code_at(packed, BigInt(s6.size())), nat_pred(w)));
  CHECK(nat_eq(nat_fst(packed), Nat(BigInt(5))));
  CHECK(nat_eq(nat_snd(packed), w));
}

TEST_CASE("pred and succ are inverse on symbolic values") {
  auto rep = std::make_shared<RuleSeq>(
      Nat(BigInt(128)), [](const BigInt& i) { return Nat(i + 1); });
  Nat w = Nat::code_of(rep);
  CHECK(nat_eq(nat_succ(nat_pred(w)), w));
  CHECK(nat_eq(nat_pred(nat_succ(w)), w));
}
