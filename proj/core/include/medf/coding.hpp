#pragma once

// The fixed bijection between naturals and finite sequences of naturals.
//
//   encode(<>)        = 0
//   encode(q ^ <a>)   = pair(encode(q), a) + 1
//
// with pair the Cantor pairing.  encode is a true bijection and is strictly
// monotone under taking proper prefixes, which is what makes decode and the
// domain enumeration terminate.

#include "medf/nat.hpp"

#include <vector>

namespace medf {

using Seq = std::vector<BigInt>;

BigInt pair_nat(const BigInt& a, const BigInt& b);
std::pair<BigInt, BigInt> unpair_nat(const BigInt& p);

BigInt encode_seq(const Seq& q);
Seq decode_code(const BigInt& n);

// True iff the decoded sequence has even length.
bool s2_member(const BigInt& code);

// Halves of an even-length decoded sequence.  Rejects odd-length codes.
std::pair<Seq, Seq> split_even(const BigInt& code);

Seq concat_seqs(const Seq& u, const Seq& v);

// Lazy layer: sequences with possibly-symbolic entries.
using LazySeq = std::vector<Nat>;

// Code of a lazy sequence; materialized to an exact value when small.
Nat encode_lazy(LazySeq entries);

bool s2_member_nat(const Nat& code);
std::pair<LazySeq, LazySeq> split_even_nat(const Nat& code);

}  // namespace medf
