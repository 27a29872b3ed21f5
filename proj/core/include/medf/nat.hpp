#pragma once

// Natural numbers for the family pipeline.
//
// Values produced by the interleaving construction are codes of sequences
// whose bit size is exponential in the sequence length, so they cannot be
// materialized.  Nat keeps such values symbolic: a value is either an exact
// bignum, a raw Cantor pair of two Nats, or the code of a (possibly
// rule-generated) sequence under the fixed sequence coding.  Structural
// rules make equality, order against small numbers, decoding, and length
// computable without ever materializing the numeral.

#include <boost/multiprecision/cpp_int.hpp>

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace medf {

using BigInt = boost::multiprecision::cpp_int;

struct NatError : std::runtime_error {
  explicit NatError(const std::string& what) : std::runtime_error(what) {}
};

class Nat;

// Backing store for a symbolic code value: the decoded sequence.
class SeqRep {
 public:
  virtual ~SeqRep() = default;
  virtual Nat length() const = 0;
  virtual Nat at(const BigInt& i) const = 0;
  // Identity of the generating function for prefix-of-function sequences;
  // nullptr otherwise.  Two reps with the same family and equal length
  // denote the same sequence.
  virtual const void* family() const { return nullptr; }
};

using SeqRepPtr = std::shared_ptr<const SeqRep>;

class Nat {
 public:
  enum class Kind { Exact, PairV, CodeV };

  Nat() : kind_(Kind::Exact), exact_(0) {}
  explicit Nat(const BigInt& v) : kind_(Kind::Exact), exact_(v) {
    if (v < 0) throw NatError("Nat from negative value");
  }
  explicit Nat(unsigned long long v) : kind_(Kind::Exact), exact_(v) {}

  static Nat exact(const BigInt& v) { return Nat(v); }
  static Nat pair_of(Nat a, Nat b);           // raw Cantor pair value
  static Nat code_of(SeqRepPtr rep);          // encode(rep) value

  Kind kind() const { return kind_; }
  bool is_exact() const { return kind_ == Kind::Exact; }
  const BigInt& exact_value() const { return exact_; }

  const Nat& pair_first() const { return *pa_; }
  const Nat& pair_second() const { return *pb_; }
  const SeqRepPtr& code_seq() const { return seq_; }

  bool same_node(const Nat& o) const;

 private:
  Kind kind_;
  BigInt exact_;
  std::shared_ptr<const Nat> pa_, pb_;
  SeqRepPtr seq_;
};

// --- concrete sequence reps -------------------------------------------------

// Sequence given by explicit items (shared; a logical length allows prefix
// views without copying).
class ItemsSeq final : public SeqRep {
 public:
  ItemsSeq(std::shared_ptr<const std::vector<Nat>> items, size_t len)
      : items_(std::move(items)), len_(len) {
    if (len_ > items_->size()) throw NatError("ItemsSeq length out of range");
  }
  explicit ItemsSeq(std::vector<Nat> items)
      : items_(std::make_shared<const std::vector<Nat>>(std::move(items))),
        len_(items_->size()) {}
  Nat length() const override { return Nat(BigInt(len_)); }
  Nat at(const BigInt& i) const override {
    if (i < 0 || i >= BigInt(len_)) throw NatError("ItemsSeq index out of range");
    return (*items_)[static_cast<size_t>(i)];
  }
  const std::shared_ptr<const std::vector<Nat>>& items() const { return items_; }
  size_t size() const { return len_; }

 private:
  std::shared_ptr<const std::vector<Nat>> items_;
  size_t len_;
};

// Sequence generated by a rule; the length may itself be symbolic.
class RuleSeq final : public SeqRep {
 public:
  RuleSeq(Nat len, std::function<Nat(const BigInt&)> fn, const void* family = nullptr,
          std::shared_ptr<const void> family_owner = nullptr)
      : len_(std::move(len)), fn_(std::move(fn)), family_(family),
        family_owner_(std::move(family_owner)) {}
  Nat length() const override { return len_; }
  Nat at(const BigInt& i) const override { return fn_(i); }
  const void* family() const override { return family_; }

 private:
  Nat len_;
  std::function<Nat(const BigInt&)> fn_;
  const void* family_;
  std::shared_ptr<const void> family_owner_;
};

// --- exact arithmetic on the fixed pairing ----------------------------------

BigInt cantor_pair(const BigInt& a, const BigInt& b);
std::pair<BigInt, BigInt> cantor_unpair(const BigInt& p);

// --- Nat operations ----------------------------------------------------------

// Materialize when the numeral fits in max_bits bits.
std::optional<BigInt> nat_exact(const Nat& n, unsigned max_bits = 4096);

// Conservative lower bound on the bit length (capped).
size_t nat_bits_lower_bound(const Nat& n);

bool nat_eq(const Nat& a, const Nat& b);
bool nat_lt(const Nat& a, const Nat& b);
inline bool nat_le(const Nat& a, const Nat& b) { return nat_eq(a, b) || nat_lt(a, b); }
bool nat_is_zero(const Nat& n);

Nat nat_succ(const Nat& n);
Nat nat_pred(const Nat& n);  // n must be positive
Nat nat_add_small(const Nat& n, const BigInt& k);
Nat nat_double(const Nat& n);
Nat nat_pair(const Nat& a, const Nat& b);
Nat nat_fst(const Nat& p);
Nat nat_snd(const Nat& p);

// Code-view operations: every Nat is the code of exactly one finite sequence.
Nat code_length(const Nat& n);
// Entry i of the decoded sequence; 0 when i is outside the range.
Nat code_at(const Nat& n, const BigInt& i);
bool code_length_is_even(const Nat& n);

std::string nat_to_string(const Nat& n);

}  // namespace medf
