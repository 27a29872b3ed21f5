#pragma once

// JSON forms of function specs and reports.
//
// FunSpec schema (variants tagged explicitly, nested specs nest as objects):
//   {"variant": "EventuallyConstant", "prefix": [..], "tail": n}
//   {"variant": "Periodic", "prefix": [..], "cycle": [..]}
//   {"variant": "CoherentImage", "inner": {..}}
//   {"variant": "MemberImage", "stage": k, "inner": {..}}

#include "medf/funspec.hpp"

#include <json.hpp>

namespace medf {

inline nlohmann::json seq_to_json(const Seq& q) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& v : q) a.push_back(v.str());
  return a;
}

inline Seq seq_from_json(const nlohmann::json& a) {
  Seq q;
  for (const auto& v : a) {
    if (v.is_number_unsigned()) {
      q.emplace_back(v.get<unsigned long long>());
    } else {
      q.emplace_back(v.get<std::string>());
    }
  }
  return q;
}

inline nlohmann::json spec_to_json(const FunSpecPtr& s) {
  nlohmann::json j;
  switch (s->kind) {
    case FunSpecNode::Kind::EventuallyConstant:
      j["variant"] = "EventuallyConstant";
      j["prefix"] = seq_to_json(s->prefix);
      j["tail"] = s->tail.str();
      break;
    case FunSpecNode::Kind::Periodic:
      j["variant"] = "Periodic";
      j["prefix"] = seq_to_json(s->prefix);
      j["cycle"] = seq_to_json(s->cycle);
      break;
    case FunSpecNode::Kind::CoherentImage:
      j["variant"] = "CoherentImage";
      j["inner"] = spec_to_json(s->inner);
      break;
    case FunSpecNode::Kind::MemberImage:
      j["variant"] = "MemberImage";
      j["stage"] = s->stage.str();
      j["inner"] = spec_to_json(s->inner);
      break;
  }
  return j;
}

inline BigInt bigint_from_json(const nlohmann::json& v) {
  if (v.is_number_unsigned()) return BigInt(v.get<unsigned long long>());
  return BigInt(v.get<std::string>());
}

inline FunSpecPtr spec_from_json(const nlohmann::json& j) {
  const std::string variant = j.at("variant").get<std::string>();
  if (variant == "EventuallyConstant") {
    return make_eventually_constant(seq_from_json(j.at("prefix")),
                                    bigint_from_json(j.at("tail")));
  }
  if (variant == "Periodic") {
    return make_periodic(seq_from_json(j.at("prefix")), seq_from_json(j.at("cycle")));
  }
  if (variant == "CoherentImage") {
    return make_coherent_image(spec_from_json(j.at("inner")));
  }
  if (variant == "MemberImage") {
    return make_member_image(bigint_from_json(j.at("stage")),
                             spec_from_json(j.at("inner")));
  }
  throw NatError("spec_from_json: unknown variant " + variant);
}

inline nlohmann::json nat_to_json(const Nat& n) {
  auto v = nat_exact(n, 512);
  if (v) return nlohmann::json{{"nat", v->str()}};
  switch (n.kind()) {
    case Nat::Kind::Exact:
      return nlohmann::json{{"nat", n.exact_value().str()}};
    case Nat::Kind::PairV:
      return nlohmann::json{{"pair", nlohmann::json::array({
                                         nat_to_json(n.pair_first()),
                                         nat_to_json(n.pair_second()),
                                     })}};
    case Nat::Kind::CodeV: {
      const auto& rep = n.code_seq();
      nlohmann::json j;
      j["code"] = nlohmann::json::object();
      j["code"]["len"] = nat_to_json(rep->length());
      auto len = nat_exact(rep->length(), 30);
      if (len && *len <= 16) {
        nlohmann::json entries = nlohmann::json::array();
        for (BigInt i = 0; i < *len; ++i) entries.push_back(nat_to_json(rep->at(i)));
        j["code"]["entries"] = entries;
      } else {
        j["code"]["entries"] = "rule";
      }
      return j;
    }
  }
  return nlohmann::json();
}

}  // namespace medf
