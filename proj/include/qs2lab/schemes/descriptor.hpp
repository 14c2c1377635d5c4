#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "qs2lab/schemes/almost_constant.hpp"
#include "qs2lab/schemes/hybrid.hpp"
#include "qs2lab/schemes/lwe.hpp"
#include "qs2lab/schemes/rollo.hpp"
#include "qs2lab/schemes/ske.hpp"
#include "qs2lab/schemes/transformed.hpp"

// Scheme descriptors: {name, seed, params, widths}. Building from a descriptor
// is deterministic in (name, seed, params), so a descriptor round-trips to
// bit-identical tables. Nested schemes (hybrid, transformed) carry their
// components as nested descriptors; a nested descriptor without a seed inherits
// the parent's.
namespace qs2lab::schemes {

using nlohmann::json;

inline const std::vector<std::string>& builtin_scheme_names() {
  static const std::vector<std::string> names = {"toy-lwe",         "toy-rollo",   "hybrid",
                                                 "transformed",     "almost-constant", "ske-otp-prf",
                                                 "ske-random-perm"};
  return names;
}

struct BuiltScheme {
  std::optional<ClassicalScheme> pke;
  std::optional<SkeScheme> ske;
  json descriptor;  // normalized: every parameter explicit

  bool is_ske() const noexcept { return ske.has_value(); }
  const ClassicalScheme& public_key() const {
    if (!pke) fail(Errc::ConfigError, descriptor.value("name", "?") + " is a symmetric scheme");
    return *pke;
  }
  const SkeScheme& symmetric() const {
    if (!ske) fail(Errc::ConfigError, descriptor.value("name", "?") + " is a public-key scheme");
    return *ske;
  }
};

namespace detail {

inline unsigned param_u(json& params, const char* key, unsigned fallback) {
  if (!params.contains(key)) params[key] = fallback;
  const json& v = params[key];
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    fail(Errc::ConfigError, std::string("parameter '") + key + "' must be a non-negative integer");
  }
  return v.get<unsigned>();
}

inline std::string param_s(json& params, const char* key, const std::string& fallback) {
  if (!params.contains(key)) params[key] = fallback;
  if (!params[key].is_string()) fail(Errc::ConfigError, std::string("parameter '") + key + "' must be a string");
  return params[key].get<std::string>();
}

inline json nested(json& params, const char* key, json fallback, std::uint64_t parent_seed) {
  if (!params.contains(key)) params[key] = std::move(fallback);
  json& sub = params[key];
  if (sub.is_string()) sub = json{{"name", sub.get<std::string>()}};
  if (!sub.is_object()) fail(Errc::ConfigError, std::string("parameter '") + key + "' must be a scheme descriptor");
  if (!sub.contains("seed")) sub["seed"] = parent_seed;
  return sub;
}

// Corrupts Rec on r = 0 so the recovery contract has a concrete witness.
inline void inject_rec_fault(ClassicalScheme& s) {
  if (!s.has_rec()) fail(Errc::ConfigError, "fault 'rec' needs a scheme with Rec");
  auto rec = s.rec;
  s.rec = [rec](Word pk, Word r, Word c) { return r == 0 ? rec(pk, r, c) ^ 1U : rec(pk, r, c); };
}

inline json widths_json(const BuiltScheme& b) {
  if (b.pke) {
    const auto& w = b.pke->widths;
    return {{"r_bits", w.r_bits}, {"m_bits", w.m_bits}, {"c_bits", w.c_bits}, {"pk_bits", w.pk_bits},
            {"sk_bits", w.sk_bits}};
  }
  const auto& w = b.ske->widths;
  return {{"key_bits", w.key_bits}, {"m_bits", w.m_bits}, {"c_bits", w.c_bits}, {"r_bits", w.r_bits}};
}

inline EncodeParams encode_for(unsigned n, const std::string& encode, std::uint64_t seed) {
  if (encode == "identity") return EncodeParams::identity(n);
  if (encode == "seeded") return EncodeParams::seeded(n, derive_seed(seed, 0x45));
  fail(Errc::ConfigError, "encode must be 'identity' or 'seeded'");
}

}  // namespace detail

inline BuiltScheme build_scheme(const json& descriptor) {
  if (!descriptor.is_object() || !descriptor.contains("name") || !descriptor["name"].is_string()) {
    fail(Errc::ConfigError, "scheme descriptor needs a string 'name'");
  }
  json norm = descriptor;
  const std::string name = norm["name"].get<std::string>();
  if (!norm.contains("seed")) fail(Errc::ConfigError, "scheme descriptor '" + name + "' needs an explicit seed");
  if (!norm["seed"].is_number_unsigned() && !norm["seed"].is_number_integer()) {
    fail(Errc::ConfigError, "seed must be an integer");
  }
  const std::uint64_t seed = norm["seed"].get<std::uint64_t>();
  if (!norm.contains("params")) norm["params"] = json::object();
  json& params = norm["params"];
  if (!params.is_object()) fail(Errc::ConfigError, "params must be an object");
  norm.erase("widths");

  BuiltScheme out;
  if (name == "toy-lwe") {
    LweParams p;
    p.n = detail::param_u(params, "n", 4);
    p.q = detail::param_u(params, "q", 2);
    p.profile = parse_error_profile(detail::param_s(params, "profile", "sparse"));
    p.encode = detail::encode_for(p.n, detail::param_s(params, "encode", "identity"), seed);
    out.pke = toy_lwe(p);
  } else if (name == "toy-rollo") {
    RolloParams p;
    p.m_bits = detail::param_u(params, "m_bits", 1);
    p.code_bits = detail::param_u(params, "code_bits", 3);
    p.seed = seed;
    out.pke = toy_rollo(p);
  } else if (name == "hybrid") {
    const json pke = detail::nested(params, "pke", json{{"name", "toy-rollo"}, {"params", {{"m_bits", 2}}}}, seed);
    const json ske = detail::nested(params, "ske", json{{"name", "ske-otp-prf"}}, seed);
    BuiltScheme inner_pke = build_scheme(pke);
    BuiltScheme inner_ske = build_scheme(ske);
    params["pke"] = inner_pke.descriptor;
    params["ske"] = inner_ske.descriptor;
    out.pke = hybrid_pke(inner_pke.public_key(), inner_ske.symmetric());
  } else if (name == "transformed") {
    const json inner = detail::nested(params, "inner", json{{"name", "toy-rollo"}, {"params", {{"m_bits", 2}}}}, seed);
    BuiltScheme built = build_scheme(inner);
    params["inner"] = built.descriptor;
    TransformedParams p;
    p.seed = seed;
    const std::string tdf = detail::param_s(params, "tdf", "seeded");
    if (tdf != "seeded" && tdf != "identity") fail(Errc::ConfigError, "tdf must be 'seeded' or 'identity'");
    p.identity_tdf = tdf == "identity";
    out.pke = transformed_scheme(built.public_key(), p);
  } else if (name == "almost-constant") {
    AlmostConstantParams p;
    p.m_bits = detail::param_u(params, "m_bits", 2);
    p.r_bits = detail::param_u(params, "r_bits", 2);
    p.seed = seed;
    out.pke = almost_constant_scheme(p);
  } else if (name == "ske-otp-prf") {
    OtpPrfParams p;
    p.key_bits = detail::param_u(params, "key_bits", 2);
    p.m_bits = detail::param_u(params, "m_bits", 1);
    p.r_bits = detail::param_u(params, "r_bits", 2);
    p.seed = seed;
    out.ske = ske_otp_prf(p);
  } else if (name == "ske-random-perm") {
    RandomPermParams p;
    p.key_bits = detail::param_u(params, "key_bits", 2);
    p.m_bits = detail::param_u(params, "m_bits", 1);
    p.nonce_bits = detail::param_u(params, "nonce_bits", 6);
    p.seed = seed;
    out.ske = ske_random_perm(p);
  } else {
    fail(Errc::ConfigError, "unknown scheme '" + name + "'");
  }

  if (params.contains("fault")) {
    const std::string fault = detail::param_s(params, "fault", "none");
    if (fault == "rec") {
      if (!out.pke) fail(Errc::ConfigError, "fault 'rec' applies to public-key schemes only");
      detail::inject_rec_fault(*out.pke);
    } else if (fault != "none") {
      fail(Errc::ConfigError, "unknown fault '" + fault + "'");
    }
  }
  if (out.pke) check_parts(name, out.pke->parts, out.pke->widths.c_bits);
  if (out.ske) check_parts(name, out.ske->parts, out.ske->widths.c_bits);
  out.descriptor = std::move(norm);
  out.descriptor["widths"] = detail::widths_json(out);
  return out;
}

inline BuiltScheme build_scheme(const std::string& name, std::uint64_t seed, json params = json::object()) {
  return build_scheme(json{{"name", name}, {"seed", seed}, {"params", std::move(params)}});
}

// Applies a `key=value` override to a descriptor. Values parse as JSON when
// they can and are kept as strings otherwise. A dotted key reaches into a
// nested scheme: `ske.nonce_bits=4` sets params.ske.params.nonce_bits.
inline void apply_override(json& descriptor, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) fail(Errc::ConfigError, "override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  if (!descriptor.contains("params")) descriptor["params"] = json::object();
  json* target = &descriptor["params"];
  std::string rest = key;
  for (auto dot = rest.find('.'); dot != std::string::npos; dot = rest.find('.')) {
    json& sub = (*target)[rest.substr(0, dot)];
    if (sub.is_string()) sub = json{{"name", sub.get<std::string>()}};
    if (sub.is_null()) fail(Errc::ConfigError, "override '" + key + "' names an unset nested scheme");
    if (!sub.contains("params")) sub["params"] = json::object();
    target = &sub["params"];
    rest = rest.substr(dot + 1);
  }
  (*target)[rest] = std::move(value);
}

// The public encoding wiring of a built toy-lwe scheme.
inline EncodeParams encode_params_of(const BuiltScheme& b) {
  const json& d = b.descriptor;
  if (d.value("name", "") != "toy-lwe") fail(Errc::ConfigError, "encode wiring exists only for toy-lwe");
  const json& p = d["params"];
  return detail::encode_for(p["n"].get<unsigned>(), p["encode"].get<std::string>(), d["seed"].get<std::uint64_t>());
}

}  // namespace qs2lab::schemes
