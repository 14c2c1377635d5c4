#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "qs2lab/attacks/registry.hpp"
#include "qs2lab/classify/classify.hpp"
#include "qs2lab/games/records.hpp"
#include "qs2lab/operators/verify.hpp"

namespace qs2lab::cli {

using nlohmann::json;

enum ExitCode : int { kOk = 0, kConfigError = 1, kGameUndefined = 2, kContractFailure = 3 };

inline const std::vector<std::string>& game_names() {
  static const std::vector<std::string> names = {"qind-qcpa", "ind-qcpa", "qind-ske", "forbidden-randomness"};
  return names;
}

struct RunConfig {
  json scheme;  // descriptor, seed filled in
  std::string game = "qind-qcpa";
  std::string attack;  // empty: the game's default
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string output = "-";
  std::string format = "jsonl";
  bool pin_key = false;
  std::string randomness = "classical";  // forbidden-randomness only
  std::optional<std::pair<Word, Word>> messages;
};

// A scheme argument is a built-in name, inline JSON, or a path to a JSON file.
// The descriptor seed defaults to the run seed; `k=v` overrides apply last.
inline json resolve_scheme(const std::string& arg, std::uint64_t seed, const std::vector<std::string>& overrides) {
  json desc;
  const auto& names = schemes::builtin_scheme_names();
  if (std::find(names.begin(), names.end(), arg) != names.end()) {
    desc = json{{"name", arg}};
  } else if (!arg.empty() && arg.front() == '{') {
    desc = json::parse(arg, nullptr, false);
    if (desc.is_discarded()) fail(Errc::ConfigError, "inline scheme descriptor is not valid JSON");
  } else if (std::filesystem::is_regular_file(arg)) {
    std::ifstream in(arg);
    desc = json::parse(in, nullptr, false);
    if (desc.is_discarded()) fail(Errc::ConfigError, "scheme file '" + arg + "' is not valid JSON");
  } else {
    fail(Errc::ConfigError, "unknown scheme '" + arg + "' (not a built-in name, JSON, or file)");
  }
  if (!desc.is_object()) fail(Errc::ConfigError, "scheme descriptor must be a JSON object");
  if (!desc.contains("seed")) desc["seed"] = seed;
  for (const auto& o : overrides) schemes::apply_override(desc, o);
  return desc;
}

inline int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::GameUndefinedForScheme: return kGameUndefined;
    case Errc::NotPerfectlyCorrect:
    case Errc::RecoveryCheckFailed:
    case Errc::NotABijection:
    case Errc::InconsistentTrapdoor:
    case Errc::RecContractViolated: return kContractFailure;
    default: return kConfigError;
  }
}

inline schemes::Keypair cli_keypair(const schemes::ClassicalScheme& s, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x6b));
  return s.keygen(rng);
}

namespace detail {

inline attacks::AttackInstance require_attack(const std::string& name, const schemes::BuiltScheme& scheme,
                                              bool quantum) {
  attacks::AttackInstance a = attacks::make_attack(name, scheme);
  if (quantum && !a.quantum) {
    fail(Errc::ConfigError, "attack '" + name + "' is classical; use 'embed:" + name + "' in a quantum game");
  }
  if (!quantum && !a.classical) fail(Errc::ConfigError, "attack '" + name + "' has no classical form");
  return a;
}

}  // namespace detail

// Builds the trial closure for a run configuration. The returned closure owns
// the game object.
inline games::TrialFn make_trial_fn(const RunConfig& cfg) {
  const schemes::BuiltScheme built = schemes::build_scheme(cfg.scheme);
  games::GameOptions options;
  options.reference_seed = derive_seed(cfg.seed, 0x72);
  if (cfg.game == "qind-ske") {
    const auto& ske = built.symmetric();
    const std::string attack = cfg.attack.empty() ? "ske-hadamard" : cfg.attack;
    if (cfg.pin_key) {
      Rng rng(options.reference_seed);
      const Word k = ske.keygen(rng);
      options.pinned_keypair = schemes::Keypair{k, k};
    }
    auto game = std::make_shared<games::QindSkeGame>(ske, *detail::require_attack(attack, built, true).quantum, options);
    return [game](std::uint64_t i, std::uint64_t s) { return game->run(i, s); };
  }
  // A symmetric scheme enters the public-key games through its pk = sk = key
  // view; only the forbidden-randomness game accepts that.
  if (built.is_ske() && cfg.game != "forbidden-randomness") built.public_key();
  const schemes::ClassicalScheme pke =
      built.is_ske() ? operators::as_public_key_view(built.symmetric()) : built.public_key();
  if (cfg.pin_key) options.pinned_keypair = games::reference_keypair(pke, options);
  if (cfg.game == "qind-qcpa") {
    if (cfg.attack.empty()) fail(Errc::ConfigError, "--attack is required for qind-qcpa");
    auto game = std::make_shared<games::QindQcpaGame>(pke, *detail::require_attack(cfg.attack, built, true).quantum,
                                                      options);
    return [game](std::uint64_t i, std::uint64_t s) { return game->run(i, s); };
  }
  if (cfg.game == "ind-qcpa") {
    if (cfg.attack.empty()) fail(Errc::ConfigError, "--attack is required for ind-qcpa");
    auto game =
        std::make_shared<games::IndQcpaGame>(pke, *detail::require_attack(cfg.attack, built, false).classical, options);
    return [game](std::uint64_t i, std::uint64_t s) { return game->run(i, s); };
  }
  if (cfg.game == "forbidden-randomness") {
    if (!cfg.attack.empty() && cfg.attack != "randomness-reencrypt") {
      fail(Errc::ConfigError, "forbidden-randomness runs its built-in attack 'randomness-reencrypt'");
    }
    games::ForbiddenOptions fo;
    if (cfg.randomness == "superposed") {
      fo.mode = games::RandomnessMode::Superposed;
    } else if (cfg.randomness != "classical") {
      fail(Errc::ConfigError, "--randomness must be 'classical' or 'superposed'");
    }
    fo.messages = cfg.messages;
    fo.pinned_keypair = options.pinned_keypair;
    auto game = std::make_shared<games::ForbiddenRandomnessGame>(pke, fo);
    return [game](std::uint64_t i, std::uint64_t s) { return game->run(i, s); };
  }
  fail(Errc::ConfigError, "unknown game '" + cfg.game + "'");
}

inline int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.trials < 1) fail(Errc::ConfigError, "--trials must be at least 1");
    if (cfg.format != "jsonl" && cfg.format != "csv") fail(Errc::ConfigError, "--format must be jsonl or csv");
    const games::TrialFn fn = make_trial_fn(cfg);
    std::vector<games::ExperimentRecord> records;
    const games::AdvantageEstimate est = games::estimate_advantage(fn, cfg.trials, cfg.seed, &records);
    std::ofstream file;
    std::ostream* sink = &out;
    if (cfg.output != "-") {
      file.open(cfg.output, std::ios::binary);
      if (!file) fail(Errc::ConfigError, "cannot open output '" + cfg.output + "'");
      sink = &file;
    }
    if (cfg.format == "csv") {
      games::write_csv(*sink, records, est);
    } else {
      games::write_jsonl(*sink, records, est);
    }
    sink->flush();
    return kOk;
  } catch (const Error& e) {
    if (e.code() == Errc::GameUndefinedForScheme && std::string(e.what()).find("non-isometric") != std::string::npos) {
      err << "game undefined: non-isometric scheme\n";
    } else {
      err << "error: " << e.what() << '\n';
    }
    return exit_code_for(e);
  }
}

inline int cmd_classify(const json& descriptor, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  try {
    const schemes::BuiltScheme built = schemes::build_scheme(descriptor);
    const schemes::ClassicalScheme s =
        built.is_ske() ? operators::as_public_key_view(built.symmetric()) : built.public_key();
    json result = classify::to_json(classify::classify_scheme(s, cli_keypair(s, seed)));
    result["descriptor"] = built.descriptor;
    out << result.dump(2) << '\n';
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e) == kContractFailure ? kContractFailure : kConfigError;
  }
}

namespace detail {

inline json check_entry(const std::string& op, const std::string& contract,
                        const std::optional<operators::ContractFailure>& failure, const schemes::PkeWidths& w) {
  json e{{"operator", op}, {"contract", contract}, {"status", failure ? "fail" : "pass"}};
  if (failure) {
    e["witness"] = {{"check", failure->contract},
                    {"index", failure->index},
                    {"m", format_bits(failure->m, w.m_bits)},
                    {"r", format_bits(failure->r, w.r_bits)},
                    {"detail", failure->detail}};
  }
  return e;
}

}  // namespace detail

// Runs every operator contract that applies to the scheme: involution and
// bijectivity of the type-1 operators, and the canonical type-2 action of each
// available type-2 construction (exhaustive over (r, m)).
inline json verify_operators(const schemes::ClassicalScheme& s, const schemes::Keypair& kp, std::uint64_t seed) {
  using namespace operators;
  json checks = json::array();
  const auto enc_ref = [&](Word m, Word r) { return s.enc(kp.pk, m, r); };
  auto add = [&](const std::string& op, const std::string& contract, const std::optional<ContractFailure>& f) {
    checks.push_back(detail::check_entry(op, contract, f, s.widths));
  };

  const auto enc1 = build_type1_enc(s, kp.pk);
  add("type1-enc", "involution", verify_involution(enc1, seed));
  add("type1-enc", "bijection", verify_bijection(enc1, seed));
  const auto dec1 = build_type1_dec(s, kp.sk);
  add("type1-dec", "involution", verify_involution(dec1, seed));
  if (s.has_rec()) add("type1-rec", "involution", verify_involution(build_type1_rec(s, kp.pk), seed));

  auto type2 = [&](const std::string& name, const OracleOperator& op) {
    add(name, "type2-canonical-action", verify_type2_contract(op, enc_ref));
    add(name, "bijection", verify_bijection(op, seed));
  };
  const bool perfect = classify::measure_alpha(s, kp) == 0.0;
  if (perfect) type2("type2-fig2", build_type2_canonical_perfect(s, kp.pk, kp.sk, Verification::Trusted));
  if (s.has_rec()) {
    const auto op = build_type2_canonical_recoverable(s, kp.pk, Verification::Trusted);
    type2("type2-fig3", op);
    std::optional<ContractFailure> leak;
    if (op.key_material != KeyMaterial::PublicOnly || op.audit->dec.load() != 0 || op.audit->sk_reads.load() != 0) {
      leak = ContractFailure{"public-key-only", 0, 0, 0,
                             "dec calls " + std::to_string(op.audit->dec.load()) + ", sk reads " +
                                 std::to_string(op.audit->sk_reads.load())};
    }
    add("type2-fig3", "no-secret-key-access", leak);
  }
  if (s.trapdoor) type2("type2-fig8", build_type2_transformed(s, kp.pk, kp.sk, Verification::Trusted));

  bool ok = true;
  for (const auto& c : checks) ok = ok && c["status"] == "pass";
  return json{{"schema_version", 1}, {"scheme", s.name}, {"checks", checks}, {"result", ok ? "pass" : "fail"}};
}

inline int cmd_verify_operators(const json& descriptor, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  try {
    const schemes::BuiltScheme built = schemes::build_scheme(descriptor);
    const schemes::ClassicalScheme s =
        built.is_ske() ? operators::as_public_key_view(built.symmetric()) : built.public_key();
    const json report = verify_operators(s, cli_keypair(s, seed), seed);
    out << report.dump(2) << '\n';
    if (report["result"] != "pass") {
      for (const auto& c : report["checks"]) {
        if (c["status"] == "fail") {
          err << "contract failure: " << c["operator"].get<std::string>() << " " << c["contract"].get<std::string>()
              << " m=" << c["witness"]["m"].get<std::string>() << " r=" << c["witness"]["r"].get<std::string>()
              << '\n';
        }
      }
      return kContractFailure;
    }
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

inline int cmd_attacks(std::ostream& out) {
  for (const auto& d : attacks::attack_registry()) out << attacks::to_json(d).dump() << '\n';
  return kOk;
}

inline int cmd_describe(const json& descriptor, std::ostream& out, std::ostream& err) {
  try {
    out << schemes::build_scheme(descriptor).descriptor.dump(2) << '\n';
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace qs2lab::cli
