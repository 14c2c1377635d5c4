#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qs2lab/cli/commands.hpp"

namespace {

struct SchemeArgs {
  std::string scheme;
  std::vector<std::string> params;
  std::uint64_t seed = 0;
};

void add_scheme_options(CLI::App* cmd, SchemeArgs& a) {
  cmd->add_option("--scheme", a.scheme, "built-in scheme name, inline JSON descriptor, or path to a JSON file")
      ->required();
  cmd->add_option("--param", a.params, "descriptor override key=value (dotted keys reach nested schemes)");
  cmd->add_option("--seed", a.seed, "seed for keys, tables and trials (required)")->required();
}

std::pair<qs2lab::Word, qs2lab::Word> parse_messages(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) qs2lab::fail(qs2lab::Errc::ConfigError, "--messages expects m0,m1 bitstrings");
  const std::string m0 = text.substr(0, comma);
  const std::string m1 = text.substr(comma + 1);
  return {qs2lab::parse_bits(m0, static_cast<unsigned>(m0.size())),
          qs2lab::parse_bits(m1, static_cast<unsigned>(m1.size()))};
}

}  // namespace

int main(int argc, char** argv) {
  using namespace qs2lab;
  CLI::App app{"qs2lab: quantum security games on toy encryption schemes"};
  app.require_subcommand(1);

  SchemeArgs run_args;
  cli::RunConfig cfg;
  std::string messages;
  auto* run = app.add_subcommand("run", "run a security game and emit per-trial records plus the estimate");
  add_scheme_options(run, run_args);
  run->add_option("--game", cfg.game, "qind-qcpa | ind-qcpa | qind-ske | forbidden-randomness")
      ->check(CLI::IsMember(cli::game_names()));
  run->add_option("--attack", cfg.attack, "registry attack name (see the attacks subcommand)");
  run->add_option("--trials", cfg.trials, "number of trials")->required();
  run->add_option("--output", cfg.output, "output path, - for standard output");
  run->add_option("--format", cfg.format, "jsonl | csv")->check(CLI::IsMember({"jsonl", "csv"}));
  run->add_flag("--pin-key", cfg.pin_key, "use one keypair for every trial");
  run->add_option("--randomness", cfg.randomness, "forbidden-randomness: classical | superposed")
      ->check(CLI::IsMember({"classical", "superposed"}));
  run->add_option("--messages", messages, "forbidden-randomness: fixed challenge pair m0,m1 as bitstrings");

  SchemeArgs classify_args;
  auto* classify = app.add_subcommand("classify", "print the scheme classification as JSON");
  add_scheme_options(classify, classify_args);

  SchemeArgs verify_args;
  auto* verify = app.add_subcommand("verify-operators", "exhaustively check every applicable operator contract");
  add_scheme_options(verify, verify_args);

  SchemeArgs describe_args;
  auto* describe = app.add_subcommand("describe", "print the normalized scheme descriptor");
  add_scheme_options(describe, describe_args);

  auto* list = app.add_subcommand("attacks", "list the attack registry as JSON lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kConfigError;
  }

  try {
    if (*list) return cli::cmd_attacks(std::cout);
    if (*run) {
      cfg.seed = run_args.seed;
      cfg.scheme = cli::resolve_scheme(run_args.scheme, run_args.seed, run_args.params);
      if (!messages.empty()) cfg.messages = parse_messages(messages);
      return cli::cmd_run(cfg, std::cout, std::cerr);
    }
    if (*classify) {
      return cli::cmd_classify(cli::resolve_scheme(classify_args.scheme, classify_args.seed, classify_args.params),
                               classify_args.seed, std::cout, std::cerr);
    }
    if (*verify) {
      return cli::cmd_verify_operators(cli::resolve_scheme(verify_args.scheme, verify_args.seed, verify_args.params),
                                       verify_args.seed, std::cout, std::cerr);
    }
    if (*describe) {
      return cli::cmd_describe(cli::resolve_scheme(describe_args.scheme, describe_args.seed, describe_args.params),
                               std::cout, std::cerr);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::exit_code_for(e);
  }
  return cli::kConfigError;
}
