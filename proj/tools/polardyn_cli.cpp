// polardyn {evolve|decompose|entropy|verify} --config <path> --out <path>
//          [--format csv|json] [--tol <float>] [--threads <n>]
//
// Exit codes: 0 success (a failed verification is still a success),
// 1 configuration or usage error, 2 numerical failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "polardyn/app/commands.hpp"
#include "polardyn/app/config.hpp"

namespace {

constexpr int kConfigError = 1;
constexpr int kNumericalError = 2;

struct Args {
  std::string config;
  std::string out;
  std::optional<std::string> format;
  std::optional<double> tol;
  int threads = 1;
};

void add_common(CLI::App* sub, Args& args) {
  sub->add_option("--config", args.config, "RunConfig JSON file")->required();
  sub->add_option("--out", args.out, "output file ('-' for standard output)")->required();
  sub->add_option("--format", args.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--tol", args.tol, "normality tolerance override")->check(CLI::PositiveNumber);
  sub->add_option("--threads", args.threads, "worker threads for time-grid evaluation")
      ->check(CLI::Range(1, 64));
}

int run(const std::string& command, const Args& args) {
  using namespace polardyn::app;
  const RunConfig cfg = load_config(args.config);
  CommandOptions opts;
  opts.tol = args.tol;
  opts.threads = args.threads;

  std::string text;
  if (command == "evolve" || command == "entropy") {
    opts.format = resolve_format(args.format, cfg, OutputFormat::csv);
    text = command == "evolve" ? cmd_evolve(cfg, opts) : cmd_entropy(cfg, opts);
  } else {
    // the config's format applies to tables; only an explicit flag can conflict here
    if (args.format && *args.format != "json") throw ConfigError(command + " emits JSON only");
    opts.format = OutputFormat::json;
    text = command == "decompose" ? cmd_decompose(cfg, opts) : cmd_verify(cfg, opts);
  }

  if (args.out == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream out(args.out, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file " + args.out);
  out << text;
  if (!out.flush()) throw ConfigError("failed writing " + args.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotation-scaling analysis of open quantum system dynamics"};
  app.require_subcommand(1);
  Args args;
  for (const char* name : {"evolve", "decompose", "entropy", "verify"}) add_common(app.add_subcommand(name), args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, args);
  } catch (const polardyn::app::ConfigError& e) {
    std::cerr << "polardyn: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    // load_config already maps invalid input to ConfigError, so anything else
    // (overflow, non-finite intermediates, solver breakdown) is numerical
    std::cerr << "polardyn: numerical failure: " << e.what() << '\n';
    return kNumericalError;
  }
}
