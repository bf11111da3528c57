// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>
#include <functional>
#include <iostream>

#include "woldkit/generate.hpp"
#include "woldkit/report.hpp"
#include "woldkit/verify.hpp"

using namespace woldkit;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kPrecondition = 2;

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    std::cerr << "woldkit: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "woldkit: " << e.what() << "\n";
  }
  return kError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wold-type decompositions of finite-dimensional covariant representations"};
  app.set_version_flag("--version", std::string(WOLDKIT_VERSION));
  app.require_subcommand(1);

  TolerancePolicy pol = TolerancePolicy::from_env();

  std::string in_path, out_path;
  int horizon = 0;
  auto* analyze_cmd = app.add_subcommand("analyze", "analyze a representation or shift spec file");
  analyze_cmd->add_option("file", in_path, "input JSON")->required();
  analyze_cmd->add_option("--out", out_path, "write the JSON report here");
  analyze_cmd->add_option("--tol-rank", pol.rank, "relative rank cutoff")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--tol-psd", pol.psd, "PSD slack")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--horizon", horizon, "iteration horizon")->check(CLI::NonNegativeNumber);

  std::string kind, params;
  std::uint64_t seed = 1;
  auto* generate_cmd = app.add_subcommand("generate", "write a seeded random instance");
  generate_cmd->add_option("kind", kind,
                           "random | left-invertible | expansive | concave | unilateral | bilateral | block")
      ->required();
  generate_cmd->add_option("--seed", seed, "random seed");
  generate_cmd->add_option("--params", params, "key=value,... (d, m, rank, L, p, n, M, weights, smin, smax, eps)");
  generate_cmd->add_option("--out", out_path, "output file (stdout if omitted)");

  std::string suite;
  VerifyOptions vopts;
  auto* verify = app.add_subcommand("verify", "run seeded property suites");
  verify->add_option("suite", suite, "suite name or all");
  verify->add_option("--count", vopts.count, "instances per suite")->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", vopts.seed, "base seed");
  verify->add_option("--tol-psd", pol.psd, "PSD slack")->check(CLI::PositiveNumber);
  verify->add_option("--threads", vopts.threads, "worker threads (0 = all cores)");
  verify->add_option("--out", out_path, "write the JSON result here");
  verify->add_flag("--list", "list suites and exit");

  CLI11_PARSE(app, argc, argv);

  if (analyze_cmd->parsed()) {
    return guarded([&] {
      Instance inst = load_instance(in_path);
      AnalyzeOptions opts;
      opts.pol = pol;
      opts.horizon = horizon;
      opts.input = in_path;
      Analysis a = woldkit::analyze(inst, opts);
      if (!out_path.empty()) write_file(out_path, dump(a.report));
      std::cout << a.text;
      return a.exit_code == 0 ? kOk : kPrecondition;
    });
  }
  if (generate_cmd->parsed()) {
    return guarded([&] {
      const std::string text = dump(to_json(generate(kind, Params(params), seed)));
      if (out_path.empty())
        std::cout << text;
      else
        write_file(out_path, text);
      return kOk;
    });
  }
  return guarded([&] {
    if (verify->count("--list") > 0) {
      for (const auto& s : suites()) std::cout << s.name << "  " << s.summary << "\n";
      return kOk;
    }
    if (suite.empty()) raise(ErrorKind::InvalidParams, "verify needs a suite name or all");
    if (suite != "all") vopts.names = {suite};
    vopts.pol = pol;
    VerifyReport rpt = run_verify(vopts);
    if (!out_path.empty()) write_file(out_path, dump(rpt.to_json(vopts)));
    std::cout << rpt.text();
    return rpt.all_passed() ? kOk : kError;
  });
}
