#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "fbo2d/cli.hpp"

// exit 0: all verdicts pass, 2: some verdict failed or the run aborted, 1: bad input
int main(int argc, char** argv) {
  CLI::App app{"fbo2d: experiments for the fractional 2D Benjamin-Ono equation"};
  app.require_subcommand(1);
  std::string config, out;
  unsigned threads = 1;
  for (const auto& kind : fbo2d::experiment_kinds()) {
    auto* sub = app.add_subcommand(kind, "run the '" + kind + "' experiment");
    sub->add_option("--config", config, "JSON config file")->required();
    sub->add_option("--out", out, "output directory (default out/<experiment>)");
    sub->add_option("--threads", threads, "worker threads for ensembles and ladders")->check(CLI::Range(1u, 1024u));
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  const std::string kind = app.get_subcommands().front()->get_name();
  const std::filesystem::path dir = out.empty() ? std::filesystem::path("out") / kind : std::filesystem::path(out);
  fbo2d::NormReport report;
  try {
    auto cfg = fbo2d::load_config(kind, config);
    report = fbo2d::run_experiment(cfg, dir, fbo2d::ParallelFor(threads));
  } catch (const std::invalid_argument& e) {
    std::cerr << "fbo2d: input error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "fbo2d: run failed: " << e.what() << "\n";
    return 2;
  }
  try {
    fbo2d::write_report(report, dir);
    fbo2d::emit_plotdata(report, dir);
  } catch (const std::exception& e) {
    std::cerr << "fbo2d: " << e.what() << "\n";
    return 2;
  }
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& v : report.verdicts)
    std::printf("%s %s (%s)\n", v.pass ? "PASS" : "FAIL", v.name.c_str(), v.rule.c_str());
  std::printf("%s -> %s\n", report.pass() ? "PASS" : "FAIL", dir.string().c_str());
  return report.pass() ? 0 : 2;
}
