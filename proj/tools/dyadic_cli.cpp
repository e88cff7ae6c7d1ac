#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "dyadic/experiments.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invalid = 2;
constexpr int exit_breach = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dyadic: multiplier, extremal and rough-kernel experiments"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::size_t workers = 0;

  auto* run = app.add_subcommand("run", "run the experiment named in a config");
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--out", out_dir, "output directory (overrides output.dir)");
  run->add_option("--workers", workers, "concurrent sweep points")->check(CLI::PositiveNumber);

  auto* val = app.add_subcommand("validate", "check a config for feasibility without computing");
  val->add_option("--config", config_path, "config file")->required();

  auto* list = app.add_subcommand("list-experiments", "print the experiment registry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? exit_ok : exit_invalid;
  }

  if (*list) {
    for (const auto& e : dyadic::experiment_registry()) std::printf("%-22s %s\n", e.name.c_str(), e.summary.c_str());
    return exit_ok;
  }

  dyadic::ExperimentConfig cfg;
  try {
    cfg = dyadic::load_config(config_path);
  } catch (const dyadic::error& e) {
    std::cerr << e.what() << '\n';
    return exit_invalid;
  }
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (workers > 0) cfg.workers = workers;

  const auto report = dyadic::validate(cfg);
  if (*val) {
    std::cout << report.text();
    return report.ok() ? exit_ok : exit_invalid;
  }
  if (!report.ok()) {
    std::cerr << report.text();
    return exit_invalid;
  }

  try {
    const auto table = dyadic::run(cfg);
    for (const auto& p : dyadic::write_outputs(table, cfg.name, cfg.out_dir)) std::cout << "wrote " << p << '\n';
    std::size_t failed = 0;
    for (const auto& r : table.rows)
      if (r.pass && !*r.pass) {
        ++failed;
        std::cerr << "breach: criterion " << r.criterion << ' ' << r.quantity << ' ' << r.parameters << " = "
                  << dyadic::ResultTable::format(r.exponent ? *r.exponent : r.value) << '\n';
      }
    return failed ? exit_breach : exit_ok;
  } catch (const dyadic::error& e) {
    std::cerr << e.what() << '\n';
    return e.code() == dyadic::errc::infeasible || e.code() == dyadic::errc::invalid_argument ? exit_invalid : 1;
  }
}
