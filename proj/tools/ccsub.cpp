// Command line runner for the example catalog.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ccsub/ccsub.hpp"

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

void print_list(std::ostream& os) {
  os << "examples:\n";
  for (const auto& e : ccsub::example_specs()) {
    os << "  " << e.name << "  " << e.description;
    for (const auto& [k, v] : e.parameters) os << "  " << k << "=" << v;
    os << "\n";
  }
  os << "checks:\n";
  for (const auto& c : ccsub::check_specs()) os << "  " << c.name << "  " << c.description << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Residual checks for contact-complex Riemannian submersions"};
  app.require_subcommand(1);

  ccsub::RunConfig cfg;
  std::string checks = "all";
  std::string out_path;
  auto* verify = app.add_subcommand("verify", "run checks on a catalog example");
  verify->add_option("--example", cfg.example, "catalog example name")->required();
  verify->add_option("--checks", checks, "comma separated check names, or all");
  verify->add_option("--points", cfg.points, "number of sample points")->check(CLI::PositiveNumber);
  verify->add_option("--seed", cfg.seed, "sampling seed");
  verify->add_option("--tol", cfg.tol, "residual tolerance")->check(CLI::NonNegativeNumber);
  verify->add_option("--format", cfg.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  verify->add_option("--out", out_path, "write the report to this file instead of standard output");
  auto* list = app.add_subcommand("list", "list examples and checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list->parsed()) {
    print_list(std::cout);
    return 0;
  }

  cfg.checks = split_list(checks);
  ccsub::Report report;
  try {
    report = ccsub::run(cfg);
  } catch (const ccsub::GeometryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  const std::string text = ccsub::emit(report, cfg.format);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return 2;
    }
    f << text;
  }
  return report.passed ? 0 : 1;
}
