#include <fstream>
#include <iostream>
#include <iterator>
#include <string>

#include <CLI11.hpp>

#include "cli_commands.hpp"

namespace {

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path);
  if (!in) throw qpolar::Error(qpolar::ErrorCode::ParseError, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

int main(int argc, char** argv) {
  using namespace qpolar;
  cli::Options opt;
  std::string form;
  std::string file;

  CLI::App app{"Polar decompositions and quaternion-tensor representations of 4x4 matrices"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--form", form, "group form: I22, I13, J4, F4, K4 or M_ef with e, f in {1,i,j,k}");
  app.add_option("--tol", opt.tol, "membership tolerance")->check(CLI::PositiveNumber);
  app.add_option("--given", opt.given, "block prescribed to complete: A, D or B")->check(CLI::IsMember({"A", "D", "B"}));
  app.add_option("--seed", opt.seed, "selftest seed");
  app.add_option("--count", opt.count, "selftest cases per suite")->check(CLI::NonNegativeNumber);
  app.add_option("--file", file, "input file (default: stdin)");

  auto* identify = app.add_subcommand("identify", "membership residuals for every supported form");
  auto* polar = app.add_subcommand("polar", "polar factors within the group");
  auto* rep = app.add_subcommand("rep", "quaternion-tensor representation");
  auto* complete = app.add_subcommand("complete", "positive definite completion from one block");
  auto* log = app.add_subcommand("log", "logarithm of a positive definite element of G_{I_{n,n}}");
  auto* component = app.add_subcommand("component", "connected component label");
  auto* selftest = app.add_subcommand("selftest", "seeded property checks");

  CLI11_PARSE(app, argc, argv);
  if (!form.empty()) opt.form = form;

  std::string command = app.get_subcommands().front()->get_name();
  try {
    nlohmann::json out;
    if (selftest->parsed()) {
      out = cli::cmd_selftest(opt);
    } else {
      const MatX m = cli::parse_matrix(read_input(file));
      if (identify->parsed()) out = cli::cmd_identify(m, opt);
      if (polar->parsed()) out = cli::cmd_polar(m, opt);
      if (rep->parsed()) out = cli::cmd_rep(m, opt);
      if (complete->parsed()) out = cli::cmd_complete(m, opt);
      if (log->parsed()) out = cli::cmd_log(m, opt);
      if (component->parsed()) out = cli::cmd_component(m, opt);
    }
    std::cout << out.dump(2) << '\n';
    if (selftest->parsed() && !out["result"]["pass"].get<bool>()) return 1;
    return 0;
  } catch (const Error& e) {
    std::cout << cli::error_json(command, e).dump(2) << '\n';
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
