#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli.hpp"

int main(int argc, char** argv) {
  using namespace triconv::cli;
  CLI::App app{"Triple autoconvolution laboratory for quartic-perturbed parabolas"};
  app.require_subcommand(1);

  std::string params;
  std::string out;
  std::vector<std::string> sets;
  const char* const about[] = {
      "regime thresholds and 24a-3lambda^3",
      "F(xi, eps) on a grid as CSV xi,eps,tau,F",
      "finite-difference Hessian of F at the origin against the closed form",
      "brute-force oracle against F as CSV xi,eps,formula,oracle,rel_err",
      "Gaussian trial ratios as CSV delta,ratio,foschi,gap",
      "Foschi constant, sup of the triple convolution, Hoelder cap",
      "pass/fail table of frame identities and closed-form checks",
  };
  for (std::size_t i = 0; i < std::size(kCommandNames); ++i) {
    auto* sub = app.add_subcommand(std::string(kCommandNames[i]), about[i]);
    sub->add_option("--params", params, "parameter file (r, lambda, a, phi)")->required();
    sub->add_option("--out", out, "output file; stdout when omitted");
    sub->add_option("--set", sets, "override key=value (repeatable)")->take_all();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  RunSpec spec;
  spec.command = *parse_command(app.get_subcommands().front()->get_name());
  spec.params_path = params;
  if (!out.empty()) spec.output_path = out;
  for (const auto& s : sets) {
    auto kv = split_override(s);
    if (!kv) {
      std::cerr << "triconv: usage: --set expects key=value, got '" << s << "'\n";
      return kUsage;
    }
    spec.overrides.push_back(std::move(*kv));
  }
  return run(spec, std::cout, std::cerr);
}
