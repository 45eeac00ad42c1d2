// Command-line front end: build a registered model, compute the requested
// invariant, emit a machine-readable report (and optional plot data).

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bztopo/bztopo.hpp"

namespace {

using bztopo::cli::RequestKind;

std::map<std::string, double> parse_params(const std::vector<std::string>& pairs) {
  std::map<std::string, double> params;
  for (const std::string& pair : pairs) {
    const auto eq = pair.find('=');
    bztopo::require(eq != std::string::npos && eq > 0, bztopo::errc::invalid_request,
                    "expected key=value, got '" + pair + "'");
    const std::string key = pair.substr(0, eq);
    const std::string value = pair.substr(eq + 1);
    bztopo::require(!params.count(key), bztopo::errc::invalid_request,
                    "parameter '" + key + "' given twice");
    try {
      std::size_t used = 0;
      params[key] = std::stod(value, &used);
      bztopo::require(used == value.size(), bztopo::errc::invalid_request,
                      "trailing characters in value '" + value + "'");
    } catch (const std::logic_error&) {
      bztopo::fail(bztopo::errc::invalid_request,
                   "cannot parse value '" + value + "' for parameter '" + key + "'");
    }
  }
  return params;
}

void write_outputs(const bztopo::cli::RunReport& report) {
  const std::string text = bztopo::cli::report_to_string(report);
  if (report.request.output_path) {
    std::ofstream out(*report.request.output_path, std::ios::binary);
    bztopo::require(out.good(), bztopo::errc::invalid_request,
                    "cannot open '" + *report.request.output_path + "' for writing");
    out << text;
  } else {
    std::cout << text;
  }
  const std::string curve = bztopo::cli::curve_to_tsv(report);
  if (!curve.empty()) {
    if (report.request.output_path) {
      const std::string path = *report.request.output_path + ".curve";
      std::ofstream out(path, std::ios::binary);
      bztopo::require(out.good(), bztopo::errc::invalid_request,
                      "cannot open '" + path + "' for writing");
      out << curve;
    } else {
      std::cout << curve;
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"topological invariants of tight-binding models on Brillouin tori"};
  app.set_version_flag("--version", std::string("bztopo ") + bztopo::kVersion);
  app.require_subcommand(1);

  // compute
  std::string model;
  std::vector<std::string> params;
  int grid_length = 0;
  std::string invariant;
  std::string out_path;
  bool emit_curve = false;
  CLI::App* compute = app.add_subcommand("compute", "invariant of a single model");
  compute->add_option("--model", model, "registered model name")->required();
  compute->add_option("--param", params, "model parameter key=value");
  compute->add_option("--grid", grid_length, "points per axis")->required();
  compute->add_option("--invariant", invariant, "winding1 | chern2 | winding3")
      ->required()
      ->check(CLI::IsMember({"winding1", "chern2", "winding3"}));
  compute->add_option("--out", out_path, "report file (default: stdout)");
  compute->add_flag("--emit-curve", emit_curve,
                    "also dump per-k phase (d=1) or plaquette flux (d=2) data");

  // relative
  std::string model_a, model_b;
  std::vector<std::string> params_a, params_b;
  bool via_triple = false;
  CLI::App* relative =
      app.add_subcommand("relative", "gauge-independent obstruction between two models");
  relative->add_option("--model-a", model_a, "first model name")->required();
  relative->add_option("--param-a", params_a, "first model parameter key=value");
  relative->add_option("--model-b", model_b, "second model name")->required();
  relative->add_option("--param-b", params_b, "second model parameter key=value");
  relative->add_option("--grid", grid_length, "points per axis")->required();
  relative->add_flag("--triple", via_triple,
                     "reduce through the formal difference triple");
  relative->add_option("--out", out_path, "report file (default: stdout)");
  relative->add_flag("--emit-curve", emit_curve, "dump the relative phase profile");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    bztopo::cli::RunRequest request;
    request.grid_length = grid_length;
    request.emit_curve = emit_curve;
    if (!out_path.empty()) request.output_path = out_path;

    bztopo::cli::RunReport report;
    if (compute->parsed()) {
      request.model = {model, parse_params(params)};
      request.invariant = *bztopo::cli::parse_request_kind(invariant);
      report = bztopo::cli::run(request);
    } else {
      request.model = {model_a, parse_params(params_a)};
      request.model_b = bztopo::cli::ModelRequest{model_b, parse_params(params_b)};
      request.invariant =
          via_triple ? RequestKind::TripleReduce : RequestKind::RelativeWinding;
      report = bztopo::cli::relative(request);
    }
    write_outputs(report);
    return bztopo::cli::exit_code(report);
  } catch (const bztopo::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bztopo::cli::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
