#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pencil_cli/cli.hpp"

int main(int argc, char** argv) {
  using namespace pencil::cli;

  CLI::App app{"Nonlocal hydrodynamic Poisson brackets: exact checks, canonical pairs and flows"};
  std::string spec_path;
  std::string out_path;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::string csv_path;
  bool timing = false;
  app.add_option("--spec", spec_path, "Problem specification (JSON)")->required();
  app.add_option("--out", out_path, "Write the report here instead of stdout");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--seed", seed, "Override the sample-point seed of the problem file");
  app.add_option("--csv", csv_path, "simulate: conservation series as CSV");
  app.add_flag("--timing", timing, "Include wall-clock time in the report");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  Report report;
  std::ifstream in(spec_path);
  if (!in) {
    report.status = Status::Error;
    report.error_code = "Io";
    report.error_message = "cannot read " + spec_path;
  } else {
    std::ostringstream text;
    text << in.rdbuf();
    report = run_text(text.str(), RunOptions{csv_path, seed});
  }

  const std::string rendered = render(report, format == "text" ? Format::Text : Format::Json, timing);
  if (out_path.empty()) {
    std::cout << rendered;
  } else {
    std::ofstream out(out_path);
    out << rendered;
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return 2;
    }
  }
  return report.exit_code();
}
