#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pencil_cli/cli.hpp"

using namespace pencil;
using namespace pencil::cli;
using ojson = nlohmann::ordered_json;

namespace {

const char* kBurgers = R"({
  "mode": "build-canonical",
  "canonical": {"eta": [[1]], "F": [[{"coeff": "1/2", "exps": [2]}]]}
})";

std::string canonical_n2(const std::string& mode, const std::string& f1, const std::string& f2) {
  return R"({"mode": ")" + mode + R"(", "canonical": {"eta": [[1,0],[0,1]], "F": [)" + f1 + "," + f2 + "]}}";
}

const std::string kSwapF1 = R"([{"coeff": "1/2", "exps": [2,0]}, {"coeff": "1/2", "exps": [0,2]}])";
const std::string kSwapF2 = R"([{"coeff": "1", "exps": [1,1]}])";
const std::string kBadF1 = R"([{"coeff": "1", "exps": [2,0]}])";

template <class F>
SpecError spec_error(F&& f) {
  try {
    f();
  } catch (const SpecError& e) {
    return e;
  }
  ADD_FAILURE() << "no SpecError";
  return SpecError(ErrorCode::Io, "", "");
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(ParseSpec, MinimalScalarCanonical) {
  const ProblemSpec s = parse_spec(kBurgers);
  EXPECT_EQ(s.mode, Mode::BuildCanonical);
  EXPECT_EQ(s.nvars, 1u);
  ASSERT_TRUE(s.canonical.has_value());
  EXPECT_EQ(s.canonical->F[0].str(), "1/2*u1^2");
  EXPECT_TRUE(s.canonical->psi.empty());
}

TEST(ParseSpec, NonSymmetricEtaRejected) {
  const SpecError e = spec_error([] {
    parse_spec(R"({"mode": "check-integrability", "canonical": {"eta": [[1,2],[3,4]], "F": [[],[]]}})");
  });
  EXPECT_EQ(e.code(), ErrorCode::NonSymmetricEta);
  EXPECT_EQ(e.path(), "$.canonical.eta");
}

TEST(ParseSpec, SingularEtaRejected) {
  const SpecError e = spec_error([] {
    parse_spec(R"({"mode": "check-integrability", "canonical": {"eta": [[1,1],[1,1]], "F": [[],[]]}})");
  });
  EXPECT_EQ(e.code(), ErrorCode::SingularEta);
}

TEST(ParseSpec, ZeroCoefficientNormalisedAway) {
  const ProblemSpec s = parse_spec(R"({"mode": "build-canonical", "canonical": {"eta": [[1]],
      "F": [[{"coeff": "0", "exps": [3]}, {"coeff": "1/2", "exps": [2]}, {"coeff": "0/5", "exps": [1]}]]}})");
  EXPECT_EQ(s.canonical->F[0].terms().size(), 1u);
  EXPECT_EQ(s.canonical->F[0], parse_spec(kBurgers).canonical->F[0]);
}

TEST(ParseSpec, DiagnosticsCarryJsonPath) {
  EXPECT_EQ(spec_error([] { parse_spec(canonical_n2("flow", R"([{"coeff": "1", "exps": [2]}])", "[]")); }).path(),
            "$.canonical.F[0][0].exps");
  EXPECT_EQ(spec_error([] { parse_spec(canonical_n2("flow", R"([{"coeff": "1/0", "exps": [2,0]}])", "[]")); }).path(),
            "$.canonical.F[0][0].coeff");
  EXPECT_EQ(spec_error([] { parse_spec(R"({"mode": "flow", "canonical": {"eta": [[1]], "F": [[]], "G": 1}})"); })
                .path(),
            "$.canonical.G");
  EXPECT_EQ(spec_error([] { parse_spec(R"({"mode": "fly", "canonical": {"eta": [[1]], "F": [[]]}})"); }).path(),
            "$.mode");
  EXPECT_EQ(spec_error([] { parse_spec("{not json"); }).path(), "$");
}

TEST(ParseSpec, PayloadMustMatchMode) {
  const std::string bracket = R"("bracket": {"metric": [[[{"coeff": "1", "exps": [0]}]]], "conn": [[[[]]]]})";
  EXPECT_EQ(spec_error([&] { parse_spec(R"({"mode": "flow", )" + bracket + "}"); }).code(), ErrorCode::Schema);
  EXPECT_EQ(spec_error([&] { parse_spec(R"({"mode": "check-compat", )" + bracket + "}"); }).path(), "$.eta");
  EXPECT_NO_THROW(parse_spec(R"({"mode": "check-bracket", )" + bracket + "}"));
  EXPECT_EQ(spec_error([] { parse_spec(R"({"mode": "simulate", "canonical": {"eta": [[1]], "F": [[]]}})"); }).path(),
            "$.simulation");
  EXPECT_EQ(spec_error([] {
              parse_spec(R"({"mode": "flow", "nvars": 2, "canonical": {"eta": [[1]], "F": [[]]}})");
            }).path(),
            "$.nvars");
}

TEST(ParseSpec, SignsFollowPsi) {
  EXPECT_EQ(spec_error([] {
              parse_spec(R"({"mode": "flow", "canonical": {"eta": [[1]], "F": [[]],
                  "psi": [[{"coeff": "1", "exps": [1]}]]}})");
            }).path(),
            "$.canonical.signs");
  EXPECT_EQ(spec_error([] {
              parse_spec(R"({"mode": "flow", "canonical": {"eta": [[1]], "F": [[]],
                  "psi": [[{"coeff": "1", "exps": [1]}]], "signs": [2]}})");
            }).path(),
            "$.canonical.signs[0]");
}

TEST(Run, IntegrablePairPasses) {
  const Report r = run_text(canonical_n2("check-integrability", kSwapF1, kSwapF2));
  EXPECT_EQ(r.status, Status::Pass);
  EXPECT_EQ(r.exit_code(), 0);
}

TEST(Run, NonIntegrablePairListsAss1) {
  const Report r = run_text(canonical_n2("check-integrability", kBadF1, kSwapF2));
  EXPECT_EQ(r.status, Status::Fail);
  EXPECT_EQ(r.exit_code(), 1);
  const auto ass1 = std::find_if(r.violations.begin(), r.violations.end(),
                                 [](const ojson& v) { return v["relation"] == "ass1"; });
  ASSERT_NE(ass1, r.violations.end());
  // Indices are reported 1-based.
  for (const auto& i : (*ass1)["indices"]) EXPECT_GE(i.get<int>(), 1);
  // The Hessians of u1^2 and u1 u2 fail to commute by a constant.
  EXPECT_EQ((*ass1)["residual"], "2");
}

TEST(Run, BuildCanonicalReportsBracket) {
  const Report r = run_text(kBurgers);
  EXPECT_EQ(r.status, Status::Pass);
  EXPECT_EQ(r.artifacts["bracket"]["metric"][0][0], "2*u1");
  EXPECT_EQ(r.artifacts["bracket"]["conn"][0][0][0], "1");
  EXPECT_TRUE(r.artifacts["bracket"]["tails"].empty());
}

TEST(Run, ReconstructRoundTripsPotentials) {
  std::string text = kBurgers;
  text.replace(text.find("build-canonical"), 15, "reconstruct");
  const Report r = run_text(text);
  ASSERT_EQ(r.status, Status::Pass) << render(r, Format::Text);
  EXPECT_EQ(r.artifacts["F"][0], "1/2*u1^2");
}

TEST(Run, FlowOfScalarQuadratic) {
  std::string text = kBurgers;
  text.replace(text.find("build-canonical"), 15, "flow");
  const Report r = run_text(text);
  EXPECT_EQ(r.status, Status::Pass);
  EXPECT_EQ(r.artifacts["flux"][0], "3/2*u1^2");
  EXPECT_EQ(r.artifacts["h2"], "1/2*u1^3");
}

TEST(Run, FlowOfNonIntegrableDataFails) {
  const Report r = run_text(canonical_n2("flow", kBadF1, kSwapF2));
  EXPECT_EQ(r.status, Status::Fail);
  EXPECT_FALSE(r.artifacts.contains("flux"));
}

TEST(Run, CheckCompatRejectsNonPoissonBracket) {
  const Report r = run_text(R"({"mode": "check-compat", "eta": [[1]],
      "bracket": {"metric": [[[{"coeff": "2", "exps": [1]}]]], "conn": [[[[]]]]}})");
  EXPECT_EQ(r.status, Status::Error);
  EXPECT_EQ(r.error_code, "NotPoisson");
  EXPECT_EQ(r.exit_code(), 2);
}

TEST(Run, CheckBracketFlagsRelation02) {
  const Report r = run_text(R"({"mode": "check-bracket",
      "bracket": {"metric": [[[{"coeff": "2", "exps": [1]}]]], "conn": [[[[]]]]}})");
  EXPECT_EQ(r.status, Status::Fail);
  EXPECT_EQ(r.violations[0]["relation"], "02");
  EXPECT_EQ(r.violations[0]["residual"], "2");
}

TEST(Run, SimulateTranslationWritesCsv) {
  const auto csv = std::filesystem::temp_directory_path() / "pencil_cli_translation.csv";
  std::filesystem::remove(csv);
  const Report r = run_text(R"({"mode": "simulate", "canonical": {"eta": [[1]], "F": [[{"coeff": "1/2", "exps": [1]}]]},
      "simulation": {"M": 32, "dt": 0.01, "steps": 10, "initial": [{"cos": [0.3]}], "drift_tolerance": 1e-10}})",
                            RunOptions{csv.string(), std::nullopt});
  EXPECT_EQ(r.status, Status::Pass) << render(r, Format::Text);
  ASSERT_TRUE(std::filesystem::exists(csv));
  const std::string body = read_file(csv);
  EXPECT_EQ(body.substr(0, body.find('\n')), "step,time,U1,H1,H2");
  EXPECT_EQ(std::count(body.begin(), body.end(), '\n'), 12);
  EXPECT_DOUBLE_EQ(r.artifacts["final_time"].get<double>(), 0.1);
}

TEST(Run, ModuleErrorsKeepTheirCode) {
  const Report r = run_text(R"({"mode": "simulate", "canonical": {"eta": [[1]], "F": [[{"coeff": "1/2", "exps": [2]}]]},
      "simulation": {"M": 24}})");
  EXPECT_EQ(r.status, Status::Error);
  EXPECT_EQ(r.error_code, "InvalidGrid");
  EXPECT_TRUE(r.violations.empty());
}

TEST(Run, InvolutionPassesOnCanonicalData) {
  const Report r = run_text(R"({"mode": "involution", "samples": 2, "canonical": {"eta": [[1]],
      "F": [[{"coeff": "1/2", "exps": [2]}]], "psi": [[{"coeff": "1/2", "exps": [2]}]], "signs": [1]}})");
  EXPECT_EQ(r.status, Status::Pass) << render(r, Format::Text);
  EXPECT_LT(r.artifacts["numeric_max"].get<double>(), 1e-10);
}

TEST(Render, ByteIdenticalAcrossRuns) {
  const std::string text = R"({"mode": "involution", "seed": 7, "samples": 2, "canonical": {"eta": [[1]],
      "F": [[{"coeff": "1/2", "exps": [2]}]]}})";
  EXPECT_EQ(render(run_text(text), Format::Json), render(run_text(text), Format::Json));
  const std::string bad = canonical_n2("check-integrability", kBadF1, kSwapF2);
  EXPECT_EQ(render(run_text(bad), Format::Text), render(run_text(bad), Format::Text));
}

TEST(Render, TimingOnlyOnRequest) {
  const Report r = run_text(kBurgers);
  EXPECT_EQ(render(r, Format::Json).find("timing"), std::string::npos);
  EXPECT_NE(render(r, Format::Json, true).find("timing"), std::string::npos);
}

TEST(Render, ErrorReportNamesCodeAndPath) {
  const auto j = ojson::parse(
      render(run_text(R"({"mode": "flow", "canonical": {"eta": [[1,2],[3,4]], "F": [[],[]]}})"), Format::Json));
  EXPECT_EQ(j["status"], "error");
  EXPECT_EQ(j["error"]["code"], "NonSymmetricEta");
  EXPECT_EQ(j["error"]["path"], "$.canonical.eta");
}

TEST(Run, SeedOverrideMovesSamplePoints) {
  const std::string text = read_file(std::filesystem::path(PENCIL_CLI_EXAMPLES) / "sphere_bracket.json");
  const Report a = run_text(text);
  const Report b = run_text(text, RunOptions{"", 99});
  ASSERT_EQ(a.status, Status::Pass);
  ASSERT_EQ(b.status, Status::Pass);
  EXPECT_NE(a.artifacts["geometry"][0]["point"], b.artifacts["geometry"][0]["point"]);
  for (const auto& g : b.artifacts["geometry"]) EXPECT_EQ(g["K"], "1");
}

TEST(Examples, AllParseAndRunWithoutError) {
  for (const auto& entry : std::filesystem::directory_iterator(PENCIL_CLI_EXAMPLES)) {
    if (entry.path().extension() != ".json") continue;
    const Report r = run_text(read_file(entry.path()));
    EXPECT_NE(r.status, Status::Error) << entry.path() << ": " << r.error_message;
  }
}
