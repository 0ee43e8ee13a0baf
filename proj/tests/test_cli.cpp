#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "mifit/io/run.hpp"

using namespace mifit;
using nlohmann::json;

namespace {

std::string sample(const std::string& name) { return std::string(MIFIT_SAMPLES_DIR) + "/" + name; }

json report(const io::RunResult& r) {
  EXPECT_EQ(r.status, 0) << r.diagnostic;
  return json::parse(r.report);
}

}  // namespace

TEST(Cli, SiDeltaInstance) {
  const json r = report(io::run_file(sample("si_delta_z4.json")));
  EXPECT_EQ(r["error"].get<double>(), 0.0);
  EXPECT_LT(r["parseval_max_deviation"].get<double>(), 1e-9);
  EXPECT_LT(r["translation_parseval_max_deviation"].get<double>(), 1e-9);
  EXPECT_EQ(r["section"], json::parse("[[0],[1]]"));
  EXPECT_EQ(r["wiener_set"], json::array());
}

TEST(Cli, SiExtraInstance) {
  const json r = report(io::run_file(sample("si_extra_delta_z4.json")));
  EXPECT_NEAR(r["error"].get<double>(), 0.5, 1e-10);
  EXPECT_EQ(r["spectral_partition"], json::parse("[[[0],[1]],[[2],[3]]]"));
  EXPECT_EQ(r["fibers"][0]["picks"][0]["component"], 0);
}

TEST(Cli, ZeroWeightNamesFiber) {
  const io::RunResult r = io::run_file(sample("zero_weight.json"));
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.diagnostic.find("'b'"), std::string::npos) << r.diagnostic;
  EXPECT_NE(r.diagnostic.find("grid.weights[1]"), std::string::npos) << r.diagnostic;
}

TEST(Cli, FullLengthGivesZeroError) {
  const json r = report(io::run_file(sample("full_length.json")));
  EXPECT_EQ(r["error"].get<double>(), 0.0);
}

TEST(Cli, DecomposedInstance) {
  const json r = report(io::run_file(sample("mi_decomposed_diagonal.json")));
  EXPECT_NEAR(r["error"].get<double>(), 0.5, 1e-12);
  EXPECT_EQ(r["decomposable"], true);
  EXPECT_EQ(r["fibers"][0]["allocation"], json::parse("[1,0]"));
}

TEST(Cli, CheckTranslationInvariance) {
  const json r = report(io::run_file(sample("check_ti_delta.json")));
  EXPECT_EQ(r["translation_invariant"], false);
  EXPECT_EQ(r["totally_decomposable"], false);
}

TEST(Cli, ReportsAreByteIdentical) {
  for (const char* f : {"mi_two_fibers.json", "full_length.json", "si_extra_delta_z4.json"}) {
    io::RunOptions o;
    o.probe_samples = 50;
    const io::RunResult a = io::run_file(sample(f), o);
    const io::RunResult b = io::run_file(sample(f), o);
    EXPECT_EQ(a.status, 0);
    EXPECT_EQ(a.report, b.report);
  }
}

TEST(Cli, RoundTripOfGenerators) {
  std::ifstream in(sample("full_length.json"));
  std::stringstream buf;
  buf << in.rdbuf();
  json doc = json::parse(buf.str());
  for (std::size_t l : {1u, 2u}) {
    doc["length"] = l;
    const json r = report(io::run_document(doc.dump()));
    json again = doc;
    again["data"] = r["generators"];
    const json r2 = report(io::run_document(again.dump()));
    EXPECT_NEAR(r2["error"].get<double>(), 0.0, 1e-12);
  }
}

TEST(Cli, ProbeReportsPass) {
  io::RunOptions o;
  o.probe_samples = 200;
  o.seed = 3;
  const json r = report(io::run_file(sample("mi_two_fibers.json"), o));
  EXPECT_EQ(r["probe"]["passed"], true);
  EXPECT_EQ(r["probe"]["seed"], 3);
}

TEST(Cli, EpsilonFlagOverridesFile) {
  io::RunOptions o;
  o.epsilon = 0.5;
  const json r = report(io::run_document(
      R"({"kind":"mi","length":2,"epsilon":0.0,"grid":{"weights":[1]},"data":[[[1,0]],[[0,0.1]]]})", o));
  EXPECT_EQ(r["epsilon"].get<double>(), 0.5);
  EXPECT_EQ(r["fibers"][0]["rank"], 1);
}

TEST(Cli, ParseDiagnostics) {
  const io::RunResult a = io::run_document("{\n  \"kind\": \"mi\",\n  \"length\": }");
  EXPECT_EQ(a.status, 1);
  EXPECT_NE(a.diagnostic.find("line 3"), std::string::npos) << a.diagnostic;

  const io::RunResult b = io::run_document(R"({"kind":"mi","length":0,"grid":{"weights":[1]},"data":[[[1]]]})");
  EXPECT_EQ(b.status, 1);
  EXPECT_NE(b.diagnostic.find("length"), std::string::npos);

  const io::RunResult c = io::run_document(R"({"kind":"mi","length":1,"grid":{"weights":[1,1]},"data":[[[1],[1,2]]]})");
  EXPECT_EQ(c.status, 1);
  EXPECT_NE(c.diagnostic.find("data[0][1]"), std::string::npos) << c.diagnostic;

  const io::RunResult d = io::run_document(R"({"kind":"nope"})");
  EXPECT_EQ(d.status, 1);

  const io::RunResult e = io::run_document(
      R"({"kind":"si-extra","length":1,"group":[4],"lattice":{"elements":[[0],[2]]},"extra_lattice":{"elements":[[0]]},"signals":[[1,0,0,0]]})");
  EXPECT_EQ(e.status, 1);
  EXPECT_NE(e.diagnostic.find("extra_lattice"), std::string::npos);

  EXPECT_EQ(io::run_file("/nonexistent/problem.json").status, 1);
}

TEST(Cli, NumericalFailureMapsToStatusTwo) {
  const io::RunResult r = io::run_document(
      R"({"kind":"mi","length":1,"grid":{"weights":[1]},"data":[[[1e200,0]],[[0,1e200]]]})");
  EXPECT_EQ(r.status, 2) << r.diagnostic;
  EXPECT_NE(r.diagnostic.find("numerical failure"), std::string::npos);
}
