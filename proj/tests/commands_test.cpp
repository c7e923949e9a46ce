#include "chebdes/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "chebdes/design.hpp"
#include "chebdes/errors.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace chebdes;
using nlohmann::json;

namespace {

JobConfig job_from(const std::string& text) { return parse_job(text); }

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::string first_field(const std::string& line) {
  return line.substr(0, line.find(','));
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path;
}

const char* kRayModel =
    R"("model": {"basis": "rational", "s": 0, "k": 1, "b": [-1.0],
                 "interval": {"lo": 0.0, "hi": "inf"}})";

}  // namespace

TEST_CASE("solve emits a verified design document") {
  const CommandResult res = run_job(job_from(std::string(R"({"command": "solve", )") +
                                             kRayModel +
                                             R"(, "criterion": {"type": "E"}})"));
  REQUIRE(res.exit_code == 0);
  const json doc = json::parse(res.output);
  REQUIRE(doc.contains("design"));
  REQUIRE(doc.contains("verification"));
  REQUIRE(doc.contains("lambda_min"));
  REQUIRE(doc.contains("efficiencies"));
  CHECK(doc["verification"]["verdict"] == "optimal");
  const auto support = doc["design"]["support"].get<std::vector<double>>();
  const auto weights = doc["design"]["weights"].get<std::vector<double>>();
  REQUIRE(support.size() == 2);
  CHECK(support[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(support[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  // two-point extremal weights for a single simple pole at -1
  const double r2 = std::sqrt(2.0);
  const double w1 = (2.0 * r2 + 4.0 + 3.0 * r2) / (2.0 * (4.0 * (1.0 + r2) + 7.0 + 5.0 * r2));
  CHECK(weights[0] == doctest::Approx(w1).epsilon(1e-9));
  CHECK(doc["lambda_min"].get<double>() ==
        doctest::Approx(doc["verification"]["lambda_min"].get<double>()).epsilon(1e-12));
  CHECK(doc["efficiencies"].size() == 2);
}

TEST_CASE("solve CSV carries a verdict line that reloads cleanly") {
  const CommandResult res = run_job(job_from(
      std::string(R"({"command": "solve", )") + kRayModel +
      R"(, "criterion": {"type": "c", "c": [0.0, 1.0]}, "output": {"format": "csv"}})"));
  REQUIRE(res.exit_code == 0);
  const auto lines = lines_of(res.output);
  REQUIRE(lines.size() == 4);  // header, two atoms, verdict comment
  CHECK(lines[0] == "point,weight");
  CHECK(lines[3] == "# verdict: optimal");
  const Design d = design_from_csv(res.output);  // comment line must be ignored
  REQUIRE(d.size() == 2);
  CHECK(d.weights[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("single-point efficiency sweep agrees with solve") {
  const std::string base = std::string(R"({"command": "sweep", )") + kRayModel +
                           R"(, "sweep": {"kind": "eff", "b_index": 1,
                               "from": -1.0, "to": -1.0, "steps": 1}})";
  const CommandResult swept = run_job(job_from(base));
  REQUIRE(swept.exit_code == 0);
  const json rows = json::parse(swept.output)["rows"];
  REQUIRE(rows.size() == 1);
  REQUIRE(rows[0]["ok"].get<bool>());

  const CommandResult solved = run_job(job_from(std::string(R"({"command": "solve", )") +
                                                kRayModel +
                                                R"(, "criterion": {"type": "E"}})"));
  const json effs = json::parse(solved.output)["efficiencies"];
  for (int i = 0; i < 2; ++i)
    CHECK(rows[0]["eff"][i].get<double>() == effs[i].get<double>());
}

TEST_CASE("support table lays out rows per column with a verdict") {
  const CommandResult res = run_job(job_from(
      R"({"command": "table1", "table": {"z": [0.5]},
          "output": {"format": "csv", "round": true}})"));
  REQUIRE(res.exit_code == 0);
  const auto lines = lines_of(res.output);
  REQUIRE(lines.size() == 9);
  const char* names[] = {"z", "t2", "t3", "t4", "w1", "w2", "w3", "w4", "verdict"};
  for (int i = 0; i < 9; ++i) CHECK(first_field(lines[i]) == names[i]);
  CHECK(lines[1] == "t2,0.15");
  CHECK(lines[3] == "t4,7.21");
  CHECK(lines[7] == "w4,0.36");
  CHECK(lines[8] == "verdict,optimal");
}

TEST_CASE("efficiency table emits only headers for an empty z list") {
  const CommandResult res = run_job(job_from(
      R"({"command": "table2", "table": {"z": []}, "output": {"format": "csv"}})"));
  REQUIRE(res.exit_code == 0);
  const auto lines = lines_of(res.output);
  REQUIRE(lines.size() == 10);
  CHECK(lines[0] == "z");
  CHECK(lines[1] == "eff1");
  CHECK(lines[5] == "limit_eff1");
  CHECK(lines[9] == "verdict");
}

TEST_CASE("efficiency table output is byte-identical across runs") {
  const char* cfg = R"({"command": "table2", "table": {"z": [0.3]}})";
  const CommandResult a = run_job(job_from(cfg));
  const CommandResult b = run_job(job_from(cfg));
  REQUIRE(a.exit_code == 0);
  CHECK(a.output == b.output);
}

TEST_CASE("ratio sweep flags impossible parameter values and continues") {
  const CommandResult res = run_job(job_from(
      R"({"command": "sweep",
          "model": {"basis": "rational", "s": 0, "k": 2, "b": [-1.0, -0.5],
                    "interval": {"lo": 0.0, "hi": "inf"}},
          "sweep": {"kind": "ratio", "b_index": 2, "from": -0.5, "to": -1.0, "steps": 3},
          "numeric": {"grid_size": 2000},
          "output": {"format": "csv"}})"));
  REQUIRE(res.exit_code == 0);
  const auto lines = lines_of(res.output);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "value,ratio,ok,message");
  CHECK(lines[1].find(",1,") != std::string::npos);       // valid row
  CHECK(lines[3].find(",nan,0,") != std::string::npos);   // collapsed pair flagged
  CHECK(lines[3].find("ascending") != std::string::npos);
  // the message cell must not smuggle extra separators into the row
  CHECK(std::count(lines[3].begin(), lines[3].end(), ',') == 3);
}

TEST_CASE("check verifies designs supplied as files") {
  // a genuine extremal design, saved as CSV by solve
  const CommandResult solved = run_job(job_from(
      std::string(R"({"command": "solve", )") + kRayModel +
      R"(, "criterion": {"type": "E"}, "output": {"format": "csv"}})"));
  const auto csv_path = temp_file("chebdes_check_design.csv", solved.output);
  const std::string check_cfg = std::string(R"({"command": "check", )") + kRayModel +
                                R"(, "criterion": {"type": "E"}, "design_path": ")" +
                                csv_path.string() + R"("})";
  const CommandResult checked = run_job(job_from(check_cfg));
  REQUIRE(checked.exit_code == 0);
  CHECK(json::parse(checked.output)["verification"]["verdict"] == "optimal");

  // same design as JSON input
  const Design d = design_from_csv(solved.output);
  const auto json_path = temp_file("chebdes_check_design.json", design_to_json(d));
  const std::string check_json_cfg = std::string(R"({"command": "check", )") + kRayModel +
                                     R"(, "criterion": {"type": "E"}, "design_path": ")" +
                                     json_path.string() + R"("})";
  CHECK(run_job(job_from(check_json_cfg)).exit_code == 0);

  std::filesystem::remove(csv_path);
  std::filesystem::remove(json_path);
}

TEST_CASE("failures map to the documented exit codes") {
  // unreadable design file: a user-input problem
  const CommandResult missing = run_job(job_from(
      std::string(R"({"command": "check", )") + kRayModel +
      R"(, "criterion": {"type": "E"}, "design_path": "/nonexistent/d.csv"})"));
  CHECK(missing.exit_code == 2);
  CHECK(json::parse(missing.output)["error"]["type"] == "config");

  // a one-point design makes the eigenvalue check numerically impossible
  const auto one_point = temp_file("chebdes_one_point.csv", "point,weight\n1.0,1.0\n");
  const CommandResult singular = run_job(job_from(
      std::string(R"({"command": "check", )") + kRayModel +
      R"(, "criterion": {"type": "E"}, "design_path": ")" + one_point.string() + R"("})"));
  CHECK(singular.exit_code == 3);
  CHECK(json::parse(singular.output)["error"]["type"] == "numeric");
  std::filesystem::remove(one_point);
}

TEST_CASE("asympt command emits the two fixed table layouts") {
  const char* model2 =
      R"("model": {"basis": "rational", "s": 0, "k": 2, "b": [-1.1, -0.9],
                   "interval": {"lo": 0.0, "hi": "inf"}})";
  const CommandResult exp = run_job(job_from(
      std::string(R"({"command": "asympt", )") + model2 +
      R"(, "asympt": {"mode": "expansion", "x": -1.0, "r": [-1.0, 1.0],
                      "delta": [0.2, 0.1]}, "output": {"format": "csv"}})"));
  REQUIRE(exp.exit_code == 0);
  auto lines = lines_of(exp.output);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "delta,error");
  const double e0 = std::stod(lines[1].substr(lines[1].find(',') + 1));
  const double e1 = std::stod(lines[2].substr(lines[2].find(',') + 1));
  CHECK(e1 < e0);  // the expansion tightens as the parameters collapse

  const CommandResult conv = run_job(job_from(
      std::string(R"({"command": "asympt", )") + model2 +
      R"(, "asympt": {"mode": "convergence", "x": -1.0, "r": [-1.0, 1.0],
                      "delta": [0.2, 0.1]}, "output": {"format": "csv"}})"));
  REQUIRE(conv.exit_code == 0);
  lines = lines_of(conv.output);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "delta,dist_estar,dist_c");
}
