#include "chebdes/commands.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "chebdes/asympt.hpp"
#include "chebdes/cheb.hpp"
#include "chebdes/design.hpp"
#include "chebdes/errors.hpp"
#include "chebdes/optimal.hpp"
#include "json.hpp"

namespace chebdes {

namespace {

using nlohmann::json;

std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num2(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// one CSV cell; messages may carry commas or newlines
std::string cell(const std::string& text) {
  std::string out = text;
  for (char& ch : out)
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json design_json(const Design& d) {
  return json{{"support", d.support}, {"weights", d.weights}};
}

json report_json(const VerificationReport& r) { return json::parse(report_to_json(r)); }

ModelSpec table_model(double z) {
  ModelSpec m;
  m.basis = BasisKind::Rational;
  m.s = 0;
  m.k = 2;
  m.b = {-1.0 - z, -1.0 + z};
  m.interval.lo = 0.0;
  m.interval.unbounded = true;
  m.validate();
  return m;
}

Design load_design(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parameter_error("design_path: cannot read \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos)
    throw parameter_error("design_path: \"" + path + "\" is empty");
  if (text[first] != '{') return design_from_csv(text);
  // Accept both a bare design object and a full solve document.
  const json j = json::parse(text, nullptr, false);
  if (j.is_object() && j.contains("design"))
    return design_from_json(j.at("design").dump());
  return design_from_json(text);
}

double info_lambda_min(const ModelSpec& model, const Design& d) {
  const InfoMode mode = model.a ? InfoMode::Nonlinear : InfoMode::Linearized;
  return sym_eigen(info_matrix(model, d, mode)).values[0];
}

// per-coordinate efficiencies; entries are null when the coordinate is not
// estimable under the design
json efficiency_list(const ModelSpec& model, const Design& d) {
  json out = json::array();
  for (int i = 1; i <= model.m(); ++i) {
    try {
      out.push_back(efficiency(model, d, i));
    } catch (const std::exception&) {
      out.push_back(nullptr);
    }
  }
  return out;
}

CommandResult cmd_solve(const JobConfig& job) {
  const ModelSpec& model = *job.model;
  Design d;
  VerificationReport rep;
  if (job.criterion->kind == CriterionKind::E) {
    d = design_estar(model);
    rep = verify_E(model, d, job.numeric.grid_size);
  } else {
    d = design_c(model, job.criterion->c);
    rep = verify_c(model, d, job.criterion->c, job.numeric.grid_size);
  }
  if (job.output.format == OutputFormat::Csv) {
    std::string out = design_to_csv(d);
    if (!out.empty() && out.back() != '\n') out += '\n';
    out += "# verdict: " + verdict_name(rep.verdict) + "\n";
    return {0, out};
  }
  json doc;
  doc["design"] = design_json(d);
  doc["verification"] = report_json(rep);
  doc["lambda_min"] = info_lambda_min(model, d);
  doc["efficiencies"] = efficiency_list(model, d);
  return {0, dump(doc)};
}

struct TableColumn {
  double z = 0.0;
  std::vector<double> values;  // row cells, in row order
  std::string verdict;         // verdict or flagged error text
  bool ok = false;
};

std::string table_csv(const std::vector<std::string>& row_names,
                      const std::vector<TableColumn>& cols, bool round) {
  std::ostringstream out;
  out << "z";
  for (const TableColumn& c : cols) out << "," << (round ? num2(c.z) : num17(c.z));
  out << "\n";
  for (size_t r = 0; r < row_names.size(); ++r) {
    out << row_names[r];
    for (const TableColumn& c : cols) {
      out << ",";
      if (c.ok)
        out << (round ? num2(c.values[r]) : num17(c.values[r]));
      else
        out << "nan";
    }
    out << "\n";
  }
  out << "verdict";
  for (const TableColumn& c : cols) out << "," << cell(c.verdict);
  out << "\n";
  return out.str();
}

json table_json(const std::vector<std::string>& row_names,
                const std::vector<TableColumn>& cols) {
  json doc;
  doc["rows"] = row_names;
  json jcols = json::array();
  for (const TableColumn& c : cols) {
    json jc;
    jc["z"] = c.z;
    if (c.ok) {
      jc["values"] = c.values;
      jc["verdict"] = c.verdict;
    } else {
      jc["error"] = c.verdict;
    }
    jcols.push_back(jc);
  }
  doc["columns"] = jcols;
  return doc;
}

CommandResult cmd_table1(const JobConfig& job) {
  const std::vector<std::string> rows = {"t2", "t3", "t4", "w1", "w2", "w3", "w4"};
  std::vector<TableColumn> cols;
  for (double z : job.table_z) {
    TableColumn col;
    col.z = z;
    try {
      const ModelSpec m = table_model(z);
      const Design d = design_estar(m);
      const VerificationReport rep = verify_E(m, d, job.numeric.grid_size);
      col.values = {d.support[1], d.support[2], d.support[3],
                    d.weights[0], d.weights[1], d.weights[2], d.weights[3]};
      col.verdict = verdict_name(rep.verdict);
      col.ok = true;
    } catch (const std::exception& e) {
      col.verdict = std::string("error: ") + e.what();
    }
    cols.push_back(std::move(col));
  }
  if (job.output.format == OutputFormat::Csv)
    return {0, table_csv(rows, cols, job.output.round)};
  return {0, dump(table_json(rows, cols))};
}

CommandResult cmd_table2(const JobConfig& job) {
  const std::vector<std::string> rows = {"eff1", "eff2", "eff3", "eff4",
                                         "limit_eff1", "limit_eff2", "limit_eff3",
                                         "limit_eff4"};
  std::optional<Design> limit;
  std::vector<TableColumn> cols;
  for (double z : job.table_z) {
    TableColumn col;
    col.z = z;
    try {
      const ModelSpec m = table_model(z);
      if (!limit) limit = limiting_design(m, -1.0);
      const Design d = design_estar(m);
      const VerificationReport rep = verify_E(m, d, job.numeric.grid_size);
      col.values.clear();
      for (int i = 1; i <= 4; ++i) col.values.push_back(efficiency(m, d, i));
      for (int i = 1; i <= 4; ++i) col.values.push_back(efficiency(m, *limit, i));
      col.verdict = verdict_name(rep.verdict);
      col.ok = true;
    } catch (const std::exception& e) {
      col.verdict = std::string("error: ") + e.what();
    }
    cols.push_back(std::move(col));
  }
  if (job.output.format == OutputFormat::Csv)
    return {0, table_csv(rows, cols, job.output.round)};
  return {0, dump(table_json(rows, cols))};
}

CommandResult cmd_sweep(const JobConfig& job) {
  const ModelSpec& base = *job.model;
  const SweepConfig& sw = *job.sweep;
  if (sw.kind == SweepKind::Ratio) {
    const std::vector<RatioRow> rows = eig_ratio_sweep(base, sw.b_index - 1, sw.from,
                                                       sw.to, sw.steps,
                                                       job.numeric.grid_size);
    if (job.output.format == OutputFormat::Csv) {
      std::ostringstream out;
      out << "value,ratio,ok,message\n";
      for (const RatioRow& r : rows)
        out << num17(r.value) << "," << (r.ok ? num17(r.ratio) : "nan") << ","
            << (r.ok ? 1 : 0) << "," << cell(r.message) << "\n";
      return {0, out.str()};
    }
    json jrows = json::array();
    for (const RatioRow& r : rows) {
      json jr;
      jr["value"] = r.value;
      if (r.ok) jr["ratio"] = r.ratio;
      jr["ok"] = r.ok;
      jr["message"] = r.message;
      jrows.push_back(jr);
    }
    return {0, dump(json{{"rows", jrows}})};
  }

  // efficiency sweep: all coordinate efficiencies of the extremal design
  const int m = base.m();
  struct EffRow {
    double value;
    std::vector<double> eff;
    bool ok;
    std::string message;
  };
  std::vector<EffRow> rows;
  for (int i = 0; i < sw.steps; ++i) {
    const double v = sw.steps == 1
                         ? sw.from
                         : sw.from + (sw.to - sw.from) * i / (sw.steps - 1);
    EffRow row{v, {}, false, ""};
    try {
      ModelSpec mod = base;
      mod.b[sw.b_index - 1] = v;
      mod.validate();
      const Design d = design_estar(mod);
      for (int j = 1; j <= m; ++j) row.eff.push_back(efficiency(mod, d, j));
      row.ok = true;
    } catch (const std::exception& e) {
      row.message = e.what();
    }
    rows.push_back(std::move(row));
  }
  if (job.output.format == OutputFormat::Csv) {
    std::ostringstream out;
    out << "value";
    for (int j = 1; j <= m; ++j) out << ",eff_" << j;
    out << ",ok,message\n";
    for (const EffRow& r : rows) {
      out << num17(r.value);
      for (int j = 0; j < m; ++j) out << "," << (r.ok ? num17(r.eff[j]) : "nan");
      out << "," << (r.ok ? 1 : 0) << "," << cell(r.message) << "\n";
    }
    return {0, out.str()};
  }
  json jrows = json::array();
  for (const EffRow& r : rows) {
    json jr;
    jr["value"] = r.value;
    if (r.ok) jr["eff"] = r.eff;
    jr["ok"] = r.ok;
    jr["message"] = r.message;
    jrows.push_back(jr);
  }
  return {0, dump(json{{"rows", jrows}})};
}

CommandResult cmd_asympt(const JobConfig& job) {
  const ModelSpec& model = *job.model;
  const AsymptConfig& as = *job.asympt;
  Vector r(as.r.begin(), as.r.end());
  if (as.mode == AsymptMode::Expansion) {
    const Design d = job.design_path.empty() ? limiting_design(model, as.x)
                                             : load_design(job.design_path);
    const std::vector<ExpansionRow> rows = expansion_check(model, as.x, r, d, as.delta);
    if (job.output.format == OutputFormat::Csv) {
      std::ostringstream out;
      out << "delta,error\n";
      for (const ExpansionRow& row : rows)
        out << num17(row.delta) << "," << (row.ok ? num17(row.error) : "nan") << "\n";
      return {0, out.str()};
    }
    json jrows = json::array();
    for (const ExpansionRow& row : rows) {
      json jr;
      jr["delta"] = row.delta;
      if (row.ok) {
        jr["error"] = row.error;
        jr["identity_residual"] = row.lv_error;
      }
      jr["ok"] = row.ok;
      jr["message"] = row.message;
      jrows.push_back(jr);
    }
    return {0, dump(json{{"rows", jrows}})};
  }

  const std::vector<ConvergenceRow> rows =
      as.c ? convergence_check_designs(model, as.x, r, as.delta, *as.c)
           : convergence_check_designs(model, as.x, r, as.delta);
  if (job.output.format == OutputFormat::Csv) {
    std::ostringstream out;
    out << "delta,dist_estar,dist_c\n";
    for (const ConvergenceRow& row : rows)
      out << num17(row.delta) << "," << (row.ok ? num17(row.dist_estar) : "nan") << ","
          << (row.ok ? num17(row.dist_c) : "nan") << "\n";
    return {0, out.str()};
  }
  json jrows = json::array();
  for (const ConvergenceRow& row : rows) {
    json jr;
    jr["delta"] = row.delta;
    if (row.ok) {
      jr["dist_estar"] = row.dist_estar;
      jr["dist_c"] = row.dist_c;
    }
    jr["ok"] = row.ok;
    jr["message"] = row.message;
    jrows.push_back(jr);
  }
  return {0, dump(json{{"rows", jrows}})};
}

CommandResult cmd_check(const JobConfig& job) {
  const ModelSpec& model = *job.model;
  Design d = load_design(job.design_path);
  d.validate(model.interval);
  const VerificationReport rep =
      job.criterion->kind == CriterionKind::E
          ? verify_E(model, d, job.numeric.grid_size)
          : verify_c(model, d, job.criterion->c, job.numeric.grid_size);
  if (job.output.format == OutputFormat::Csv) {
    std::ostringstream out;
    out << "key,value\n";
    out << "criterion," << rep.criterion << "\n";
    out << "verdict," << verdict_name(rep.verdict) << "\n";
    out << "lambda_min," << num17(rep.lambda_min) << "\n";
    if (rep.criterion == 'E') {
      out << "lambda_2," << num17(rep.lambda_2) << "\n";
      out << "lambda_cstar," << num17(rep.lambda_cstar) << "\n";
      out << "multiplicity," << rep.multiplicity << "\n";
    }
    out << "max_violation," << num17(rep.max_violation) << "\n";
    out << "argmax_point," << num17(rep.argmax_point) << "\n";
    out << "note," << cell(rep.note) << "\n";
    return {0, out.str()};
  }
  json doc;
  doc["design"] = design_json(d);
  doc["verification"] = report_json(rep);
  return {0, dump(doc)};
}

}  // namespace

CommandResult run_job(const JobConfig& job) {
  try {
    switch (job.command) {
      case CommandKind::Solve: return cmd_solve(job);
      case CommandKind::Table1: return cmd_table1(job);
      case CommandKind::Table2: return cmd_table2(job);
      case CommandKind::Sweep: return cmd_sweep(job);
      case CommandKind::Asympt: return cmd_asympt(job);
      case CommandKind::Check: return cmd_check(job);
    }
    throw parameter_error("run_job: unknown command");
  } catch (const parameter_error& e) {
    json err{{"error", {{"type", "config"}, {"message", e.what()}}}};
    return {2, dump(err)};
  } catch (const std::exception& e) {
    json err{{"error", {{"type", "numeric"}, {"message", e.what()}}}};
    return {3, dump(err)};
  }
}

}  // namespace chebdes
