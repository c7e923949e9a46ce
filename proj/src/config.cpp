#include "chebdes/config.hpp"

#include <cmath>
#include <initializer_list>
#include <string>

#include "chebdes/asympt.hpp"
#include "chebdes/errors.hpp"
#include "json.hpp"

namespace chebdes {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw parameter_error("config: " + msg); }

void expect_keys(const json& obj, const std::string& ctx,
                 std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) bad("unknown key \"" + item.key() + "\" in " + ctx);
  }
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double get_double(const json& j, const std::string& ctx) {
  if (!j.is_number()) bad(ctx + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(ctx + " must be finite");
  return v;
}

int get_int(const json& j, const std::string& ctx) {
  if (!j.is_number_integer()) bad(ctx + " must be an integer");
  return j.get<int>();
}

std::string get_string(const json& j, const std::string& ctx) {
  if (!j.is_string()) bad(ctx + " must be a string");
  return j.get<std::string>();
}

bool get_bool(const json& j, const std::string& ctx) {
  if (!j.is_boolean()) bad(ctx + " must be a boolean");
  return j.get<bool>();
}

std::vector<double> get_double_list(const json& j, const std::string& ctx) {
  if (!j.is_array()) bad(ctx + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(get_double(e, "entry of " + ctx));
  return out;
}

ModelSpec parse_model(const json& obj) {
  if (!obj.is_object()) bad("\"model\" must be an object");
  expect_keys(obj, "\"model\"", {"basis", "s", "k", "b", "a", "interval"});
  for (const char* key : {"basis", "s", "k", "b", "interval"})
    if (!find(obj, key)) bad(std::string("\"model\" requires \"") + key + "\"");

  ModelSpec m;
  const std::string basis = get_string(obj["basis"], "model.basis");
  if (basis == "rational")
    m.basis = BasisKind::Rational;
  else if (basis == "exponential")
    m.basis = BasisKind::Exponential;
  else if (basis == "logarithmic")
    m.basis = BasisKind::Logarithmic;
  else
    bad("model.basis must be \"rational\", \"exponential\" or \"logarithmic\"");

  m.s = get_int(obj["s"], "model.s");
  m.k = get_int(obj["k"], "model.k");
  m.b = get_double_list(obj["b"], "model.b");
  if (const json* a = find(obj, "a")) m.a = get_double_list(*a, "model.a");

  const json& iv = obj["interval"];
  if (!iv.is_object()) bad("model.interval must be an object");
  expect_keys(iv, "\"model.interval\"", {"lo", "hi"});
  if (!find(iv, "lo") || !find(iv, "hi")) bad("model.interval requires \"lo\" and \"hi\"");
  m.interval.lo = get_double(iv["lo"], "model.interval.lo");
  if (iv["hi"].is_string()) {
    if (iv["hi"].get<std::string>() != "inf")
      bad("model.interval.hi must be a number or \"inf\"");
    m.interval.unbounded = true;
    m.interval.hi = 0.0;
  } else {
    m.interval.hi = get_double(iv["hi"], "model.interval.hi");
    m.interval.unbounded = false;
  }
  m.validate();
  return m;
}

CriterionConfig parse_criterion(const json& obj) {
  if (!obj.is_object()) bad("\"criterion\" must be an object");
  expect_keys(obj, "\"criterion\"", {"type", "c"});
  if (!find(obj, "type")) bad("\"criterion\" requires \"type\"");
  CriterionConfig cr;
  const std::string type = get_string(obj["type"], "criterion.type");
  if (type == "E") {
    cr.kind = CriterionKind::E;
    if (find(obj, "c")) bad("criterion.c is only valid with type \"c\"");
  } else if (type == "c") {
    cr.kind = CriterionKind::C;
    if (!find(obj, "c")) bad("criterion type \"c\" requires a \"c\" vector");
    cr.c = get_double_list(obj["c"], "criterion.c");
    bool nonzero = false;
    for (double v : cr.c) nonzero = nonzero || v != 0.0;
    if (!nonzero) bad("criterion.c must be nonzero");
  } else {
    bad("criterion.type must be \"E\" or \"c\"");
  }
  return cr;
}

NumericConfig parse_numeric(const json& obj) {
  if (!obj.is_object()) bad("\"numeric\" must be an object");
  expect_keys(obj, "\"numeric\"", {"grid_size", "tol", "seed"});
  NumericConfig n;
  if (const json* g = find(obj, "grid_size")) {
    n.grid_size = get_int(*g, "numeric.grid_size");
    if (n.grid_size < 10) bad("numeric.grid_size must be at least 10");
  }
  if (const json* t = find(obj, "tol")) {
    n.tol = get_double(*t, "numeric.tol");
    if (n.tol <= 0.0) bad("numeric.tol must be positive");
  }
  if (const json* s = find(obj, "seed")) {
    if (!s->is_number_integer() || s->get<long long>() < 0)
      bad("numeric.seed must be a nonnegative integer");
    n.seed = s->get<unsigned long>();
  }
  return n;
}

OutputConfig parse_output(const json& obj) {
  if (!obj.is_object()) bad("\"output\" must be an object");
  expect_keys(obj, "\"output\"", {"format", "path", "round"});
  OutputConfig o;
  if (const json* f = find(obj, "format")) {
    const std::string fmt = get_string(*f, "output.format");
    if (fmt == "json")
      o.format = OutputFormat::Json;
    else if (fmt == "csv")
      o.format = OutputFormat::Csv;
    else
      bad("output.format must be \"json\" or \"csv\"");
  }
  if (const json* p = find(obj, "path")) o.path = get_string(*p, "output.path");
  if (const json* r = find(obj, "round")) o.round = get_bool(*r, "output.round");
  return o;
}

SweepConfig parse_sweep(const json& obj) {
  if (!obj.is_object()) bad("\"sweep\" must be an object");
  expect_keys(obj, "\"sweep\"", {"kind", "b_index", "from", "to", "steps"});
  for (const char* key : {"kind", "from", "to", "steps"})
    if (!find(obj, key)) bad(std::string("\"sweep\" requires \"") + key + "\"");
  SweepConfig s;
  const std::string kind = get_string(obj["kind"], "sweep.kind");
  if (kind == "eff")
    s.kind = SweepKind::Efficiency;
  else if (kind == "ratio")
    s.kind = SweepKind::Ratio;
  else
    bad("sweep.kind must be \"eff\" or \"ratio\"");
  if (const json* b = find(obj, "b_index")) s.b_index = get_int(*b, "sweep.b_index");
  s.from = get_double(obj["from"], "sweep.from");
  s.to = get_double(obj["to"], "sweep.to");
  s.steps = get_int(obj["steps"], "sweep.steps");
  if (s.steps < 1) bad("sweep.steps must be at least 1");
  return s;
}

AsymptConfig parse_asympt(const json& obj) {
  if (!obj.is_object()) bad("\"asympt\" must be an object");
  expect_keys(obj, "\"asympt\"", {"mode", "x", "r", "delta", "c"});
  for (const char* key : {"mode", "x", "r"})
    if (!find(obj, key)) bad(std::string("\"asympt\" requires \"") + key + "\"");
  AsymptConfig a;
  const std::string mode = get_string(obj["mode"], "asympt.mode");
  if (mode == "expansion")
    a.mode = AsymptMode::Expansion;
  else if (mode == "convergence")
    a.mode = AsymptMode::Convergence;
  else
    bad("asympt.mode must be \"expansion\" or \"convergence\"");
  a.x = get_double(obj["x"], "asympt.x");
  a.r = get_double_list(obj["r"], "asympt.r");
  if (const json* d = find(obj, "delta")) {
    a.delta = get_double_list(*d, "asympt.delta");
    if (a.delta.empty()) bad("asympt.delta must be nonempty");
    for (double v : a.delta)
      if (v <= 0.0) bad("asympt.delta entries must be positive");
  } else {
    a.delta = default_delta_list();
  }
  if (const json* c = find(obj, "c")) {
    if (a.mode != AsymptMode::Convergence) bad("asympt.c is only valid in convergence mode");
    a.c = get_double_list(*c, "asympt.c");
  }
  return a;
}

struct BlockRule {
  bool model, criterion, table, sweep, asympt, design_path;
};

// required/allowed blocks per command; numeric and output are always optional
BlockRule rule_for(CommandKind cmd) {
  switch (cmd) {
    case CommandKind::Solve:
      return {true, true, false, false, false, false};
    case CommandKind::Table1:
    case CommandKind::Table2:
      return {false, false, true, false, false, false};
    case CommandKind::Sweep:
      return {true, false, false, true, false, false};
    case CommandKind::Asympt:
      return {true, false, false, false, true, false};
    case CommandKind::Check:
      return {true, true, false, false, false, true};
  }
  bad("unreachable command");
}

}  // namespace

std::string command_name(CommandKind k) {
  switch (k) {
    case CommandKind::Solve: return "solve";
    case CommandKind::Table1: return "table1";
    case CommandKind::Table2: return "table2";
    case CommandKind::Sweep: return "sweep";
    case CommandKind::Asympt: return "asympt";
    case CommandKind::Check: return "check";
  }
  return "?";
}

CommandKind command_from_name(const std::string& name) {
  if (name == "solve") return CommandKind::Solve;
  if (name == "table1") return CommandKind::Table1;
  if (name == "table2") return CommandKind::Table2;
  if (name == "sweep") return CommandKind::Sweep;
  if (name == "asympt") return CommandKind::Asympt;
  if (name == "check") return CommandKind::Check;
  bad("unknown command \"" + name + "\"");
}

JobConfig parse_job(const std::string& json_text,
                    const std::optional<std::string>& forced_command) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) bad("top level must be an object");
  expect_keys(root, "the top level",
              {"command", "model", "criterion", "numeric", "output", "table", "sweep",
               "asympt", "design_path"});

  JobConfig job;
  const json* cmd = find(root, "command");
  if (!cmd && !forced_command) bad("\"command\" is required");
  if (cmd) {
    job.command = command_from_name(get_string(*cmd, "command"));
    if (forced_command && command_name(job.command) != *forced_command)
      bad("command \"" + command_name(job.command) + "\" in the config does not match \"" +
          *forced_command + "\"");
  } else {
    job.command = command_from_name(*forced_command);
  }

  const BlockRule rule = rule_for(job.command);
  const std::string cname = command_name(job.command);

  if (const json* m = find(root, "model")) {
    if (!rule.model) bad("\"model\" is not valid for command \"" + cname + "\"");
    job.model = parse_model(*m);
  } else if (rule.model) {
    bad("command \"" + cname + "\" requires a \"model\" block");
  }

  if (const json* c = find(root, "criterion")) {
    if (!rule.criterion) bad("\"criterion\" is not valid for command \"" + cname + "\"");
    job.criterion = parse_criterion(*c);
  } else if (rule.criterion) {
    bad("command \"" + cname + "\" requires a \"criterion\" block");
  }

  if (const json* n = find(root, "numeric")) job.numeric = parse_numeric(*n);
  if (const json* o = find(root, "output")) job.output = parse_output(*o);

  if (const json* t = find(root, "table")) {
    if (!rule.table) bad("\"table\" is not valid for command \"" + cname + "\"");
    if (!t->is_object()) bad("\"table\" must be an object");
    expect_keys(*t, "\"table\"", {"z"});
    if (!find(*t, "z")) bad("\"table\" requires \"z\"");
    job.table_z = get_double_list((*t)["z"], "table.z");
    for (double z : job.table_z)
      if (!(z > 0.0 && z < 1.0)) bad("table.z entries must lie strictly between 0 and 1");
  } else if (rule.table) {
    bad("command \"" + cname + "\" requires a \"table\" block");
  }

  if (const json* s = find(root, "sweep")) {
    if (!rule.sweep) bad("\"sweep\" is not valid for command \"" + cname + "\"");
    job.sweep = parse_sweep(*s);
  } else if (rule.sweep) {
    bad("command \"" + cname + "\" requires a \"sweep\" block");
  }

  if (const json* a = find(root, "asympt")) {
    if (!rule.asympt) bad("\"asympt\" is not valid for command \"" + cname + "\"");
    job.asympt = parse_asympt(*a);
  } else if (rule.asympt) {
    bad("command \"" + cname + "\" requires an \"asympt\" block");
  }

  if (const json* p = find(root, "design_path")) {
    const bool allowed = rule.design_path ||
                         (job.command == CommandKind::Asympt && job.asympt &&
                          job.asympt->mode == AsymptMode::Expansion);
    if (!allowed) bad("\"design_path\" is not valid for command \"" + cname + "\"");
    job.design_path = get_string(*p, "design_path");
    if (job.design_path.empty()) bad("design_path must be a nonempty path");
  } else if (rule.design_path) {
    bad("command \"" + cname + "\" requires \"design_path\"");
  }

  // cross-block consistency
  if (job.model) {
    const int m = job.model->m();
    if (job.criterion && job.criterion->kind == CriterionKind::C &&
        static_cast<int>(job.criterion->c.size()) != m)
      bad("criterion.c must have length " + std::to_string(m) +
          " to match the model");
    if (job.sweep) {
      if (job.sweep->b_index < 1 || job.sweep->b_index > job.model->k)
        bad("sweep.b_index must select one of the model's nonlinear parameters");
    }
    if (job.asympt) {
      if (static_cast<int>(job.asympt->r.size()) != job.model->k)
        bad("asympt.r must have length equal to model.k");
      if (job.asympt->c && static_cast<int>(job.asympt->c->size()) != m)
        bad("asympt.c must have length " + std::to_string(m) +
            " to match the model");
    }
  }
  return job;
}

}  // namespace chebdes
