#pragma once

// Command-line front end. Exit codes: 0 success, 2 input error, 3 budget
// exceeded.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "searchreal/errors.hpp"
#include "searchreal/expr.hpp"
#include "searchreal/optimize.hpp"
#include "searchreal/reals.hpp"
#include "searchreal/regress.hpp"
#include "searchreal/searcher.hpp"

namespace searchreal::cli {

using json = nlohmann::ordered_json;

inline constexpr int exit_ok = 0;
inline constexpr int exit_input = 2;
inline constexpr int exit_budget = 3;

inline constexpr const char* result_schema = "searchreal/result/v1";
inline constexpr std::size_t default_digits = 20;
inline constexpr std::size_t max_precision = 64;

struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// formatting

inline std::string bound_string(std::size_t digits) { return "2^-" + std::to_string(digits); }

inline json real_json(const std::string& name, const rational& approx, std::size_t digits) {
  json j;
  if (!name.empty()) j["name"] = name;
  j["decimal"] = to_decimal(approx);
  j["dyadic"] = rational_string(approx);
  j["bound"] = bound_string(digits);
  return j;
}

inline json i_json(const std::string& name, const i_real& x, std::size_t digits) {
  return real_json(name, eval_prefix(x, digits), digits);
}

inline json u_json(const u_real& x, std::size_t digits) { return real_json("", eval_prefix(x, digits), digits); }

// ---------------------------------------------------------------------------
// input parsing

/// A rational in [-1, 1] written as "a/b", an integer, or a decimal.
inline rational parse_number(const std::string& text) {
  try {
    expr::program p = expr::parse(text);
    if (p.components.size() == 1) {
      if (const auto* lit = std::get_if<expr::rational_lit>(&p.components[0]->v)) return lit->value;
    }
  } catch (const expr::parse_error& e) {
    throw input_error("bad number '" + text + "': " + e.what());
  }
  throw input_error("bad number '" + text + "'");
}

inline std::string trim(std::string s) {
  auto space = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), space));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), space).base(), s.end());
  return s;
}

/// Rows `x,y` after a header line `x,y`, sorted by x.
inline std::vector<std::pair<rational, rational>> read_points(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "x,y") throw input_error("data CSV must start with the header x,y");
  std::vector<std::pair<rational, rational>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw input_error("data line " + std::to_string(line_no) + ": expected two fields");
    }
    rows.emplace_back(parse_number(trim(line.substr(0, comma))), parse_number(trim(line.substr(comma + 1))));
  }
  if (rows.empty()) throw input_error("data CSV has no rows");
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return rows;
}

inline const json& require(const json& j, const char* key) {
  if (!j.contains(key)) throw input_error(std::string("problem file is missing \"") + key + "\"");
  return j.at(key);
}

inline std::vector<std::string> string_list(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_array()) throw input_error(std::string("\"") + key + "\" must be an array of strings");
  std::vector<std::string> out;
  for (const auto& s : v) {
    if (!s.is_string()) throw input_error(std::string("\"") + key + "\" must be an array of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

inline std::size_t precision_of(const json& j) {
  const json& v = require(j, "precision");
  if (!v.is_number_unsigned() || v.get<std::uint64_t>() > max_precision) {
    throw input_error("\"precision\" must be an integer in [0, " + std::to_string(max_precision) + "]");
  }
  return v.get<std::size_t>();
}

inline rational epsilon_of(const json& j) {
  const json& v = require(j, "epsilon");
  if (!v.is_string()) throw input_error("\"epsilon\" must be a rational string such as \"1/16\"");
  rational e = parse_number(v.get<std::string>());
  if (e <= 0 || e > 1) throw input_error("\"epsilon\" must lie in (0, 1]");
  return e;
}

inline expr::program program_of(const json& j, const std::vector<std::string>& variables) {
  std::string text;
  for (const auto& e : string_list(j, "expressions")) text += (text.empty() ? "" : ";\n") + e;
  return expr::parse(text, variables);
}

// ---------------------------------------------------------------------------
// commands

struct options {
  std::string command;
  std::string problem_path;
  std::string out_path;
  std::uint64_t budget = default_budget;
  std::optional<std::size_t> digits;
  bool already_unit = false;
  std::string expr_text;
  std::vector<std::string> bindings;
};

struct outcome {
  json result;
  bool validated = false;
  std::vector<std::pair<std::string, std::string>> sidecars;  // path, contents
};

inline json stats_json(const search_budget& budget, std::chrono::steady_clock::time_point start) {
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  return {{"predicate_evaluations", budget.used()}, {"budget", budget.limit()}, {"wall_time_ms", ms.count()}};
}

inline outcome cmd_solve(const json& problem, std::size_t digits, search_budget& budget) {
  std::vector<std::string> vars = string_list(problem, "variables");
  if (vars.empty()) throw input_error("\"variables\" must not be empty");
  expr::program prog = program_of(problem, vars);
  std::size_t p = precision_of(problem);
  rational eps = epsilon_of(problem);

  equation_system sys{vars.size(), prog.components.size(),
                      [prog](const std::vector<i_real>& v) { return expr::evaluate(prog, v); },
                      [prog](const std::vector<std::size_t>& d) { return expr::modulus_of(prog, d); }};
  solve_result r = solve_system(sys, p, budget);
  outcome o;
  o.validated = u_lt(r.loss, u_from_rational(eps), p);
  json sol = json::array();
  for (std::size_t i = 0; i < vars.size(); ++i) sol.push_back(i_json(vars[i], r.solution[i], digits));
  json residuals = json::array();
  for (const i_real& res : expr::evaluate(prog, r.solution)) residuals.push_back(i_json("", res, digits));
  o.result["solution"] = sol;
  o.result["residuals"] = residuals;
  o.result["loss"] = u_json(r.loss, digits);
  o.result["modulus"] = r.modulus.to_string();
  return o;
}

inline std::string grid_csv(const expr::program& prog, const std::vector<std::string>& vars, bool already_unit,
                            std::size_t digits) {
  std::size_t per_axis = vars.size() == 1 ? 33 : (vars.size() == 2 ? 17 : 5);
  std::ostringstream csv;
  for (const auto& v : vars) csv << v << ",";
  csv << "f\n";
  std::vector<std::size_t> idx(vars.size(), 0);
  while (true) {
    std::vector<rational> point;
    std::vector<i_real> env;
    for (std::size_t i : idx) {
      rational x = rational(2 * static_cast<long>(i), static_cast<long>(per_axis - 1)) - 1;
      point.push_back(x);
      env.push_back(i_from_rational(x));
    }
    i_real e = expr::evaluate(prog.components[0], env);
    u_real f = already_unit ? truncate(e) : truncate(multiply(e, e));
    for (const rational& x : point) csv << rational_string(x) << ",";
    csv << to_decimal(eval_prefix(f, digits)) << "\n";
    std::size_t pos = idx.size();
    while (pos-- > 0) {
      if (++idx[pos] < per_axis) break;
      idx[pos] = 0;
      if (pos == 0) return csv.str();
    }
  }
}

inline outcome cmd_minimize(const json& problem, const options& opt, std::size_t digits, search_budget& budget) {
  std::vector<std::string> vars = string_list(problem, "variables");
  if (vars.empty()) throw input_error("\"variables\" must not be empty");
  expr::program prog = program_of(problem, vars);
  if (prog.components.size() != 1) throw input_error("minimize takes exactly one expression");
  std::size_t p = precision_of(problem);
  bool already_unit = opt.already_unit || problem.value("already_unit", false);

  expr::expr body = prog.components[0];
  std::size_t k = vars.size();
  objective_function f{i_tuple_descriptor(k),
                       [body, k, already_unit](const value& v) {
                         i_real e = expr::evaluate(body, unpack_reals(v, k));
                         return already_unit ? truncate(e) : truncate(multiply(e, e));
                       },
                       [body, k, already_unit](std::size_t n) {
                         return i_tuple_precision(expr::modulus_of(body, k, already_unit ? n : multiply_modulus(n)));
                       }};
  argmin_result r = argmin(f, p, budget);
  outcome o;
  o.validated = true;
  if (problem.contains("epsilon")) o.validated = u_lt(r.score, u_from_rational(epsilon_of(problem)), p);
  json sol = json::array();
  std::vector<i_real> point = unpack_reals(r.point, k);
  for (std::size_t i = 0; i < k; ++i) sol.push_back(i_json(vars[i], point[i], digits));
  o.result["solution"] = sol;
  o.result["value"] = u_json(r.score, digits);
  o.result["modulus"] = r.modulus.to_string();
  if (!opt.out_path.empty()) {
    std::filesystem::path grid = opt.out_path;
    grid.replace_extension(".grid.csv");
    o.result["grid"] = grid.filename().string();
    o.sidecars.emplace_back(grid.string(), grid_csv(prog, vars, already_unit, digits));
  }
  return o;
}

inline model expression_model(const json& spec) {
  std::vector<std::string> params = string_list(spec, "params");
  if (params.empty()) throw input_error("model \"params\" must not be empty");
  std::string input = spec.value("input", std::string("x"));
  std::vector<std::string> vars = params;
  vars.push_back(input);
  expr::program prog = program_of(json{{"expressions", require(spec, "exprs")}}, vars);
  if (prog.components.size() != 1) throw input_error("model \"exprs\" must hold exactly one expression");
  expr::expr body = prog.components[0];
  std::size_t k = params.size();
  auto instantiate = [body, k](const value& kv) {
    std::vector<i_real> env = unpack_reals(kv, k);
    return real_function([body, env](const i_real& x) {
      std::vector<i_real> full = env;
      full.push_back(x);
      return expr::evaluate(body, full);
    });
  };
  auto weak = [body, k](const precision& q) {
    std::vector<std::size_t> d = expr::modulus_of(body, k + 1, q.length());
    d.pop_back();
    return i_tuple_precision(d);
  };
  return {i_tuple_descriptor(k), instantiate, weak};
}

inline outcome cmd_fit(const json& problem, const std::filesystem::path& base, std::size_t digits,
                       search_budget& budget) {
  std::size_t p = precision_of(problem);
  rational eps = epsilon_of(problem);
  const json& data = require(problem, "data");
  if (!data.is_string()) throw input_error("\"data\" must be a CSV path");
  std::filesystem::path csv_path = data.get<std::string>();
  if (csv_path.is_relative()) csv_path = base / csv_path;
  std::ifstream in(csv_path);
  if (!in) throw input_error("cannot open data file " + csv_path.string());
  auto rows = read_points(in);

  const json& spec = require(problem, "model");
  std::vector<std::string> names;
  json scale;
  auto make_model = [&]() -> model {
    if (spec.contains("poly")) {
      if (!spec["poly"].is_number_unsigned() || spec["poly"].get<std::uint64_t>() > 8) {
        throw input_error("model \"poly\" must be a degree in [0, 8]");
      }
      std::size_t degree = spec["poly"].get<std::size_t>();
      for (std::size_t i = 0; i <= degree; ++i) names.push_back("k" + std::to_string(i));
      scale = "1/" + std::to_string(std::size_t{1} << tree_depth(degree + 1));
      return polynomial_model(degree);
    }
    if (spec.contains("exprs")) {
      names = string_list(spec, "params");
      return expression_model(spec);
    }
    throw input_error("model must be {\"poly\": degree} or {\"exprs\": [...], \"params\": [...]}");
  };
  model m = make_model();

  std::vector<std::pair<i_real, i_real>> points;
  for (const auto& [x, y] : rows) points.emplace_back(i_from_rational(x), i_from_rational(y));
  offline_result r = offline_regress(m, points, u_from_rational(eps), p, budget);

  outcome o;
  o.validated = r.validated;
  json coeffs = json::array();
  std::vector<i_real> ks = unpack_reals(r.parameter, names.size());
  for (std::size_t i = 0; i < names.size(); ++i) coeffs.push_back(i_json(names[i], ks[i], digits));
  o.result["solution"] = coeffs;
  if (!scale.is_null()) o.result["model_scale"] = scale;
  o.result["loss"] = u_json(r.loss, digits);
  o.result["points"] = rows.size();
  return o;
}

inline outcome cmd_eval_problem(const json& problem, std::size_t digits) {
  std::vector<std::string> vars = problem.contains("variables") ? string_list(problem, "variables")
                                                                 : std::vector<std::string>{};
  expr::program prog = program_of(problem, vars);
  std::vector<i_real> env;
  const json bindings = problem.value("bindings", json::object());
  for (const auto& v : vars) {
    if (!bindings.contains(v) || !bindings[v].is_string()) throw input_error("no binding for variable '" + v + "'");
    env.push_back(i_from_rational(parse_number(bindings[v].get<std::string>())));
  }
  outcome o;
  o.validated = true;
  json values = json::array();
  for (const i_real& x : expr::evaluate(prog, env)) values.push_back(i_json("", x, digits));
  o.result["values"] = values;
  return o;
}

inline int cmd_eval_inline(const options& opt, std::ostream& out) {
  std::vector<std::string> vars;
  std::vector<i_real> env;
  for (const std::string& b : opt.bindings) {
    auto eq = b.find('=');
    if (eq == std::string::npos) throw input_error("binding '" + b + "' must look like name=value");
    vars.push_back(trim(b.substr(0, eq)));
    env.push_back(i_from_rational(parse_number(trim(b.substr(eq + 1)))));
  }
  expr::program prog = expr::parse(opt.expr_text, vars);
  std::size_t digits = opt.digits.value_or(10);
  for (const i_real& x : expr::evaluate(prog, env)) {
    out << to_decimal(eval_prefix(x, digits)) << " \xC2\xB1 " << bound_string(digits) << "\n";
  }
  return exit_ok;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw input_error("cannot write " + path);
  f << text;
}

inline void emit(const json& doc, const options& opt, std::ostream& out) {
  std::string text = doc.dump(2) + "\n";
  if (opt.out_path.empty()) {
    out << text;
  } else {
    write_text(opt.out_path, text);
  }
}

inline int run_problem(const options& opt, std::ostream& out, std::ostream& err) {
  json problem;
  {
    std::ifstream f(opt.problem_path);
    if (!f) throw input_error("cannot open problem file " + opt.problem_path);
    try {
      problem = json::parse(f);
    } catch (const json::parse_error& e) {
      throw input_error(std::string("problem file is not valid JSON: ") + e.what());
    }
  }
  if (!problem.is_object()) throw input_error("problem file must hold a JSON object");
  const json& kind = require(problem, "kind");
  if (!kind.is_string() || kind.get<std::string>() != opt.command) {
    throw input_error("problem kind does not match the command '" + opt.command + "'");
  }
  std::size_t digits = opt.digits.value_or(problem.value("digits", default_digits));
  std::filesystem::path base = std::filesystem::path(opt.problem_path).parent_path();

  search_budget budget(opt.budget);
  auto start = std::chrono::steady_clock::now();
  json doc;
  doc["schema"] = result_schema;
  doc["command"] = opt.command;
  doc["inputs"] = problem;
  try {
    outcome o;
    if (opt.command == "solve") {
      o = cmd_solve(problem, digits, budget);
    } else if (opt.command == "minimize") {
      o = cmd_minimize(problem, opt, digits, budget);
    } else if (opt.command == "fit") {
      o = cmd_fit(problem, base, digits, budget);
    } else {
      o = cmd_eval_problem(problem, digits);
    }
    for (auto& [k, v] : o.result.items()) doc[k] = v;
    doc["validated"] = o.validated;
    doc["stats"] = stats_json(budget, start);
    for (const auto& [path, text] : o.sidecars) write_text(path, text);
    emit(doc, opt, out);
    return exit_ok;
  } catch (const budget_exceeded& e) {
    doc["error"] = {{"kind", "budget_exceeded"}, {"message", e.what()}, {"required", e.bound()},
                    {"budget", e.budget()}};
    doc["validated"] = false;
    doc["stats"] = stats_json(budget, start);
    emit(doc, opt, out);
    err << "searchreal: " << e.what() << "\n";
    return exit_budget;
  }
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"searchreal: exact-real global search, equation solving and regression"};
  app.require_subcommand(1);
  options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--problem", opt.problem_path, "problem JSON file");
    sub->add_option("--out", opt.out_path, "result JSON file (stdout when omitted)");
    sub->add_option("--budget", opt.budget, "maximum number of predicate or objective evaluations");
    sub->add_option("--digits", opt.digits, "digits printed for each result");
  };
  CLI::App* eval = app.add_subcommand("eval", "evaluate expressions");
  add_common(eval);
  eval->add_option("--expr", opt.expr_text, "expression, components separated by ';'");
  eval->add_option("--bind", opt.bindings, "variable binding name=value")->take_all();
  CLI::App* solve = app.add_subcommand("solve", "solve a system of equations");
  add_common(solve);
  CLI::App* minimize = app.add_subcommand("minimize", "global minimum of an expression");
  add_common(minimize);
  minimize->add_flag("--already-unit", opt.already_unit, "the expression is already a loss in [0, 1]");
  CLI::App* fit = app.add_subcommand("fit", "fit a model to CSV data");
  add_common(fit);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "searchreal: " << e.what() << "\n";
    return exit_input;
  }
  opt.command = app.get_subcommands().front()->get_name();

  try {
    if (opt.command == "eval" && opt.problem_path.empty()) {
      if (opt.expr_text.empty()) throw input_error("eval needs --expr or --problem");
      return cmd_eval_inline(opt, out);
    }
    if (opt.problem_path.empty()) throw input_error(opt.command + " needs --problem");
    return run_problem(opt, out, err);
  } catch (const budget_exceeded& e) {
    err << "searchreal: " << e.what() << "\n";
    return exit_budget;
  } catch (const std::invalid_argument& e) {
    // input_error, domain_error and expr::parse_error
    err << "searchreal: " << e.what() << "\n";
    return exit_input;
  } catch (const structural_error& e) {
    err << "searchreal: " << e.what() << "\n";
    return exit_input;
  }
}

}  // namespace searchreal::cli
