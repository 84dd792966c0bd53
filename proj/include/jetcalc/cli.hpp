#pragma once

#include "jetcalc/selftest.hpp"
#include "jetcalc/textio.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace jetcalc::cli {

enum class Format { Text, Latex, Json };

namespace detail {

inline std::string render(const DiffPoly& p, Format f) {
  return f == Format::Latex ? render_latex(p) : render_text(p);
}

inline std::string render(const VectorField& v, Format f) {
  return f == Format::Latex ? render_latex(v) : render_text(v);
}

// "V0" -> "V_{0}", "F4" -> "F_{4}"; "W_y" stays as is.
inline std::string latex_name(const std::string& name) {
  if (name == "W_y") return name;
  std::size_t split = name.size();
  while (split > 0 && std::isdigit(static_cast<unsigned char>(name[split - 1]))) --split;
  if (split == name.size()) return name;
  return name.substr(0, split) + "_{" + name.substr(split) + "}";
}

inline void emit(std::ostream& out, Format f, const std::string& text,
                 const nlohmann::json& payload) {
  if (f == Format::Json)
    out << payload.dump(2) << "\n";
  else
    out << text;
}

}  // namespace detail

/// Runs one command. Exit code 0 on success, 1 when a verification item
/// fails, 2 on usage or input errors.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact variational and divergence symmetry analysis of y^(n) = 0"};
  app.require_subcommand(1);
  app.fallthrough();

  Format format = Format::Text;
  const std::map<std::string, Format> format_names{
      {"text", Format::Text}, {"latex", Format::Latex}, {"json", Format::Json}};
  app.add_option("--format", format, "output format: text, latex or json")
      ->transform(CLI::CheckedTransformer(format_names, CLI::ignore_case));
  int jet_limit_flag = 64;
  app.add_option("--jet-limit", jet_limit_flag, "maximum jet order")
      ->check(CLI::Range(1, 1 << 20));
  std::uint64_t seed = 12345;
  app.add_option("--seed", seed, "seed for the randomized selftest");
  std::string out_path;
  app.add_option("--out", out_path, "write the command's JSON payload to this file");

  auto* cmd_equation = app.add_subcommand("equation", "print the order-n equation");
  int eq_n = 0;
  bool eq_general = false;
  cmd_equation->add_option("n", eq_n, "equation order")->required();
  cmd_equation->add_flag("--general-q", eq_general, "use the symbolic-coefficient form");
  cmd_equation->fallthrough();

  auto* cmd_lagrangian = app.add_subcommand("lagrangian", "print the order-n Lagrangian");
  int lag_n = 0;
  bool lag_general = false;
  cmd_lagrangian->add_option("n", lag_n, "equation order (even)")->required();
  cmd_lagrangian->add_flag("--general-q", lag_general, "use the symbolic-coefficient form");
  cmd_lagrangian->fallthrough();

  auto* cmd_symmetries = app.add_subcommand("symmetries", "print the n+4 symmetry generators");
  int sym_n = 0;
  cmd_symmetries->add_option("n", sym_n, "equation order")->required();
  cmd_symmetries->fallthrough();

  auto* cmd_classify =
      app.add_subcommand("classify", "point / divergence / variational status of a field");
  int cls_n = 0;
  std::string cls_spec, cls_lagrangian;
  cmd_classify->add_option("n", cls_n, "equation order")->required();
  cmd_classify->add_option("spec", cls_spec, "vector field, e.g. \"2*V0 - 3*G + W\"")
      ->required();
  cmd_classify->add_option("--lagrangian", cls_lagrangian,
                           "expression to use instead of the canonical Lagrangian");
  cmd_classify->fallthrough();

  auto* cmd_integral =
      app.add_subcommand("first-integral", "first integral attached to a divergence symmetry");
  int fi_n = 0;
  std::string fi_spec;
  cmd_integral->add_option("n", fi_n, "equation order")->required();
  cmd_integral->add_option("spec", fi_spec, "vector field")->required();
  cmd_integral->fallthrough();

  auto* cmd_verify = app.add_subcommand("verify", "run the order-by-order verification");
  int verify_max = 8;
  int verify_ceiling = kDefaultConjectureCeiling;
  cmd_verify->add_option("--max-order", verify_max, "largest order to verify");
  cmd_verify->add_option("--ceiling", verify_ceiling, "hard cap on the verified order");
  cmd_verify->fallthrough();

  auto* cmd_selftest = app.add_subcommand("selftest", "randomized operator property checks");
  int st_cases = 200;
  cmd_selftest->add_option("--cases", st_cases, "cases per property")->check(CLI::Range(1, 100000));
  cmd_selftest->fallthrough();

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("jetcalc");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(argv_store.size());
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  int exit_code = 0;
  nlohmann::json payload;
  std::string text;

  try {
    set_jet_limit(jet_limit_flag);

    if (cmd_equation->parsed()) {
      const MaximalEquation eq =
          equation(eq_n, eq_general ? EquationForm::GeneralQ : EquationForm::Canonical);
      text = detail::render(eq.delta, format) + "\n";
      payload = {{"schema", kJsonSchema},
                 {"command", "equation"},
                 {"n", eq.n},
                 {"form", eq_general ? "general-q" : "canonical"},
                 {"delta", to_json(eq.delta)}};
    } else if (cmd_lagrangian->parsed()) {
      const DiffPoly density =
          lagrangian(lag_n, lag_general ? EquationForm::GeneralQ : EquationForm::Canonical);
      text = detail::render(density, format) + "\n";
      payload = {{"schema", kJsonSchema},
                 {"command", "lagrangian"},
                 {"n", lag_n},
                 {"form", lag_general ? "general-q" : "canonical"},
                 {"lagrangian", to_json(density)}};
    } else if (cmd_symmetries->parsed()) {
      const SymmetryFrame fr = frame(sym_n);
      nlohmann::json gens = nlohmann::json::array();
      for (const auto& [name, field] : fr.generators) {
        text += (format == Format::Latex ? detail::latex_name(name) : name) + " = " +
                detail::render(field, format) + "\n";
        gens.push_back({{"name", name}, {"field", to_json(field)}});
      }
      payload = {{"schema", kJsonSchema},
                 {"command", "symmetries"},
                 {"n", sym_n},
                 {"generators", gens}};
    } else if (cmd_classify->parsed()) {
      const VectorField v = parse_vector_spec(cls_spec, cls_n);
      const bool point = is_point_symmetry(v, cls_n);
      const DiffPoly div_defect = divergence_defect(v, DiffPoly::y(cls_n));
      const bool divergence = div_defect.is_zero();

      const bool even = cls_n % 2 == 0;
      DiffPoly var_defect;
      bool variational = false;
      if (even) {
        const DiffPoly density = cls_lagrangian.empty()
                                     ? lagrangian(cls_n, EquationForm::Canonical)
                                     : parse_expression(cls_lagrangian);
        var_defect = variational_defect(v, density, cls_n);
        variational = var_defect.is_zero();
      }

      text = std::string("point symmetry: ") + (point ? "yes" : "no") + "; divergence: " +
             (divergence ? "YES" : "NO (defect " + detail::render(div_defect, format) + ")");
      if (even)
        text += std::string("; variational: ") +
                (variational ? "YES" : "NO (defect " + detail::render(var_defect, format) + ")");
      else
        text += "; variational: n/a (odd order)";
      text += "\n";

      payload = {{"schema", kJsonSchema},
                 {"command", "classify"},
                 {"n", cls_n},
                 {"spec", cls_spec},
                 {"point_symmetry", point},
                 {"divergence",
                  {{"symmetry", divergence}, {"defect", to_json(div_defect)}}},
                 {"variational",
                  {{"applicable", even},
                   {"symmetry", variational},
                   {"defect", to_json(var_defect)}}}};
    } else if (cmd_integral->parsed()) {
      const VectorField v = parse_vector_spec(fi_spec, fi_n);
      const FirstIntegral fi = first_integral(v, fi_n, fi_spec);
      const DiffPoly law = characteristic(v) * DiffPoly::y(fi_n);
      text = detail::render(fi.expr, format) + "\n";
      text += "D_x F = " + detail::render(fi.expr.total_derivative(), format) + "\n";
      text += "Q*Delta = " + detail::render(law, format) + "\n";
      payload = {{"schema", kJsonSchema},
                 {"command", "first-integral"},
                 {"n", fi_n},
                 {"spec", fi_spec},
                 {"integral", to_json(fi)},
                 {"conservation_law", to_json(law)}};
    } else if (cmd_verify->parsed()) {
      const ConjectureReport rep = verify_conjecture(verify_max, verify_ceiling);
      for (const auto& it : rep.items) {
        std::ostringstream line;
        line << "n=" << std::left << std::setw(3) << it.n << " " << std::setw(28) << it.check
             << " " << (it.pass ? "PASS" : "FAIL")
             << (it.extrapolation ? " [extrapolation]" : "") << "  " << it.detail << "\n";
        text += line.str();
      }
      std::ostringstream summary;
      summary << rep.items.size() << " checks, " << rep.items.size() - rep.failures()
              << " passed, " << rep.failures() << " failed\n";
      text += summary.str();
      payload = to_json(rep);
      if (!rep.all_pass()) exit_code = 1;
    } else if (cmd_selftest->parsed()) {
      const auto results = selftest::run_all(seed, st_cases);
      nlohmann::json items = nlohmann::json::array();
      bool ok = true;
      for (const auto& r : results) {
        std::ostringstream line;
        line << std::left << std::setw(28) << r.name << " " << r.cases << " cases  "
             << (r.ok() ? "ok" : "FAIL (" + r.note + ")") << "\n";
        text += line.str();
        items.push_back({{"name", r.name},
                         {"cases", r.cases},
                         {"failures", r.failures},
                         {"note", r.note}});
        ok = ok && r.ok();
      }
      payload = {{"schema", kJsonSchema},
                 {"command", "selftest"},
                 {"seed", seed},
                 {"cases", st_cases},
                 {"results", items}};
      if (!ok) exit_code = 1;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  detail::emit(out, format, text, payload);

  if (!out_path.empty()) {
    std::ofstream file(out_path);
    if (!file) {
      err << "error: cannot write " << out_path << "\n";
      return 2;
    }
    file << payload.dump(2) << "\n";
  }
  return exit_code;
}

}  // namespace jetcalc::cli
