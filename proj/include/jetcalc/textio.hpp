#pragma once

#include "jetcalc/catalog.hpp"

#include <json.hpp>

#include <cctype>
#include <cstddef>
#include <string>
#include <vector>

namespace jetcalc {

inline constexpr const char* kJsonSchema = "jetcalc/1";

struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t off)
      : Error("syntax error at offset " + std::to_string(off) + ": " + msg), offset(off) {}
  std::size_t offset;
};

namespace detail {

struct Token {
  enum class Type { Number, Ident, Plus, Minus, Star, Caret, LParen, RParen, End };
  Type type;
  std::string text;
  std::size_t pos;
};

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t size = src.size();
  while (i < size) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < size && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      // a slash directly after an integer starts the denominator
      if (i < size && src[i] == '/') {
        if (i + 1 >= size || !std::isdigit(static_cast<unsigned char>(src[i + 1])))
          throw ParseError("expected digits after '/'", i + 1);
        ++i;
        while (i < size && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      }
      out.push_back({Token::Type::Number, src.substr(start, i - start), start});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < size &&
             (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_'))
        ++i;
      out.push_back({Token::Type::Ident, src.substr(start, i - start), start});
      continue;
    }
    Token::Type type;
    switch (c) {
      case '+': type = Token::Type::Plus; break;
      case '-': type = Token::Type::Minus; break;
      case '*': type = Token::Type::Star; break;
      case '^': type = Token::Type::Caret; break;
      case '(': type = Token::Type::LParen; break;
      case ')': type = Token::Type::RParen; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
    out.push_back({type, std::string(1, c), start});
    ++i;
  }
  out.push_back({Token::Type::End, "", size});
  return out;
}

// "y12" -> jet order 12; empty digit tail means order 0. Returns -1 when the
// identifier is not of the requested letter-plus-digits shape.
inline int jet_suffix(const std::string& text, char letter) {
  if (text.empty() || text[0] != letter) return -1;
  if (text.size() == 1) return 0;
  int order = 0;
  for (std::size_t i = 1; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return -1;
    if (i > 7) return -2;  // absurdly long index
    order = order * 10 + (text[i] - '0');
  }
  return order;
}

inline Rational rational_of(const Token& tok) {
  const auto slash = tok.text.find('/');
  if (slash == std::string::npos) return Rational::from_strings(tok.text, "1");
  return Rational::from_strings(tok.text.substr(0, slash), tok.text.substr(slash + 1));
}

class ExprParser {
 public:
  explicit ExprParser(const std::string& src) : toks_(lex(src)) {}

  DiffPoly parse() {
    DiffPoly p = expression();
    expect(Token::Type::End, "unexpected trailing input");
    return p;
  }

 private:
  const Token& peek() const { return toks_[at_]; }
  const Token& advance() { return toks_[at_++]; }
  bool accept(Token::Type t) {
    if (peek().type != t) return false;
    ++at_;
    return true;
  }
  const Token& expect(Token::Type t, const char* msg) {
    if (peek().type != t) throw ParseError(msg, peek().pos);
    return toks_[at_++];
  }

  DiffPoly expression() {
    bool negate = false;
    if (!accept(Token::Type::Plus) && accept(Token::Type::Minus)) negate = true;
    DiffPoly acc = term();
    if (negate) acc = -acc;
    while (true) {
      if (accept(Token::Type::Plus))
        acc = acc + term();
      else if (accept(Token::Type::Minus))
        acc = acc - term();
      else
        return acc;
    }
  }

  DiffPoly term() {
    DiffPoly acc = factor();
    while (accept(Token::Type::Star)) acc = acc * factor();
    return acc;
  }

  DiffPoly factor() {
    DiffPoly base = atom();
    if (!accept(Token::Type::Caret)) return base;
    const Token& e = peek();
    if (e.type != Token::Type::Number || e.text.find('/') != std::string::npos)
      throw ParseError("expected a positive integer exponent", e.pos);
    ++at_;
    if (e.text.size() > 4) throw ParseError("exponent too large", e.pos);
    const int exp = std::stoi(e.text);
    if (exp < 1) throw ParseError("expected a positive integer exponent", e.pos);
    return pow(base, static_cast<unsigned>(exp));
  }

  DiffPoly atom() {
    const Token& tok = peek();
    switch (tok.type) {
      case Token::Type::Number:
        ++at_;
        return DiffPoly::constant(rational_of(tok));
      case Token::Type::LParen: {
        ++at_;
        DiffPoly p = expression();
        expect(Token::Type::RParen, "expected ')'");
        return p;
      }
      case Token::Type::Ident: {
        ++at_;
        if (tok.text == "x") return DiffPoly::x();
        for (const char letter : {'y', 'q'}) {
          const int order = jet_suffix(tok.text, letter);
          if (order == -2) throw ParseError("jet index too large", tok.pos);
          if (order >= 0) {
            if (order > jet_limit())
              throw ParseError("jet order " + std::to_string(order) + " exceeds limit " +
                                   std::to_string(jet_limit()),
                               tok.pos);
            return letter == 'y' ? DiffPoly::y(order) : DiffPoly::q(order);
          }
        }
        return DiffPoly::param(tok.text);
      }
      default:
        throw ParseError("expected a value", tok.pos);
    }
  }

  std::vector<Token> toks_;
  std::size_t at_ = 0;
};

}  // namespace detail

/// Parses the expression grammar: sums of '*'-separated factors, '^' with a
/// positive integer exponent, atoms being rationals, x, y<j>, q<j>,
/// parenthesized expressions, or parameter names. Bare 'y' and 'q' mean the
/// zeroth jet.
inline DiffPoly parse_expression(const std::string& src) {
  return detail::ExprParser(src).parse();
}

/// Parses a linear combination of frame generators such as
/// "2*V0 - 3*G + W" or "a2*V2 + gamma*H". Coefficients may be rationals and
/// parameter names; V indices must be below the equation order.
inline VectorField parse_vector_spec(const std::string& src, int n) {
  const SymmetryFrame fr = frame(n);
  const auto toks = detail::lex(src);
  using T = detail::Token::Type;
  std::size_t at = 0;

  auto generator_of = [&fr, n](const std::string& name,
                               std::size_t pos) -> const VectorField* {
    if (name == "W" || name == "W_y") return &fr.homogeneity();
    if (name.size() >= 2 && name[0] == 'V') {
      const int k = detail::jet_suffix(name, 'V');
      if (k < 0) return nullptr;
      if (k >= n)
        throw ParseError("generator " + name + " out of range for order " + std::to_string(n),
                         pos);
      return &fr.solution(k);
    }
    if (name[0] == 'F' || name[0] == 'G' || name[0] == 'H') {
      const int suffix = detail::jet_suffix(name, name[0]);
      if (suffix < 0) return nullptr;
      if (suffix != 0 && suffix != n)
        throw ParseError("generator " + name + " does not match order " + std::to_string(n),
                         pos);
      if (name[0] == 'F') return &fr.sl2_f();
      if (name[0] == 'G') return &fr.sl2_g();
      return &fr.sl2_h();
    }
    return nullptr;
  };

  VectorField acc;
  bool first = true;
  while (true) {
    bool negate = false;
    if (first) {
      if (toks[at].type == T::Plus)
        ++at;
      else if (toks[at].type == T::Minus) {
        negate = true;
        ++at;
      }
    } else {
      if (toks[at].type == T::End) break;
      if (toks[at].type == T::Plus)
        ++at;
      else if (toks[at].type == T::Minus) {
        negate = true;
        ++at;
      } else {
        throw ParseError("expected '+' or '-'", toks[at].pos);
      }
    }
    first = false;

    DiffPoly coeff = DiffPoly::one();
    const VectorField* gen = nullptr;
    while (true) {
      const detail::Token& tok = toks[at];
      if (tok.type == T::Number) {
        ++at;
        coeff = coeff * DiffPoly::constant(detail::rational_of(tok));
      } else if (tok.type == T::Ident) {
        ++at;
        if (const VectorField* g = generator_of(tok.text, tok.pos)) {
          if (gen) throw ParseError("more than one generator in a term", tok.pos);
          gen = g;
        } else {
          if (tok.text == "x" || detail::jet_suffix(tok.text, 'y') >= 0 ||
              detail::jet_suffix(tok.text, 'q') >= 0)
            throw ParseError("'" + tok.text + "' cannot appear in a vector spec", tok.pos);
          coeff = coeff * DiffPoly::param(tok.text);
        }
      } else {
        throw ParseError("unknown symbol", tok.pos);
      }
      if (toks[at].type != T::Star) break;
      ++at;
    }
    if (!gen) throw ParseError("term names no generator", toks[at].pos);
    VectorField part = gen->scaled(coeff);
    acc = acc + (negate ? -part : part);
  }
  return acc;
}

namespace detail {

inline std::string var_text(const VarId& v) {
  switch (v.kind()) {
    case VarKind::Indep: return "x";
    case VarKind::JetY: return v.order() == 0 ? "y" : "y" + std::to_string(v.order());
    case VarKind::JetQ: return v.order() == 0 ? "q" : "q" + std::to_string(v.order());
    case VarKind::Param: return v.tag();
  }
  throw Error("unreachable");
}

inline bool is_greek(const std::string& s) {
  static const char* names[] = {"alpha", "beta",  "gamma", "delta", "epsilon", "zeta",
                                "eta",   "theta", "kappa", "lambda", "mu",     "nu",
                                "rho",   "sigma", "tau",   "phi",   "chi",    "omega"};
  for (const char* g : names)
    if (s == g) return true;
  return false;
}

inline std::string var_latex(const VarId& v) {
  switch (v.kind()) {
    case VarKind::Indep:
      return "x";
    case VarKind::JetY:
      return v.order() == 0 ? "y" : "y_{" + std::to_string(v.order()) + "}";
    case VarKind::JetQ:
      return v.order() == 0 ? "q" : "q_{" + std::to_string(v.order()) + "}";
    case VarKind::Param: {
      const std::string& tag = v.tag();
      std::size_t split = tag.size();
      while (split > 0 && std::isdigit(static_cast<unsigned char>(tag[split - 1]))) --split;
      std::string head = tag.substr(0, split), digits = tag.substr(split);
      if (is_greek(head)) head = "\\" + head;
      return digits.empty() ? head : head + "_{" + digits + "}";
    }
  }
  throw Error("unreachable");
}

// Parameter factors print first, like coefficients.
template <typename NameFn>
std::string mono_render(const Monomial& m, const char* sep, const char* exp_open,
                        const char* exp_close, NameFn&& name) {
  std::string out;
  auto emit = [&](const VarId& v, int e) {
    if (!out.empty()) out += sep;
    out += name(v);
    if (e > 1) out += exp_open + std::to_string(e) + exp_close;
  };
  for (const auto& [v, e] : m.factors())
    if (v.kind() == VarKind::Param) emit(v, e);
  for (const auto& [v, e] : m.factors())
    if (v.kind() != VarKind::Param) emit(v, e);
  return out;
}

inline std::string mono_text(const Monomial& m) {
  return mono_render(m, "*", "^", "", var_text);
}

inline std::string mono_latex(const Monomial& m) {
  return mono_render(m, " ", "^{", "}", var_latex);
}

inline std::string coeff_latex(const Rational& r) {
  if (r.den_str() == "1") return r.num_str();
  return "\\frac{" + r.num_str() + "}{" + r.den_str() + "}";
}

}  // namespace detail

/// Deterministic plain-text rendering, terms in descending monomial order.
/// parse_expression inverts it exactly.
inline std::string render_text(const DiffPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    const bool neg = c.sign() < 0;
    const Rational a = neg ? -c : c;
    out += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
    const std::string mono = detail::mono_text(m);
    if (mono.empty()) {
      out += a.str();
    } else {
      if (!a.is_one()) out += a.str() + "*";
      out += mono;
    }
    first = false;
  }
  return out;
}

inline std::string render_latex(const DiffPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    const bool neg = c.sign() < 0;
    const Rational a = neg ? -c : c;
    out += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
    const std::string mono = detail::mono_latex(m);
    if (mono.empty()) {
      out += detail::coeff_latex(a);
    } else {
      if (!a.is_one()) out += detail::coeff_latex(a) + " ";
      out += mono;
    }
    first = false;
  }
  return out;
}

inline std::string render_text(const VectorField& v) {
  if (v.is_zero()) return "0";
  std::string out;
  auto emit = [&out](const DiffPoly& c, const char* sym) {
    if (c.is_zero()) return;
    if (!out.empty()) out += " + ";
    if (c == DiffPoly::one())
      out += sym;
    else if (c == -DiffPoly::one())
      out += std::string("-") + sym;
    else
      out += "(" + render_text(c) + ")*" + sym;
  };
  emit(v.xi(), "d/dx");
  emit(v.psi(), "d/dy");
  return out;
}

inline std::string render_latex(const VectorField& v) {
  if (v.is_zero()) return "0";
  std::string out;
  auto emit = [&out](const DiffPoly& c, const char* sym) {
    if (c.is_zero()) return;
    if (!out.empty()) out += " + ";
    if (c == DiffPoly::one())
      out += sym;
    else if (c == -DiffPoly::one())
      out += std::string("-") + sym;
    else
      out += "\\left(" + render_latex(c) + "\\right) " + sym;
  };
  emit(v.xi(), "\\partial_x");
  emit(v.psi(), "\\partial_y");
  return out;
}

namespace detail {

using nlohmann::json;

inline json rational_json(const Rational& r) {
  return json{{"num", r.num_str()}, {"den", r.den_str()}};
}

inline Rational rational_from(const json& j) {
  return Rational::from_strings(j.at("num").get<std::string>(),
                                j.at("den").get<std::string>());
}

inline json var_json(const VarId& v) {
  switch (v.kind()) {
    case VarKind::Indep: return json{{"kind", "x"}};
    case VarKind::JetY: return json{{"kind", "y"}, {"order", v.order()}};
    case VarKind::JetQ: return json{{"kind", "q"}, {"order", v.order()}};
    case VarKind::Param: return json{{"kind", "param"}, {"tag", v.tag()}};
  }
  throw Error("unreachable");
}

inline VarId var_from(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "x") return VarId::x();
  if (kind == "y") return VarId::jet_y(j.at("order").get<int>());
  if (kind == "q") return VarId::jet_q(j.at("order").get<int>());
  if (kind == "param") return VarId::param(j.at("tag").get<std::string>());
  throw Error("unknown variable kind '" + kind + "' in JSON");
}

inline json poly_json(const DiffPoly& p) {
  json terms = json::array();
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    json mono = json::array();
    for (const auto& [v, e] : it->first.factors())
      mono.push_back(json{{"var", var_json(v)}, {"pow", e}});
    terms.push_back(json{{"coeff", rational_json(it->second)}, {"monomial", mono}});
  }
  return json{{"terms", terms}};
}

inline DiffPoly poly_from(const json& j) {
  DiffPoly out;
  for (const auto& term : j.at("terms")) {
    Monomial m;
    for (const auto& f : term.at("monomial"))
      m = m.times(Monomial::var(var_from(f.at("var")), f.at("pow").get<int>()));
    out.add_term(m, rational_from(term.at("coeff")));
  }
  return out;
}

inline json field_json(const VectorField& v) {
  return json{{"xi", poly_json(v.xi())}, {"psi", poly_json(v.psi())}};
}

inline VectorField field_from(const json& j) {
  return {poly_from(j.at("xi")), poly_from(j.at("psi"))};
}

inline json system_json(const ParamSystem& sys) {
  json rows = json::array();
  for (const auto& row : sys.rows) {
    json coeffs = json::object();
    for (const auto& [tag, c] : row.coeffs) coeffs[tag] = rational_json(c);
    rows.push_back(json{{"coeffs", coeffs}, {"constant", rational_json(row.constant)}});
  }
  return json{{"unknowns", sys.unknowns}, {"rows", rows}};
}

inline ParamSystem system_from(const json& j) {
  ParamSystem sys;
  sys.unknowns = j.at("unknowns").get<std::vector<std::string>>();
  for (const auto& row : j.at("rows")) {
    LinearForm form;
    for (const auto& [tag, c] : row.at("coeffs").items())
      form.coeffs.emplace(tag, rational_from(c));
    form.constant = rational_from(row.at("constant"));
    sys.rows.push_back(std::move(form));
  }
  return sys;
}

inline void check_envelope(const json& j, const char* type) {
  if (!j.is_object()) throw Error("malformed JSON: expected an object");
  if (j.value("schema", std::string(kJsonSchema)) != kJsonSchema)
    throw Error("unsupported JSON schema");
  if (j.contains("type") && j.at("type").get<std::string>() != type)
    throw Error(std::string("JSON payload is not a ") + type);
}

template <typename Fn>
auto guarded(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(std::string("malformed ") + what + " JSON: " + e.what());
  }
}

}  // namespace detail

inline nlohmann::json to_json(const DiffPoly& p) {
  nlohmann::json j = detail::poly_json(p);
  j["schema"] = kJsonSchema;
  j["type"] = "DiffPoly";
  return j;
}

inline DiffPoly diffpoly_from_json(const nlohmann::json& j) {
  return detail::guarded("DiffPoly", [&j] {
    detail::check_envelope(j, "DiffPoly");
    return detail::poly_from(j);
  });
}

inline nlohmann::json to_json(const VectorField& v) {
  nlohmann::json j = detail::field_json(v);
  j["schema"] = kJsonSchema;
  j["type"] = "VectorField";
  return j;
}

inline VectorField vector_field_from_json(const nlohmann::json& j) {
  return detail::guarded("VectorField", [&j] {
    detail::check_envelope(j, "VectorField");
    return detail::field_from(j);
  });
}

inline nlohmann::json to_json(const SubalgebraReport& rep) {
  nlohmann::json basis = nlohmann::json::array();
  for (const auto& el : rep.basis) {
    nlohmann::json weights = nlohmann::json::object();
    for (const auto& [name, c] : el.weights) weights[name] = detail::rational_json(c);
    basis.push_back(nlohmann::json{{"name", el.name},
                                   {"weights", weights},
                                   {"field", detail::field_json(el.field)}});
  }
  return nlohmann::json{
      {"schema", kJsonSchema},
      {"type", "SubalgebraReport"},
      {"kind", rep.kind == SubalgebraKind::Divergence ? "divergence" : "variational"},
      {"n", rep.n},
      {"basis", basis},
      {"defect_before", detail::poly_json(rep.defect_before)},
      {"constraints", detail::system_json(rep.constraints)}};
}

inline SubalgebraReport subalgebra_report_from_json(const nlohmann::json& j) {
  return detail::guarded("SubalgebraReport", [&j] {
    detail::check_envelope(j, "SubalgebraReport");
    SubalgebraReport rep;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind != "divergence" && kind != "variational")
      throw Error("unknown subalgebra kind '" + kind + "'");
    rep.kind = kind == "divergence" ? SubalgebraKind::Divergence : SubalgebraKind::Variational;
    rep.n = j.at("n").get<int>();
    rep.defect_before = detail::poly_from(j.at("defect_before"));
    rep.constraints = detail::system_from(j.at("constraints"));
    for (const auto& el : j.at("basis")) {
      BasisElement be;
      be.name = el.at("name").get<std::string>();
      for (const auto& [name, c] : el.at("weights").items())
        be.weights.emplace(name, detail::rational_from(c));
      be.field = detail::field_from(el.at("field"));
      rep.basis.push_back(std::move(be));
    }
    return rep;
  });
}

inline nlohmann::json to_json(const FirstIntegral& fi) {
  return nlohmann::json{{"schema", kJsonSchema},
                        {"type", "FirstIntegral"},
                        {"source", fi.source},
                        {"n", fi.n},
                        {"field", detail::field_json(fi.field)},
                        {"expr", detail::poly_json(fi.expr)}};
}

inline FirstIntegral first_integral_from_json(const nlohmann::json& j) {
  return detail::guarded("FirstIntegral", [&j] {
    detail::check_envelope(j, "FirstIntegral");
    FirstIntegral fi;
    fi.source = j.at("source").get<std::string>();
    fi.n = j.at("n").get<int>();
    fi.field = detail::field_from(j.at("field"));
    fi.expr = detail::poly_from(j.at("expr"));
    if (fi.expr.total_derivative() != characteristic(fi.field) * DiffPoly::y(fi.n))
      throw Error("FirstIntegral JSON violates its conservation-law identity");
    return fi;
  });
}

inline nlohmann::json to_json(const ConjectureReport& rep) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& it : rep.items)
    items.push_back(nlohmann::json{{"n", it.n},
                                   {"check", it.check},
                                   {"pass", it.pass},
                                   {"extrapolation", it.extrapolation},
                                   {"detail", it.detail}});
  return nlohmann::json{{"schema", kJsonSchema},
                        {"type", "ConjectureReport"},
                        {"n_max", rep.n_max},
                        {"all_pass", rep.all_pass()},
                        {"items", items}};
}

inline ConjectureReport conjecture_report_from_json(const nlohmann::json& j) {
  return detail::guarded("ConjectureReport", [&j] {
    detail::check_envelope(j, "ConjectureReport");
    ConjectureReport rep;
    rep.n_max = j.at("n_max").get<int>();
    for (const auto& it : j.at("items"))
      rep.items.push_back({it.at("n").get<int>(), it.at("check").get<std::string>(),
                           it.at("pass").get<bool>(), it.at("extrapolation").get<bool>(),
                           it.at("detail").get<std::string>()});
    return rep;
  });
}

}  // namespace jetcalc
