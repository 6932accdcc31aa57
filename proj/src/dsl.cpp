#include "promise/dsl.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

namespace promise::dsl {

SyntaxError::SyntaxError(std::size_t line, std::size_t column, std::string expected,
                         const std::string& found)
    : Error(Errc::Syntax, std::to_string(line) + ":" + std::to_string(column) + ": expected " +
                              expected + ", found " + found),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

ValidationError::ValidationError(std::size_t line, Errc cause, const std::string& message)
    : Error(cause, std::to_string(line) + ": " + std::string(to_string(cause)) + ": " + message),
      line_(line) {}

Configuration Scenario::initial_configuration() const {
  return Configuration{entry.value_or(Term::deadlock()), initial_state};
}

namespace {

// --- lexer -------------------------------------------------------------------

enum class Tok {
  Ident,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Dot,
  Plus,
  ParBar,
  Arrow,
  Implies,
  Hash,
  Colon,
  Tilde,
  Bang,
  Leq,
  Neq,
  Equals,
  Newline,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Ident: return "'" + t.text + "'";
    case Tok::Newline: return "end of line";
    case Tok::End: return "end of input";
    default: return "'" + t.text + "'";
  }
}

bool continues_line(const Token& t) {
  switch (t.kind) {
    case Tok::Ident: return t.text == "and" || t.text == "or" || t.text == "not";
    case Tok::Newline:
    case Tok::RParen:
    case Tok::RBracket:
    case Tok::LParen:
    case Tok::LBracket:
    case Tok::End: return false;
    default: return true;
  }
}

enum class LexMode { Scenario, Trace };

// In scenario files `#` is the incompatibility operator inside an
// `incompatible` statement and starts a comment everywhere else.
std::vector<Token> tokenize(std::string_view text, LexMode mode) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, depth = 0, i = 0;
  bool line_is_incompatible = false;
  bool hash_seen = false;

  auto push = [&](Tok kind, std::string s, std::size_t c) {
    out.push_back(Token{kind, std::move(s), line, c});
  };
  auto statement_start = [&] { return out.empty() || out.back().kind == Tok::Newline; };
  auto end_line = [&] {
    if (depth == 0 && !statement_start() && !continues_line(out.back())) {
      push(Tok::Newline, "\n", col);
      line_is_incompatible = false;
      hash_seen = false;
    }
    ++line;
    col = 1;
  };

  while (i < text.size()) {
    const char ch = text[i];
    const std::size_t start_col = col;
    if (ch == '\n') {
      end_line();
      ++i;
      continue;
    }
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      ++i;
      ++col;
      continue;
    }
    if (ch == '#') {
      const bool op = mode == LexMode::Scenario && line_is_incompatible && !hash_seen;
      if (op) {
        hash_seen = true;
        push(Tok::Hash, "#", start_col);
        ++i;
        ++col;
        continue;
      }
      while (i < text.size() && text[i] != '\n') {
        ++i;
        ++col;
      }
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
        ++j;
      }
      std::string word(text.substr(i, j - i));
      if (statement_start()) line_is_incompatible = word == "incompatible";
      push(Tok::Ident, std::move(word), start_col);
      col += j - i;
      i = j;
      continue;
    }
    auto two = [&](char next) { return i + 1 < text.size() && text[i + 1] == next; };
    Tok kind;
    std::size_t len = 1;
    switch (ch) {
      case '(': kind = Tok::LParen; ++depth; break;
      case ')': kind = Tok::RParen; if (depth) --depth; break;
      case '[': kind = Tok::LBracket; ++depth; break;
      case ']': kind = Tok::RBracket; if (depth) --depth; break;
      case ',': kind = Tok::Comma; break;
      case '.': kind = Tok::Dot; break;
      case '+': kind = Tok::Plus; break;
      case ':': kind = Tok::Colon; break;
      case '~': kind = Tok::Tilde; break;
      case '|':
        if (!two('|')) throw SyntaxError(line, col, "'||'", "'|'");
        kind = Tok::ParBar;
        len = 2;
        break;
      case '-':
        if (!two('>')) throw SyntaxError(line, col, "'->'", "'-'");
        kind = Tok::Arrow;
        len = 2;
        break;
      case '=':
        if (two('>')) {
          kind = Tok::Implies;
          len = 2;
        } else {
          kind = Tok::Equals;
        }
        break;
      case '!':
        if (two('=')) {
          kind = Tok::Neq;
          len = 2;
        } else {
          kind = Tok::Bang;
        }
        break;
      case '<':
        if (!two('=')) throw SyntaxError(line, col, "'<='", "'<'");
        kind = Tok::Leq;
        len = 2;
        break;
      default:
        throw SyntaxError(line, col, "a token", "'" + std::string(1, ch) + "'");
    }
    push(kind, std::string(text.substr(i, len)), start_col);
    i += len;
    col += len;
  }
  if (!statement_start()) push(Tok::Newline, "\n", col);
  push(Tok::End, "", col);
  return out;
}

// --- parser ------------------------------------------------------------------

const std::set<std::string, std::less<>> kReserved = {
    "agent", "subord", "type",  "task",   "exclusive", "incompatible", "def",
    "init",  "run",    "pi",    "pw",     "p",         "E",            "not",
    "and",   "or",     "forall", "true",  "false",     "delta",        "tick",
    "protocol", "gamma", "compliance",
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, PromiseModel model)
      : tokens_(std::move(tokens)), model_(std::move(model)) {}

  Scenario scenario() {
    Scenario sc;
    definitions_ = &sc.definitions;
    std::optional<std::size_t> run_line;
    skip_newlines();
    while (peek().kind != Tok::End) {
      const Token& head = expect(Tok::Ident, "a statement keyword");
      const std::size_t line = head.line;
      const std::string& kw = head.text;
      if (kw == "agent") {
        do {
          const Token& name = expect(Tok::Ident, "an agent name");
          guarded(line, [&] {
            check_fresh(name.text, "agent");
            model_.agents.add(name.text);
          });
        } while (peek().kind == Tok::Ident);
      } else if (kw == "subord") {
        const AgentId lower = agent_name();
        expect(Tok::Leq, "'<='");
        const AgentId upper = agent_name();
        guarded(line, [&] { model_.order.declare(lower, upper); });
      } else if (kw == "type") {
        const Token& name = expect(Tok::Ident, "a type name");
        guarded(line, [&] {
          check_fresh(name.text, "type");
          model_.tasks.add_type(name.text);
        });
      } else if (kw == "task") {
        const Token& name = expect(Tok::Ident, "a task name");
        expect(Tok::Colon, "':'");
        const Token& type = expect(Tok::Ident, "a type name");
        guarded(line, [&] {
          check_fresh(name.text, "task");
          auto tid = model_.tasks.find_type(type.text);
          if (!tid) throw Error(Errc::UnknownName, "unknown type '" + type.text + "'");
          model_.tasks.add_atom(name.text, *tid);
          rebuild_incompatibility();
        });
      } else if (kw == "exclusive") {
        model_.exclusive.declare(body());
      } else if (kw == "incompatible") {
        const TaskBody x = body();
        expect(Tok::Hash, "'#'");
        const TaskBody y = body();
        declared_.emplace_back(x, y);
        guarded(line, [&] { rebuild_incompatibility(); });
      } else if (kw == "def") {
        const Token& name = expect(Tok::Ident, "a definition name");
        expect(Tok::Equals, "'='");
        Term t = term();
        guarded(line, [&] {
          check_fresh(name.text, "definition");
          if (find_definition(sc, name.text)) {
            throw Error(Errc::DuplicateName, "definition '" + name.text + "' declared twice");
          }
        });
        sc.definitions.push_back(Definition{name.text, std::move(t)});
      } else if (kw == "init") {
        do {
          const Event e = event();
          if (e.kind != EventKind::Introduce) {
            throw ValidationError(line, Errc::InvalidBody, "init lists basic pi events only");
          }
          guarded(line, [&] { sc.initial_state = introduce(model_, sc.initial_state, e.promise()); });
        } while (accept(Tok::Comma));
      } else if (kw == "run") {
        if (run_line) {
          throw ValidationError(line, Errc::DuplicateName,
                                "second run statement (first on line " +
                                    std::to_string(*run_line) + ")");
        }
        run_line = line;
        sc.entry = term();
      } else {
        throw SyntaxError(head.line, head.column, "a statement keyword", describe(head));
      }
      end_statement();
    }

    for (const auto& v : state_violations(model_, sc.initial_state)) {
      throw ValidationError(peek().line, Errc::NotEnabled,
                            "initial state breaks " + format_violation(model_, v));
    }
    sc.model = std::move(model_);
    return sc;
  }

  TaskBody body() {
    bool use = false, neg = false;
    for (;;) {
      if (accept(Tok::Tilde)) {
        use = !use;
      } else if (accept(Tok::Bang)) {
        neg = !neg;
      } else {
        break;
      }
    }
    const Token& name = expect(Tok::Ident, "a task name");
    auto atom = model_.tasks.find_atom(name.text);
    if (!atom) {
      throw ValidationError(name.line, Errc::UnknownName, "unknown task '" + name.text + "'");
    }
    return TaskBody{*atom, use, neg};
  }

  Event event() {
    const Token& kw = expect(Tok::Ident, "'pi' or 'pw'");
    if (kw.text != "pi" && kw.text != "pw") {
      throw SyntaxError(kw.line, kw.column, "'pi' or 'pw'", describe(kw));
    }
    expect(Tok::LParen, "'('");
    const AgentId a = agent_name();
    std::optional<AgentId> c;
    if (kw.text == "pi" && accept(Tok::LBracket)) {
      c = agent_name();
      expect(Tok::RBracket, "']'");
    }
    expect(Tok::Comma, "','");
    const TaskBody x = body();
    expect(Tok::Comma, "','");
    const AgentId b = agent_name();
    std::optional<AgentId> d;
    if (c) {
      expect(Tok::LBracket, "'['");
      d = agent_name();
      expect(Tok::RBracket, "']'");
    }
    expect(Tok::RParen, "')'");
    if (c) return Event::pi(GeneralizedPromise{a, *c, x, b, *d});
    return kw.text == "pi" ? Event::pi(Promise{a, x, b}) : Event::pw(Promise{a, x, b});
  }

  // par := alt ('||' alt)* ; alt := seq ('+' seq)* ; seq := unary ('.' unary)*
  Term term() {
    Term t = alternative();
    while (accept(Tok::ParBar)) t = Term::par(std::move(t), alternative());
    return t;
  }

  Condition condition() {
    Condition left = disjunction();
    if (accept(Tok::Implies)) return Condition::implication(std::move(left), condition());
    return left;
  }

  std::vector<Event> trace() {
    std::vector<Event> events;
    skip_newlines();
    while (peek().kind != Tok::End) {
      events.push_back(event());
      end_statement();
    }
    return events;
  }

  void finish() {
    skip_newlines();
    if (peek().kind != Tok::End) {
      const Token& t = peek();
      throw SyntaxError(t.line, t.column, "end of input", describe(t));
    }
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }
  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    next();
    return true;
  }
  bool accept_word(std::string_view word) {
    if (peek().kind != Tok::Ident || peek().text != word) return false;
    next();
    return true;
  }
  const Token& expect(Tok kind, std::string_view what) {
    if (peek().kind != kind) {
      throw SyntaxError(peek().line, peek().column, std::string(what), describe(peek()));
    }
    return next();
  }
  void expect_word(std::string_view word) {
    if (!accept_word(word)) {
      throw SyntaxError(peek().line, peek().column, "'" + std::string(word) + "'",
                        describe(peek()));
    }
  }
  void skip_newlines() {
    while (peek().kind == Tok::Newline) next();
  }
  void end_statement() {
    if (peek().kind == Tok::End) return;
    expect(Tok::Newline, "end of line");
    skip_newlines();
  }

  template <class F>
  void guarded(std::size_t line, F&& f) {
    try {
      f();
    } catch (const ValidationError&) {
      throw;
    } catch (const Error& e) {
      throw ValidationError(line, e.code(), e.what());
    }
  }

  void check_fresh(const std::string& name, std::string_view what) {
    if (kReserved.contains(name)) {
      throw Error(Errc::InvalidName, std::string(what) + " name '" + name + "' is reserved");
    }
  }

  void rebuild_incompatibility() {
    model_.incompatibility = build_incompatibility(model_.tasks, declared_);
  }

  static const Definition* find_definition(const Scenario& sc, std::string_view name) {
    for (const auto& d : sc.definitions) {
      if (d.name == name) return &d;
    }
    return nullptr;
  }

  AgentId agent_name() {
    const Token& name = expect(Tok::Ident, "an agent name");
    auto id = model_.agents.find(name.text);
    if (!id) {
      throw ValidationError(name.line, Errc::UnknownName, "unknown agent '" + name.text + "'");
    }
    return *id;
  }

  AgentRef agent_ref() {
    const Token& name = expect(Tok::Ident, "an agent or variable");
    if (std::find(bound_.begin(), bound_.end(), name.text) != bound_.end()) {
      return Variable{name.text};
    }
    auto id = model_.agents.find(name.text);
    if (!id) {
      throw ValidationError(name.line, Errc::UnknownName, "unknown agent '" + name.text + "'");
    }
    return *id;
  }

  Term alternative() {
    Term t = sequence();
    while (accept(Tok::Plus)) t = Term::alt(std::move(t), sequence());
    return t;
  }

  Term sequence() {
    Term t = unary();
    while (accept(Tok::Dot)) t = Term::seq(std::move(t), unary());
    return t;
  }

  Term unary() {
    if (accept(Tok::LBracket)) {
      Condition c = condition();
      expect(Tok::RBracket, "']'");
      expect(Tok::Arrow, "'->'");
      return Term::guard(std::move(c), unary());
    }
    return primary();
  }

  Term primary() {
    if (accept(Tok::LParen)) {
      Term t = term();
      expect(Tok::RParen, "')'");
      return t;
    }
    const Token& t = peek();
    if (t.kind != Tok::Ident) throw SyntaxError(t.line, t.column, "a process term", describe(t));
    if (t.text == "pi" || t.text == "pw") return Term::action(event());
    next();
    if (t.text == "delta") return Term::deadlock();
    if (t.text == "tick") return Term::done();
    if (t.text == "protocol") {
      expect(Tok::LParen, "'('");
      const AgentId a = agent_name();
      expect(Tok::Comma, "','");
      const AgentId b = agent_name();
      expect(Tok::Comma, "','");
      const TaskBody x = body();
      expect(Tok::RParen, "')'");
      Term out;
      guarded(t.line, [&] { out = make_protocol(model_, a, b, x); });
      return out;
    }
    if (definitions_) {
      for (const auto& d : *definitions_) {
        if (d.name == t.text) return d.term;
      }
    }
    throw ValidationError(t.line, Errc::UnknownName, "unknown process '" + t.text + "'");
  }

  Condition disjunction() {
    Condition c = conjunction();
    while (accept_word("or")) c = Condition::disjunction(std::move(c), conjunction());
    return c;
  }

  Condition conjunction() {
    Condition c = cond_unary();
    while (accept_word("and")) c = Condition::conjunction(std::move(c), cond_unary());
    return c;
  }

  Condition cond_unary() {
    if (accept_word("not")) return Condition::negation(cond_unary());
    if (accept_word("forall")) {
      const Token& var = expect(Tok::Ident, "a variable name");
      if (kReserved.contains(var.text)) {
        throw ValidationError(var.line, Errc::InvalidName,
                              "variable name '" + var.text + "' is reserved");
      }
      std::optional<AgentRef> excluded;
      if (accept(Tok::Neq)) excluded = agent_ref();
      expect(Tok::Colon, "':'");
      bound_.push_back(var.text);
      Condition body = condition();
      bound_.pop_back();
      return Condition::for_all(Variable{var.text}, std::move(excluded), std::move(body));
    }
    return cond_atom();
  }

  Condition cond_atom() {
    if (accept(Tok::LParen)) {
      Condition c = condition();
      expect(Tok::RParen, "')'");
      return c;
    }
    if (accept_word("true")) return Condition::truth();
    if (accept_word("false")) return Condition::falsity();
    if (accept_word("p")) {
      expect(Tok::LParen, "'('");
      AgentRef a = agent_ref();
      expect(Tok::Comma, "','");
      const TaskBody x = body();
      expect(Tok::Comma, "','");
      AgentRef b = agent_ref();
      expect(Tok::RParen, "')'");
      return Condition::has_promise(std::move(a), x, std::move(b));
    }
    if (accept_word("E")) {
      expect(Tok::LParen, "'('");
      const TaskBody x = body();
      expect(Tok::RParen, "')'");
      return Condition::exclusive(x);
    }
    throw SyntaxError(peek().line, peek().column, "a condition", describe(peek()));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  PromiseModel model_;
  std::vector<BodyPair> declared_;
  const std::vector<Definition>* definitions_ = nullptr;
  std::vector<std::string> bound_;
};

// --- renderer ----------------------------------------------------------------

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string agent_ref(const PromiseModel& model, const AgentRef& ref) {
  if (const auto* id = std::get_if<AgentId>(&ref)) return model.agents.name(*id);
  return std::get<Variable>(ref).name;
}

std::string render_cond(const PromiseModel& model, const Condition& c, int min_prec) {
  int prec = 5;
  std::string s = std::visit(
      overloaded{
          [&](const cond::True&) -> std::string { return "true"; },
          [&](const cond::False&) -> std::string { return "false"; },
          [&](const cond::HasPromise& h) {
            return "p(" + agent_ref(model, h.promiser) + ", " + format_body(model.tasks, h.body) +
                   ", " + agent_ref(model, h.promisee) + ")";
          },
          [&](const cond::IsExclusive& e) { return "E(" + format_body(model.tasks, e.body) + ")"; },
          [&](const cond::Not& n) {
            prec = 4;
            return "not " + render_cond(model, n.operand, 4);
          },
          [&](const cond::And& a) {
            prec = 3;
            return render_cond(model, a.left, 3) + " and " + render_cond(model, a.right, 4);
          },
          [&](const cond::Or& o) {
            prec = 2;
            return render_cond(model, o.left, 2) + " or " + render_cond(model, o.right, 3);
          },
          [&](const cond::Implies& i) {
            prec = 1;
            return render_cond(model, i.left, 2) + " => " + render_cond(model, i.right, 1);
          },
          [&](const cond::ForAll& f) {
            // The body extends as far right as possible, so a quantifier
            // nested in any operator needs parentheses.
            prec = 0;
            std::string out = "forall " + f.var.name;
            if (f.excluded) out += " != " + agent_ref(model, *f.excluded);
            return out + " : " + render_cond(model, f.body, 0);
          },
      },
      c.node());
  return prec < min_prec ? "(" + s + ")" : s;
}

std::string render_term(const PromiseModel& model, const Term& t, int min_prec) {
  int prec = 5;
  std::string s = std::visit(
      overloaded{
          [&](const term::Done&) -> std::string { return "tick"; },
          [&](const term::Deadlock&) -> std::string { return "delta"; },
          [&](const term::Act& a) { return format_event(model, a.event); },
          [&](const term::Par& p) {
            prec = 1;
            return render_term(model, p.left, 1) + " || " + render_term(model, p.right, 2);
          },
          [&](const term::Alt& a) {
            prec = 2;
            return render_term(model, a.left, 2) + " + " + render_term(model, a.right, 3);
          },
          [&](const term::Seq& q) {
            prec = 3;
            return render_term(model, q.left, 3) + " . " + render_term(model, q.right, 4);
          },
          [&](const term::Guard& g) {
            prec = 4;
            return "[" + render_cond(model, g.cond, 0) + "] -> " + render_term(model, g.body, 4);
          },
      },
      t.node());
  return prec < min_prec ? "(" + s + ")" : s;
}

template <class T, class F>
T parse_fragment(const PromiseModel& model, std::string_view text, F&& f) {
  Parser parser(tokenize(text, LexMode::Trace), model);
  T out = f(parser);
  parser.finish();
  return out;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Parser parser(tokenize(text, LexMode::Scenario), PromiseModel{});
  return parser.scenario();
}

TaskBody parse_body(const TaskUniverse& universe, std::string_view text) {
  PromiseModel model;
  model.tasks = universe;
  return parse_fragment<TaskBody>(model, text, [](Parser& p) { return p.body(); });
}

Event parse_event(const PromiseModel& model, std::string_view text) {
  return parse_fragment<Event>(model, text, [](Parser& p) { return p.event(); });
}

Term parse_term(const PromiseModel& model, std::string_view text) {
  return parse_fragment<Term>(model, text, [](Parser& p) { return p.term(); });
}

Condition parse_condition(const PromiseModel& model, std::string_view text) {
  return parse_fragment<Condition>(model, text, [](Parser& p) { return p.condition(); });
}

std::vector<Event> parse_trace(const PromiseModel& model, std::string_view text) {
  Parser parser(tokenize(text, LexMode::Trace), model);
  return parser.trace();
}

std::string render(const PromiseModel& model, const Term& term) {
  return render_term(model, term, 0);
}

std::string render(const PromiseModel& model, const Condition& cond) {
  return render_cond(model, cond, 0);
}

std::string render(const PromiseModel& model, TaskBody body) {
  return format_body(model.tasks, body);
}

std::string render(const PromiseModel& model, const Event& event) {
  return format_event(model, event);
}

std::string render(const PromiseModel& model, const Promise& promise) {
  return format_promise(model, promise);
}

std::string render(const PromiseModel& model, const State& state) {
  return format_state(model, state);
}

std::string render(const PromiseModel& model, const Trace& trace) {
  std::string out;
  for (const auto& e : trace.events) out += format_event(model, e) + "\n";
  return out;
}

std::string render(const Scenario& sc) {
  const PromiseModel& m = sc.model;
  std::string out;
  if (m.agents.size() > 0) {
    out += "agent";
    for (AgentId a : m.agents.ids()) out += " " + m.agents.name(a);
    out += "\n";
  }
  for (const auto& [lower, upper] : m.order.declared()) {
    out += "subord " + m.agents.name(lower) + " <= " + m.agents.name(upper) + "\n";
  }
  for (std::uint32_t t = 0; t < m.tasks.type_count(); ++t) {
    if (TypeId{t} == TaskUniverse::kCompliance) continue;
    out += "type " + m.tasks.type_name(TypeId{t}) + "\n";
  }
  for (std::uint32_t a = 0; a < m.tasks.atom_count(); ++a) {
    if (AtomId{a} == TaskUniverse::kGamma) continue;
    out += "task " + m.tasks.atom_name(AtomId{a}) + " : " +
           m.tasks.type_name(m.tasks.atom_type(AtomId{a})) + "\n";
  }
  for (const auto& [x, y] : m.incompatibility.declared()) {
    out += "incompatible " + format_body(m.tasks, x) + " # " + format_body(m.tasks, y) + "\n";
  }
  for (TaskBody x : m.exclusive.bodies()) out += "exclusive " + format_body(m.tasks, x) + "\n";
  for (const auto& d : sc.definitions) out += "def " + d.name + " = " + render(m, d.term) + "\n";
  if (!sc.initial_state.empty()) {
    out += "init ";
    bool first = true;
    for (const auto& p : sc.initial_state) {
      if (!first) out += ", ";
      first = false;
      out += format_event(m, Event::pi(p));
    }
    out += "\n";
  }
  if (sc.entry) out += "run " + render(m, *sc.entry) + "\n";
  return out;
}

}  // namespace promise::dsl
