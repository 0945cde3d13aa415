#include "mcs/parse.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace mcs {

std::string Diagnostic::render() const {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message;
}

namespace {

enum class Tok {
  kIdent,
  kNumber,  // digits, optionally digits '.' digits
  kLBrace,
  kRBrace,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kComma,
  kSemi,
  kColon,
  kDot,
  kEquals,
  kSlash,
  kArrow,       // <-
  kClauseNeck,  // :-
  kMapsTo,      // ->
  kEnd,
};

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  SourcePos pos;
};

class Lexer {
 public:
  Lexer(std::string_view text, std::vector<Diagnostic>& diags) : text_(text), diags_(diags) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        out.push_back(ident());
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        out.push_back(number());
        continue;
      }
      out.push_back(symbol());
    }
    out.push_back(Token{Tok::kEnd, "", here()});
    return out;
  }

 private:
  SourcePos here() const { return SourcePos{line_, col_}; }

  void advance() {
    ++pos_;
    ++col_;
  }

  Token ident() {
    const SourcePos start = here();
    std::string text;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      text += text_[pos_];
      advance();
    }
    return Token{Tok::kIdent, std::move(text), start};
  }

  Token number() {
    const SourcePos start = here();
    std::string text;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      text += text_[pos_];
      advance();
    }
    // a dot joins the number only when a digit follows (costs like 2.5);
    // otherwise it is a terminator
    if (pos_ + 1 < text_.size() && text_[pos_] == '.' &&
        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      text += '.';
      advance();
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        text += text_[pos_];
        advance();
      }
    }
    return Token{Tok::kNumber, std::move(text), start};
  }

  Token symbol() {
    const SourcePos start = here();
    auto two = [&](char a, char b) {
      return text_[pos_] == a && pos_ + 1 < text_.size() && text_[pos_ + 1] == b;
    };
    if (two('<', '-')) {
      advance();
      advance();
      return Token{Tok::kArrow, "<-", start};
    }
    if (two(':', '-')) {
      advance();
      advance();
      return Token{Tok::kClauseNeck, ":-", start};
    }
    if (two('-', '>')) {
      advance();
      advance();
      return Token{Tok::kMapsTo, "->", start};
    }
    const char c = text_[pos_];
    advance();
    switch (c) {
      case '{':
        return Token{Tok::kLBrace, "{", start};
      case '}':
        return Token{Tok::kRBrace, "}", start};
      case '(':
        return Token{Tok::kLParen, "(", start};
      case ')':
        return Token{Tok::kRParen, ")", start};
      case '[':
        return Token{Tok::kLBracket, "[", start};
      case ']':
        return Token{Tok::kRBracket, "]", start};
      case ',':
        return Token{Tok::kComma, ",", start};
      case ';':
        return Token{Tok::kSemi, ";", start};
      case ':':
        return Token{Tok::kColon, ":", start};
      case '.':
        return Token{Tok::kDot, ".", start};
      case '=':
        return Token{Tok::kEquals, "=", start};
      case '/':
        return Token{Tok::kSlash, "/", start};
      default:
        diags_.push_back(Diagnostic{start, std::string("unexpected character '") + c + "'"});
        return Token{Tok::kDot, ".", start};  // degrade to a terminator
    }
  }

  std::string_view text_;
  std::vector<Diagnostic>& diags_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

// Raw declarations before reference resolution.

struct BodyLiteralDecl {
  bool negated = false;
  std::string context;
  Atom atom;
  SourcePos pos;
};

struct BridgeDecl {
  std::optional<RuleId> id;
  std::string target;
  Atom head;
  std::vector<BodyLiteralDecl> body;
  SourcePos pos;
};

struct TableEntryDecl {
  KnowledgeBase kb;
  std::vector<BeliefSet> belief_sets;
  SourcePos pos;
};

struct ContextDecl {
  std::string name;
  std::string kind;
  Rational cost = Rational(1);
  TableDefault table_default = TableDefault::kInconsistent;
  std::vector<HornClause> program;
  std::vector<TableEntryDecl> entries;
  SourcePos pos;
};

struct SyntaxError {
  SourcePos pos;
  std::string message;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::vector<Diagnostic>& diags)
      : tokens_(std::move(tokens)), diags_(diags) {}

  void run() {
    try {
      expect_ident("mcs");
      expect(Tok::kLBrace, "'{'");
    } catch (const SyntaxError& e) {
      diags_.push_back(Diagnostic{e.pos, e.message});
      return;
    }
    while (!at(Tok::kRBrace) && !at(Tok::kEnd)) {
      try {
        if (peek_ident("context")) {
          contexts.push_back(parse_context());
        } else if (peek_ident("bridge")) {
          bridges.push_back(parse_bridge());
        } else {
          throw SyntaxError{cur().pos, "expected 'context' or 'bridge', got '" + cur().text + "'"};
        }
      } catch (const SyntaxError& e) {
        diags_.push_back(Diagnostic{e.pos, e.message});
        synchronize();
      }
    }
    if (at(Tok::kRBrace)) {
      next();
      if (!at(Tok::kEnd)) {
        diags_.push_back(Diagnostic{cur().pos, "trailing input after closing '}'"});
      }
    } else {
      diags_.push_back(Diagnostic{cur().pos, "missing closing '}'"});
    }
  }

  std::vector<ContextDecl> contexts;
  std::vector<BridgeDecl> bridges;

 private:
  const Token& cur() const { return tokens_[idx_]; }
  const Token& ahead(std::size_t k) const {
    return tokens_[std::min(idx_ + k, tokens_.size() - 1)];
  }
  bool at(Tok kind) const { return cur().kind == kind; }
  bool peek_ident(std::string_view word) const {
    return cur().kind == Tok::kIdent && cur().text == word;
  }
  Token next() { return tokens_[idx_++]; }

  Token expect(Tok kind, const char* what) {
    if (!at(kind)) throw SyntaxError{cur().pos, std::string("expected ") + what};
    return next();
  }

  void expect_ident(std::string_view word) {
    if (!peek_ident(word)) {
      throw SyntaxError{cur().pos, "expected '" + std::string(word) + "'"};
    }
    next();
  }

  std::string expect_name(const char* what) {
    if (!at(Tok::kIdent)) throw SyntaxError{cur().pos, std::string("expected ") + what};
    return next().text;
  }

  /// Skip to the next top-level item after a syntax error.
  void synchronize() {
    std::size_t depth = 0;
    while (!at(Tok::kEnd)) {
      if (depth == 0 && (peek_ident("context") || peek_ident("bridge") || at(Tok::kRBrace))) {
        return;
      }
      if (at(Tok::kLBrace)) ++depth;
      if (at(Tok::kRBrace) && depth > 0) --depth;
      next();
    }
  }

  Rational parse_cost() {
    const Token tok = expect(Tok::kNumber, "a cost value");
    std::string text = tok.text;
    if (at(Tok::kSlash)) {
      next();
      const Token den = expect(Tok::kNumber, "a denominator");
      text += "/" + den.text;
    }
    const auto value = Rational::parse(text);
    if (!value) throw SyntaxError{tok.pos, "malformed cost '" + text + "'"};
    if (value->negative()) throw SyntaxError{tok.pos, "negative cost"};
    return *value;
  }

  AtomSet parse_atom_set() {
    expect(Tok::kLBrace, "'{'");
    AtomSet atoms;
    if (!at(Tok::kRBrace)) {
      for (;;) {
        atoms.insert(expect_name("an atom"));
        if (at(Tok::kComma)) {
          next();
          continue;
        }
        break;
      }
    }
    expect(Tok::kRBrace, "'}'");
    return atoms;
  }

  ContextDecl parse_context() {
    ContextDecl decl;
    decl.pos = cur().pos;
    expect_ident("context");
    decl.name = expect_name("a context name");
    expect_ident("kind");
    expect(Tok::kEquals, "'='");
    decl.kind = expect_name("'horn' or 'table'");
    if (decl.kind != "horn" && decl.kind != "table") {
      throw SyntaxError{decl.pos, "unknown context kind '" + decl.kind + "'"};
    }
    bool saw_default = false;
    while (peek_ident("cost") || peek_ident("default")) {
      if (peek_ident("cost")) {
        next();
        expect(Tok::kEquals, "'='");
        decl.cost = parse_cost();
      } else {
        const Token tok = next();
        expect(Tok::kEquals, "'='");
        const std::string value = expect_name("'inconsistent' or 'empty'");
        if (value == "inconsistent") {
          decl.table_default = TableDefault::kInconsistent;
        } else if (value == "empty") {
          decl.table_default = TableDefault::kEmptyBeliefSet;
        } else {
          throw SyntaxError{tok.pos, "unknown default '" + value + "'"};
        }
        saw_default = true;
        if (decl.kind != "table") {
          diags_.push_back(Diagnostic{tok.pos, "default= only applies to table contexts"});
        }
      }
    }
    (void)saw_default;
    expect(Tok::kLBrace, "'{'");
    if (decl.kind == "horn") {
      expect_ident("program");
      expect(Tok::kLBrace, "'{'");
      while (!at(Tok::kRBrace)) decl.program.push_back(parse_clause());
      expect(Tok::kRBrace, "'}'");
    } else {
      expect_ident("map");
      expect(Tok::kLBrace, "'{'");
      while (!at(Tok::kRBrace)) decl.entries.push_back(parse_table_entry());
      expect(Tok::kRBrace, "'}'");
    }
    expect(Tok::kRBrace, "'}'");
    return decl;
  }

  HornClause parse_clause() {
    HornClause clause;
    clause.head = expect_name("a clause head");
    if (at(Tok::kClauseNeck)) {
      next();
      for (;;) {
        clause.body.push_back(expect_name("a body atom"));
        if (at(Tok::kComma)) {
          next();
          continue;
        }
        break;
      }
    }
    expect(Tok::kDot, "'.'");
    return clause;
  }

  TableEntryDecl parse_table_entry() {
    TableEntryDecl entry;
    entry.pos = cur().pos;
    entry.kb = parse_atom_set();
    expect(Tok::kMapsTo, "'->'");
    expect(Tok::kLBracket, "'['");
    if (!at(Tok::kRBracket)) {
      for (;;) {
        entry.belief_sets.push_back(parse_atom_set());
        if (at(Tok::kComma)) {
          next();
          continue;
        }
        break;
      }
    }
    expect(Tok::kRBracket, "']'");
    expect(Tok::kSemi, "';'");
    return entry;
  }

  BridgeDecl parse_bridge() {
    BridgeDecl decl;
    decl.pos = cur().pos;
    expect_ident("bridge");
    // `bridge id: target.head ...` or `bridge target.head ...`
    if (at(Tok::kIdent) && ahead(1).kind == Tok::kColon) {
      decl.id = next().text;
      next();  // ':'
    }
    decl.target = expect_name("a target context");
    expect(Tok::kDot, "'.'");
    decl.head = expect_name("a head atom");
    if (at(Tok::kArrow)) {
      next();
      for (;;) {
        BodyLiteralDecl lit;
        lit.pos = cur().pos;
        if (peek_ident("not")) {
          next();
          lit.negated = true;
        }
        expect(Tok::kLParen, "'('");
        lit.context = expect_name("a context name");
        expect(Tok::kColon, "':'");
        lit.atom = expect_name("an atom");
        expect(Tok::kRParen, "')'");
        decl.body.push_back(std::move(lit));
        if (at(Tok::kComma)) {
          next();
          continue;
        }
        break;
      }
    }
    expect(Tok::kDot, "'.'");
    return decl;
  }

  std::vector<Token> tokens_;
  std::vector<Diagnostic>& diags_;
  std::size_t idx_ = 0;
};

}  // namespace

ParseResult parse_mcs(std::string_view text) {
  ParseResult result;
  Lexer lexer(text, result.diagnostics);
  Parser parser(lexer.run(), result.diagnostics);
  parser.run();

  // Reference resolution and lowering; keep collecting diagnostics.
  std::map<std::string, SourcePos> context_names;
  for (const auto& decl : parser.contexts) {
    if (context_names.count(decl.name)) {
      result.diagnostics.push_back(
          Diagnostic{decl.pos, "duplicate context name '" + decl.name + "'"});
    } else {
      context_names.emplace(decl.name, decl.pos);
    }
  }

  std::map<RuleId, SourcePos> rule_ids;
  std::vector<std::pair<BridgeDecl, RuleId>> bridges;
  std::size_t ordinal = 0;
  for (const auto& decl : parser.bridges) {
    ++ordinal;
    const RuleId id = decl.id.value_or("r" + std::to_string(ordinal));
    if (rule_ids.count(id)) {
      result.diagnostics.push_back(Diagnostic{decl.pos, "duplicate rule id '" + id + "'"});
      continue;
    }
    rule_ids.emplace(id, decl.pos);
    if (!context_names.count(decl.target)) {
      result.diagnostics.push_back(
          Diagnostic{decl.pos, "unresolved context '" + decl.target + "'"});
    }
    for (const auto& lit : decl.body) {
      if (!context_names.count(lit.context)) {
        result.diagnostics.push_back(
            Diagnostic{lit.pos, "unresolved context '" + lit.context + "'"});
      }
    }
    bridges.emplace_back(decl, id);
  }

  // Duplicate table keys and overlapping rule bodies.
  for (const auto& decl : parser.contexts) {
    std::set<KnowledgeBase> seen;
    for (const auto& entry : decl.entries) {
      if (!seen.insert(entry.kb).second) {
        result.diagnostics.push_back(Diagnostic{entry.pos, "duplicate table entry"});
      }
    }
  }
  for (const auto& [decl, id] : bridges) {
    std::set<std::pair<std::string, Atom>> pos_lits;
    for (const auto& lit : decl.body) {
      if (!lit.negated) pos_lits.emplace(lit.context, lit.atom);
    }
    for (const auto& lit : decl.body) {
      if (lit.negated && pos_lits.count({lit.context, lit.atom})) {
        result.diagnostics.push_back(
            Diagnostic{lit.pos, "literal (" + lit.context + " : " + lit.atom +
                                    ") occurs both positive and negative"});
      }
    }
  }

  if (!result.diagnostics.empty()) return result;

  try {
    std::vector<Context> contexts;
    contexts.reserve(parser.contexts.size());
    for (const auto& decl : parser.contexts) {
      std::shared_ptr<const LogicSuite> suite;
      if (decl.kind == "horn") {
        suite = std::make_shared<HornSuite>(decl.program, decl.cost);
      } else {
        TableSuite::EntryMap entries;
        for (const auto& entry : decl.entries) entries[entry.kb] = entry.belief_sets;
        suite = std::make_shared<TableSuite>(std::move(entries), decl.table_default, decl.cost);
      }
      std::vector<BridgeRule> rules;
      for (const auto& [bridge, id] : bridges) {
        if (bridge.target != decl.name) continue;
        BridgeRule rule;
        rule.id = id;
        rule.target = bridge.target;
        rule.head = bridge.head;
        for (const auto& lit : bridge.body) {
          (lit.negated ? rule.negative_body : rule.positive_body)
              .insert(BodyAtom{lit.context, lit.atom});
        }
        rules.push_back(std::move(rule));
      }
      contexts.emplace_back(decl.name, std::move(suite), std::move(rules));
    }
    result.mcs = Mcs(std::move(contexts));
  } catch (const McsError& e) {
    result.diagnostics.push_back(Diagnostic{SourcePos{0, 0}, e.what()});
  }
  return result;
}

ParseResult parse_mcs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ParseResult result;
    result.diagnostics.push_back(Diagnostic{SourcePos{0, 0}, "cannot open '" + path + "'"});
    return result;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_mcs(buffer.str());
}

namespace {

void write_atom_set(std::ostream& os, const AtomSet& atoms) {
  os << "{";
  bool first = true;
  for (const auto& atom : atoms) {
    os << (first ? "" : ", ") << atom;
    first = false;
  }
  os << "}";
}

}  // namespace

std::string to_text(const Mcs& system) {
  std::ostringstream os;
  os << "mcs {\n";
  for (const auto& ctx : system.contexts()) {
    os << "  context " << ctx.name() << " kind=" << ctx.logic().kind();
    if (const auto* horn = dynamic_cast<const HornSuite*>(&ctx.logic())) {
      os << " cost=" << horn->unit_cost().str() << " {\n    program {\n";
      for (const auto& clause : horn->program()) {
        os << "      " << clause.head;
        for (std::size_t i = 0; i < clause.body.size(); ++i) {
          os << (i == 0 ? " :- " : ", ") << clause.body[i];
        }
        os << ".\n";
      }
      os << "    }\n  }\n";
    } else if (const auto* table = dynamic_cast<const TableSuite*>(&ctx.logic())) {
      os << " cost=" << table->unit_cost().str() << " default="
         << (table->default_behavior() == TableDefault::kInconsistent ? "inconsistent"
                                                                      : "empty")
         << " {\n    map {\n";
      for (const auto& [kb, sets] : table->entries()) {
        os << "      ";
        write_atom_set(os, kb);
        os << " -> [ ";
        for (std::size_t i = 0; i < sets.size(); ++i) {
          if (i) os << ", ";
          write_atom_set(os, sets[i]);
        }
        os << " ];\n";
      }
      os << "    }\n  }\n";
    }
  }
  for (const auto& ctx : system.contexts()) {
    for (const auto& rule : ctx.bridge_rules()) {
      os << "  bridge " << rule.id << ": " << rule.target << "." << rule.head;
      bool first = true;
      for (const auto& body : rule.positive_body) {
        os << (first ? " <- " : ", ") << "(" << body.context << " : " << body.atom << ")";
        first = false;
      }
      for (const auto& body : rule.negative_body) {
        os << (first ? " <- " : ", ") << "not (" << body.context << " : " << body.atom << ")";
        first = false;
      }
      os << ".\n";
    }
  }
  os << "}\n";
  return os.str();
}

bool structurally_equal(const Mcs& a, const Mcs& b) {
  return to_text(a) == to_text(b);
}

}  // namespace mcs
