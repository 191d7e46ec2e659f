#include <cctype>

#include "diffiety/syntax.hpp"

namespace diffiety {

namespace {

struct Token {
  enum class Kind { Ident, Int, Op, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 1;
  int column = 1;
};

std::vector<Token> tokenize(std::string_view s, int line, int column) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        column = 1;
      } else if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
        ++column;
      }
    }
  };
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = column;
    if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      t.kind = Token::Kind::Ident;
      t.text = std::string(s.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      t.kind = Token::Kind::Int;
      t.text = std::string(s.substr(i, j - i));
      advance(j - i);
    } else if (s.substr(i, 3) == "\xE2\x88\x92") { // U+2212 minus sign
      t.kind = Token::Kind::Op;
      t.text = "-";
      advance(3);
    } else if (s.substr(i, 2) == "\xC2\xB7") { // U+00B7 middle dot
      t.kind = Token::Kind::Op;
      t.text = "*";
      advance(2);
    } else if (std::string_view("+-*/^()[],#").find(static_cast<char>(c)) != std::string_view::npos) {
      t.kind = Token::Kind::Op;
      t.text = std::string(1, static_cast<char>(c));
      advance(1);
    } else {
      throw ParseError(std::string("unexpected character '") + static_cast<char>(c) + "'", line, column);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = column;
  out.push_back(end);
  return out;
}

class Parser {
public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  SyntaxNode parse() {
    SyntaxNode n = expression();
    if (peek().kind != Token::Kind::End) fail("unexpected '" + peek().text + "'");
    return n;
  }

private:
  const Token& peek() const { return toks_[pos_]; }
  bool is_op(const char* op) const { return peek().kind == Token::Kind::Op && peek().text == op; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().line, peek().column); }
  Token take() { return toks_[pos_++]; }
  void expect(const char* op) {
    if (!is_op(op)) fail(std::string("expected '") + op + "'");
    ++pos_;
  }

  SyntaxNode node(SyntaxNode::Kind k, const Token& at) {
    SyntaxNode n;
    n.kind = k;
    n.line = at.line;
    n.column = at.column;
    return n;
  }

  SyntaxNode binary(SyntaxNode::Kind k, const Token& at, SyntaxNode l, SyntaxNode r) {
    SyntaxNode n = node(k, at);
    n.children.push_back(std::move(l));
    n.children.push_back(std::move(r));
    return n;
  }

  SyntaxNode expression() {
    SyntaxNode left = term();
    while (is_op("+") || is_op("-")) {
      Token op = take();
      SyntaxNode right = term();
      left = binary(op.text == "+" ? SyntaxNode::Kind::Add : SyntaxNode::Kind::Sub, op, std::move(left), std::move(right));
    }
    return left;
  }

  SyntaxNode term() {
    SyntaxNode left = unary();
    while (is_op("*") || is_op("/")) {
      Token op = take();
      SyntaxNode right = unary();
      left = binary(op.text == "*" ? SyntaxNode::Kind::Mul : SyntaxNode::Kind::Div, op, std::move(left), std::move(right));
    }
    return left;
  }

  SyntaxNode unary() {
    if (is_op("-")) {
      Token op = take();
      SyntaxNode n = node(SyntaxNode::Kind::Neg, op);
      n.children.push_back(unary());
      return n;
    }
    if (is_op("+")) {
      take();
      return unary();
    }
    return power();
  }

  SyntaxNode power() {
    SyntaxNode base = primary();
    if (is_op("^")) {
      Token op = take();
      SyntaxNode exponent = unary(); // right-associative
      return binary(SyntaxNode::Kind::Pow, op, std::move(base), std::move(exponent));
    }
    return base;
  }

  int integer() {
    if (peek().kind != Token::Kind::Int) fail("expected an integer");
    Token t = take();
    if (t.text.size() > 9) throw ParseError("index too large", t.line, t.column);
    return std::stoi(t.text);
  }

  IndexSpec index_spec() {
    IndexSpec spec;
    if (peek().kind == Token::Kind::Ident) {
      spec.variable = take().text;
      if (is_op("+") || is_op("-")) {
        bool minus = take().text == "-";
        spec.offset = minus ? -integer() : integer();
      }
    } else {
      spec.offset = integer();
    }
    return spec;
  }

  std::vector<SyntaxNode> arguments() {
    std::vector<SyntaxNode> args;
    expect("(");
    if (!is_op(")")) {
      args.push_back(expression());
      while (is_op(",")) {
        take();
        args.push_back(expression());
      }
    }
    expect(")");
    return args;
  }

  SyntaxNode primary() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Int) {
      Token tok = take();
      SyntaxNode n = node(SyntaxNode::Kind::Number, tok);
      n.value = Rational(tok.text);
      return n;
    }
    if (is_op("#")) {
      Token tok = take();
      SyntaxNode n = node(SyntaxNode::Kind::Placeholder, tok);
      n.placeholder = integer();
      if (n.placeholder < 1) throw ParseError("placeholders start at #1", tok.line, tok.column);
      return n;
    }
    if (is_op("(")) {
      take();
      SyntaxNode n = expression();
      expect(")");
      return n;
    }
    if (t.kind != Token::Kind::Ident) fail(t.kind == Token::Kind::End ? "unexpected end of expression" : "unexpected '" + t.text + "'");
    Token id = take();
    if (is_op("(")) {
      SyntaxNode n = node(SyntaxNode::Kind::Call, id);
      n.name = id.text;
      n.children = arguments();
      return n;
    }
    if (!is_op("[")) {
      SyntaxNode n = node(SyntaxNode::Kind::Symbol, id);
      n.name = id.text;
      return n;
    }
    take();
    // Either a chain index or the partial list of dF[i,j](...).
    IndexSpec first = index_spec();
    std::vector<int> list{first.offset};
    bool literal = first.variable.empty();
    while (is_op(",")) {
      take();
      list.push_back(integer());
    }
    expect("]");
    if (is_op("(")) {
      if (!literal || id.text.size() < 2 || id.text[0] != 'd')
        throw ParseError("partial-derivative atoms are written dF[i](...)", id.line, id.column);
      SyntaxNode n = node(SyntaxNode::Kind::Call, id);
      n.name = id.text.substr(1);
      n.partials = list;
      n.children = arguments();
      return n;
    }
    if (list.size() != 1) throw ParseError("chain atoms take a single index", id.line, id.column);
    SyntaxNode n = node(SyntaxNode::Kind::Symbol, id);
    n.name = id.text;
    n.index = first;
    return n;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

} // namespace

SyntaxNode parse_syntax(std::string_view text, int line, int column) {
  return Parser(tokenize(text, line, column)).parse();
}

Expr to_expr(const SyntaxNode& n, const Scope& scope) {
  using K = SyntaxNode::Kind;
  switch (n.kind) {
  case K::Number:
    return Expr(n.value);
  case K::Placeholder:
    return Expr::atom(placeholder(n.placeholder));
  case K::Symbol: {
    std::optional<int> index;
    if (n.index) {
      int base = 0;
      if (!n.index->variable.empty()) {
        auto it = scope.bindings.find(n.index->variable);
        if (it == scope.bindings.end())
          throw ParseError("unbound index variable '" + n.index->variable + "'", n.line, n.column);
        base = it->second;
      }
      index = base + n.index->offset;
      if (*index < 0) throw ParseError("negative chain index", n.line, n.column);
    }
    std::optional<Expr> e = scope.resolve ? scope.resolve(n.name, index) : std::nullopt;
    if (!e) throw ParseError("undeclared identifier '" + n.name + "'", n.line, n.column);
    return *e;
  }
  case K::Call: {
    std::optional<SymbolId> f = scope.function ? scope.function(n.name) : std::nullopt;
    if (!f) throw ParseError("undeclared function '" + n.name + "'", n.line, n.column);
    std::vector<Expr> args;
    for (const auto& c : n.children) args.push_back(to_expr(c, scope));
    try {
      return apply_partial(*f, n.partials, std::move(args));
    } catch (const MalformedInput& e) {
      throw ParseError(e.what(), n.line, n.column);
    }
  }
  case K::Neg:
    return -to_expr(n.children[0], scope);
  case K::Add:
    return to_expr(n.children[0], scope) + to_expr(n.children[1], scope);
  case K::Sub:
    return to_expr(n.children[0], scope) - to_expr(n.children[1], scope);
  case K::Mul:
    return to_expr(n.children[0], scope) * to_expr(n.children[1], scope);
  case K::Div: {
    Expr d = to_expr(n.children[1], scope);
    if (d.is_zero()) throw ParseError("division by zero", n.line, n.column);
    return to_expr(n.children[0], scope) / d;
  }
  case K::Pow: {
    Expr exponent = to_expr(n.children[1], scope);
    if (!exponent.is_constant() || exponent.constant_value().get_den() != 1)
      throw ParseError("exponents must be integers", n.children[1].line, n.children[1].column);
    mpz_class k = exponent.constant_value().get_num();
    if (!k.fits_sint_p() || abs(k) > 10000) throw ParseError("exponent too large", n.line, n.column);
    Expr base = to_expr(n.children[0], scope);
    if (base.is_zero() && k < 0) throw ParseError("division by zero", n.line, n.column);
    return base.pow(static_cast<int>(k.get_si()));
  }
  }
  return Expr();
}

Scope free_scope() {
  Scope s;
  s.resolve = [](const std::string& name, std::optional<int> index) -> std::optional<Expr> {
    return var(name, index ? *index : -1);
  };
  return s;
}

} // namespace diffiety
