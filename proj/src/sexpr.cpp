#include "pvw/sexpr.hpp"

namespace pvw {

const Sexpr& Sexpr::at(std::size_t i) const {
  if (is_atom || i >= items.size()) fail("expected a longer list");
  return items[i];
}

const std::string& Sexpr::head() const {
  static const std::string empty;
  if (is_atom || items.empty() || !items[0].is_atom) return empty;
  return items[0].atom;
}

namespace {

struct Reader {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1, col = 1;

  explicit Reader(const std::string& t) : text(t) {}

  int peek() const { return pos < text.size() ? text[pos] : -1; }
  int get() {
    if (pos >= text.size()) return -1;
    char c = text[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }
  void skip_ws() {
    for (;;) {
      while (isspace(peek())) get();
      if (peek() == ';') {  // comment to end of line
        while (peek() != '\n' && peek() != -1) get();
        continue;
      }
      break;
    }
  }

  Sexpr read() {
    skip_ws();
    int l = line, c = col;
    if (peek() == -1) throw ParseError("unexpected end of input", l, c);
    if (peek() == ')') throw ParseError("unexpected ')'", l, c);
    if (peek() == '(') {
      get();
      Sexpr s;
      s.is_atom = false;
      s.line = l;
      s.col = c;
      for (;;) {
        skip_ws();
        if (peek() == -1) throw ParseError("missing ')'", l, c);
        if (peek() == ')') {
          get();
          break;
        }
        s.items.push_back(read());
      }
      return s;
    }
    Sexpr s;
    s.is_atom = true;
    s.line = l;
    s.col = c;
    while (peek() != -1 && !isspace(peek()) && peek() != '(' && peek() != ')' &&
           peek() != ';')
      s.atom.push_back(static_cast<char>(get()));
    if (s.atom.empty()) throw ParseError("empty atom", l, c);
    return s;
  }
};

}  // namespace

Sexpr parse_sexpr(const std::string& text) {
  Reader r(text);
  Sexpr s = r.read();
  r.skip_ws();
  if (r.peek() != -1) throw ParseError("trailing input", r.line, r.col);
  return s;
}

std::vector<Sexpr> parse_sexprs(const std::string& text) {
  Reader r(text);
  std::vector<Sexpr> out;
  for (;;) {
    r.skip_ws();
    if (r.peek() == -1) break;
    out.push_back(r.read());
  }
  return out;
}

namespace {

void print_into(const Sexpr& s, std::string& out) {
  if (s.is_atom) {
    out += s.atom;
    return;
  }
  out += '(';
  for (std::size_t i = 0; i < s.items.size(); ++i) {
    if (i) out += ' ';
    print_into(s.items[i], out);
  }
  out += ')';
}

}  // namespace

std::string print_sexpr(const Sexpr& s) {
  std::string out;
  print_into(s, out);
  return out;
}

Sexpr atom(std::string a) {
  Sexpr s;
  s.is_atom = true;
  s.atom = std::move(a);
  return s;
}

Sexpr list(std::vector<Sexpr> items) {
  Sexpr s;
  s.is_atom = false;
  s.items = std::move(items);
  return s;
}

}  // namespace pvw
