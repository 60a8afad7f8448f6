#pragma once

// Minimal S-expression reader/printer used by every textual format.

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace pvw {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(const std::string& what, int line_, int col_)
      : std::runtime_error(what + " at " + std::to_string(line_) + ":" +
                           std::to_string(col_)),
        line(line_),
        col(col_) {}
};

struct Sexpr {
  bool is_atom = false;
  std::string atom;
  std::vector<Sexpr> items;
  int line = 0, col = 0;

  bool is_list() const { return !is_atom; }
  const Sexpr& at(std::size_t i) const;
  std::size_t size() const { return items.size(); }
  // Head atom of a list, or "" for an empty list / atom.
  const std::string& head() const;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, line, col);
  }
};

Sexpr parse_sexpr(const std::string& text);
std::vector<Sexpr> parse_sexprs(const std::string& text);  // whole input
std::string print_sexpr(const Sexpr& s);

Sexpr atom(std::string a);
Sexpr list(std::vector<Sexpr> items);

}  // namespace pvw
