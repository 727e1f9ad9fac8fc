// Loader for the custom-algebra TOML subset: top-level keys `dim`,
// `labels` (array of strings, optional), `brackets` (array of inline tables
// {i, j, coeffs}). Indices are 1-based; pairs omitted from `brackets` are
// zero; the antisymmetric partner of each listed pair is filled in
// automatically.

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <memory>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <eulerwedge/errors.hpp>
#include <eulerwedge/liealg.hpp>

namespace ew {

namespace {

struct Value;
using ValuePtr = std::shared_ptr<Value>;

struct Value {
  std::variant<double, std::string, std::vector<ValuePtr>,
               std::map<std::string, ValuePtr>>
      v;
};

struct Token {
  enum Kind { Ident, Str, Num, Punct, End } kind = End;
  std::string text;
  double num = 0.0;
  int line = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    skip_space_and_comments();
    Token t;
    t.line = line_;
    if (pos_ >= src_.size()) return t;
    const char ch = src_[pos_];
    if (ch == '"') {
      t.kind = Token::Str;
      ++pos_;
      while (pos_ < src_.size() && src_[pos_] != '"') {
        if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) ++pos_;
        t.text += src_[pos_++];
      }
      if (pos_ >= src_.size())
        throw Error(Err::ParseError, err("unterminated string"));
      ++pos_;
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      t.kind = Token::Ident;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_'))
        t.text += src_[pos_++];
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' ||
        ch == '+') {
      t.kind = Token::Num;
      const std::size_t start = pos_;
      ++pos_;
      while (pos_ < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E' ||
              ((src_[pos_] == '-' || src_[pos_] == '+') &&
               (src_[pos_ - 1] == 'e' || src_[pos_ - 1] == 'E'))))
        ++pos_;
      t.text = src_.substr(start, pos_ - start);
      try {
        std::size_t used = 0;
        t.num = std::stod(t.text, &used);
        if (used != t.text.size()) throw std::invalid_argument(t.text);
      } catch (const std::exception&) {
        throw Error(Err::ParseError, err("bad number '" + t.text + "'"));
      }
      return t;
    }
    if (std::string("=[]{},").find(ch) != std::string::npos) {
      t.kind = Token::Punct;
      t.text = std::string(1, ch);
      ++pos_;
      return t;
    }
    throw Error(Err::ParseError,
                err(std::string("unexpected character '") + ch + "'"));
  }

  std::string err(const std::string& msg) const {
    return "TOML line " + std::to_string(line_) + ": " + msg;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      const char ch = src_[pos_];
      if (ch == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else if (ch == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) { advance(); }

  std::map<std::string, ValuePtr> parse_document() {
    std::map<std::string, ValuePtr> doc;
    while (cur_.kind != Token::End) {
      if (cur_.kind != Token::Ident)
        throw Error(Err::ParseError, lex_.err("expected key"));
      const std::string key = cur_.text;
      advance();
      expect_punct("=");
      doc[key] = parse_value();
    }
    return doc;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  void expect_punct(const std::string& p) {
    if (cur_.kind != Token::Punct || cur_.text != p)
      throw Error(Err::ParseError, lex_.err("expected '" + p + "'"));
    advance();
  }

  bool at_punct(const std::string& p) const {
    return cur_.kind == Token::Punct && cur_.text == p;
  }

  ValuePtr parse_value() {
    auto out = std::make_shared<Value>();
    if (cur_.kind == Token::Num) {
      out->v = cur_.num;
      advance();
    } else if (cur_.kind == Token::Str) {
      out->v = cur_.text;
      advance();
    } else if (at_punct("[")) {
      advance();
      std::vector<ValuePtr> items;
      while (!at_punct("]")) {
        items.push_back(parse_value());
        if (at_punct(","))
          advance();
        else if (!at_punct("]"))
          throw Error(Err::ParseError, lex_.err("expected ',' or ']'"));
      }
      advance();
      out->v = std::move(items);
    } else if (at_punct("{")) {
      advance();
      std::map<std::string, ValuePtr> table;
      while (!at_punct("}")) {
        if (cur_.kind != Token::Ident)
          throw Error(Err::ParseError, lex_.err("expected key in table"));
        const std::string key = cur_.text;
        advance();
        expect_punct("=");
        table[key] = parse_value();
        if (at_punct(","))
          advance();
        else if (!at_punct("}"))
          throw Error(Err::ParseError, lex_.err("expected ',' or '}'"));
      }
      advance();
      out->v = std::move(table);
    } else {
      throw Error(Err::ParseError, lex_.err("expected a value"));
    }
    return out;
  }

  Lexer lex_;
  Token cur_;
};

double as_number(const ValuePtr& v, const std::string& what) {
  if (!v || !std::holds_alternative<double>(v->v))
    throw Error(Err::ParseError, what + " must be a number");
  return std::get<double>(v->v);
}

int as_int(const ValuePtr& v, const std::string& what) {
  const double d = as_number(v, what);
  const int i = static_cast<int>(d);
  if (static_cast<double>(i) != d)
    throw Error(Err::ParseError, what + " must be an integer");
  return i;
}

}  // namespace

LieAlgebra load_algebra_toml(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Err::IoError, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string src = buf.str();

  Parser parser(src);
  const auto doc = parser.parse_document();

  const auto dim_it = doc.find("dim");
  if (dim_it == doc.end())
    throw Error(Err::ParseError, "missing required key 'dim'");
  const int dim = as_int(dim_it->second, "dim");
  if (dim < 1) throw Error(Err::ParseError, "dim must be >= 1");

  LieAlgebra L;
  L.dim = dim;
  L.basis_labels.resize(dim);
  for (int i = 0; i < dim; ++i) L.basis_labels[i] = "e" + std::to_string(i + 1);
  if (const auto it = doc.find("labels"); it != doc.end()) {
    const auto* arr = std::get_if<std::vector<ValuePtr>>(&it->second->v);
    if (!arr || static_cast<int>(arr->size()) != dim)
      throw Error(Err::ParseError, "labels must be an array of dim strings");
    for (int i = 0; i < dim; ++i) {
      const auto* s = std::get_if<std::string>(&(*arr)[i]->v);
      if (!s) throw Error(Err::ParseError, "labels entries must be strings");
      L.basis_labels[i] = *s;
    }
  }

  L.c.assign(dim, std::vector<Eigen::VectorXd>(dim, Element::Zero(dim)));
  if (const auto it = doc.find("brackets"); it != doc.end()) {
    const auto* arr = std::get_if<std::vector<ValuePtr>>(&it->second->v);
    if (!arr) throw Error(Err::ParseError, "brackets must be an array");
    std::set<std::pair<int, int>> seen;
    for (const auto& entry : *arr) {
      const auto* table =
          std::get_if<std::map<std::string, ValuePtr>>(&entry->v);
      if (!table)
        throw Error(Err::ParseError, "brackets entries must be inline tables");
      const auto geti = [&](const char* key) {
        const auto kit = table->find(key);
        if (kit == table->end())
          throw Error(Err::ParseError,
                      std::string("bracket entry missing '") + key + "'");
        return as_int(kit->second, key);
      };
      const int i = geti("i");
      const int j = geti("j");
      if (i < 1 || i > dim || j < 1 || j > dim)
        throw Error(Err::ParseError, "bracket indices out of range");
      if (i == j)
        throw Error(Err::ParseError,
                    "diagonal brackets are zero and may not be listed");
      if (!seen.insert({std::min(i, j), std::max(i, j)}).second)
        throw Error(Err::ParseError,
                    "duplicate bracket pair (" + std::to_string(i) + "," +
                        std::to_string(j) + ")");
      const auto cit = table->find("coeffs");
      if (cit == table->end())
        throw Error(Err::ParseError, "bracket entry missing 'coeffs'");
      const auto* coeffs = std::get_if<std::vector<ValuePtr>>(&cit->second->v);
      if (!coeffs || static_cast<int>(coeffs->size()) != dim)
        throw Error(Err::ParseError, "coeffs must be an array of dim numbers");
      Eigen::VectorXd v(dim);
      for (int k = 0; k < dim; ++k) v(k) = as_number((*coeffs)[k], "coeffs");
      L.c[i - 1][j - 1] = v;
      L.c[j - 1][i - 1] = -v;
    }
  }

  verify_structure(L);
  return L;
}

}  // namespace ew
