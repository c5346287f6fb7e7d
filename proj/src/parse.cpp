#include "qfb/parse.hpp"

#include <cctype>

namespace qfb {

namespace {

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool accept(const std::string& tok) {
    skip_ws();
    if (s_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(const std::string& tok) {
    if (!accept(tok)) fail("expected '" + tok + "'");
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    }
    if (start == pos_) fail("expected identifier");
    return s_.substr(start, pos_ - start);
  }
  std::string digits() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    return s_.substr(start, pos_ - start);
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }
  std::size_t pos() const { return pos_; }
  const std::string& text() const { return s_; }
  void set_pos(std::size_t p) { pos_ = p; }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
};

class ElemParser {
 public:
  ElemParser(const FieldPtr& F, Lexer& lx) : F_(F), lx_(lx) {}

  Elem expr() {
    Elem acc;
    bool neg = false;
    if (lx_.accept("-"))
      neg = true;
    else
      lx_.accept("+");
    acc = term();
    if (neg) acc = -acc;
    for (;;) {
      if (lx_.accept("+"))
        acc = acc + term();
      else if (lx_.accept("-"))
        acc = acc - term();
      else
        return acc;
    }
  }

 private:
  Elem term() {
    Elem acc = power();
    for (;;) {
      if (lx_.accept("*")) {
        acc = acc * power();
      } else if (lx_.peek() == '/') {
        std::size_t at = lx_.pos();
        lx_.accept("/");
        Elem d = power();
        if (d.is_zero()) throw ParseError(at, "division by zero");
        acc = acc / d;
      } else {
        return acc;
      }
    }
  }

  Elem power() {
    Elem b = atom();
    if (lx_.accept("^")) {
      long sign = 1;
      bool paren = lx_.accept("(");
      if (lx_.accept("-")) sign = -1;
      std::size_t at = lx_.pos();
      std::string d = lx_.digits();
      if (paren) lx_.expect(")");
      if (d.size() > 6) throw ParseError(at, "exponent too large");
      long e = sign * std::stol(d);
      if (e < 0 && b.is_zero()) throw ParseError(at, "negative power of zero");
      return b.pow(e);
    }
    return b;
  }

  Elem atom() {
    char c = lx_.peek();
    if (c == '(') {
      lx_.accept("(");
      Elem e = expr();
      lx_.expect(")");
      return e;
    }
    if (c == '-') {
      lx_.accept("-");
      return -power();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mpz_class z(lx_.digits());
      return F_->from_rational(mpq_class(z));
    }
    std::size_t at = lx_.pos();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name = lx_.ident();
      for (const Field* f = F_.get(); f; f = f->base().get()) {
        if ((f->kind() == FieldKind::Laurent || f->kind() == FieldKind::QuadExt) && f->gen_name() == name)
          return F_->embed(f->gen());
      }
      lx_.set_pos(at);
      throw ParseError(at, "unknown identifier '" + name + "' in " + F_->str());
    }
    throw ParseError(at, c ? std::string("unexpected '") + c + "'" : "unexpected end of input");
  }

  const FieldPtr& F_;
  Lexer& lx_;
};

Elem elem_in(const FieldPtr& F, Lexer& lx) {
  ElemParser p(F, lx);
  try {
    return p.expr();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(lx.pos(), e.what());
  }
}

FieldPtr field_in(Lexer& lx) {
  FieldPtr F;
  std::size_t at = lx.pos();
  if (lx.accept("Q")) {
    F = Field::rationals();
  } else if (lx.accept("R")) {
    F = Field::reals();
  } else if (lx.accept("C")) {
    F = Field::quad(Field::reals(), Field::reals()->from_int(-1));
  } else if (lx.accept("F")) {
    std::string p = lx.digits();
    try {
      F = Field::prime_field(std::stoull(p));
    } catch (const std::exception& e) {
      throw ParseError(at, e.what());
    }
  } else {
    lx.fail("expected Q, R, C or F<p>");
  }
  for (;;) {
    at = lx.pos();
    if (lx.accept("((")) {
      std::string v = lx.ident();
      lx.expect("))");
      try {
        F = Field::laurent(F, v);
      } catch (const Error& e) {
        throw ParseError(at, e.what());
      }
    } else if (lx.accept("(")) {
      if (!lx.accept("sqrt")) lx.fail("expected 'sqrt'");
      Elem d = elem_in(F, lx);
      lx.expect(")");
      try {
        F = Field::quad(F, d);
      } catch (const Error& e) {
        throw ParseError(at, e.what());
      }
    } else {
      return F;
    }
  }
}

void expect_end(Lexer& lx) {
  if (!lx.at_end()) lx.fail("trailing input");
}

std::vector<Elem> entry_list(const FieldPtr& F, Lexer& lx, const std::string& close) {
  std::vector<Elem> out;
  if (lx.accept(close)) return out;
  for (;;) {
    out.push_back(elem_in(F, lx));
    if (lx.accept(",")) continue;
    lx.expect(close);
    return out;
  }
}

}  // namespace

FieldPtr parse_field(const std::string& text) {
  Lexer lx(text);
  FieldPtr F = field_in(lx);
  expect_end(lx);
  return F;
}

Elem parse_elem(const FieldPtr& F, const std::string& text) {
  Lexer lx(text);
  Elem e = elem_in(F, lx);
  expect_end(lx);
  return e;
}

std::vector<Elem> parse_form_entries(const FieldPtr& F, const std::string& text) {
  Lexer lx(text);
  Elem scale = F->one();
  if (lx.peek() != '<') {
    std::size_t lt = text.find('<');
    std::size_t star = lt == std::string::npos ? lt : text.rfind('*', lt);
    if (star == std::string::npos) lx.fail("expected '<'");
    for (std::size_t i = star + 1; i < lt; ++i)
      if (!std::isspace(static_cast<unsigned char>(text[i]))) throw ParseError(i, "expected '<'");
    std::string prefix = text.substr(0, star);
    Lexer sub(prefix);
    scale = elem_in(F, sub);
    expect_end(sub);
    lx.set_pos(lt);
  }
  std::vector<Elem> out;
  std::size_t at = lx.pos();
  if (lx.accept("<<")) {
    auto slots = entry_list(F, lx, ">>");
    out.push_back(F->one());
    for (const auto& a : slots) {
      std::size_t n = out.size();
      for (std::size_t i = 0; i < n; ++i) out.push_back(-(out[i] * a));
    }
  } else {
    lx.expect("<");
    out = entry_list(F, lx, ">");
  }
  expect_end(lx);
  if (out.empty()) throw ParseError(at, "empty form");
  for (auto& e : out) {
    e = e * scale;
    if (e.is_zero()) throw ParseError(at, "zero diagonal entry");
  }
  return out;
}

std::vector<std::pair<Elem, Elem>> parse_symbols(const FieldPtr& F, const std::string& text) {
  Lexer lx(text);
  std::vector<std::pair<Elem, Elem>> out;
  bool bracket = lx.accept("[");
  if (bracket && lx.accept("]")) {
    expect_end(lx);
    return out;
  }
  for (;;) {
    std::size_t at = lx.pos();
    lx.expect("(");
    Elem a = elem_in(F, lx);
    lx.expect(",");
    Elem b = elem_in(F, lx);
    lx.expect(")");
    if (a.is_zero() || b.is_zero()) throw ParseError(at, "zero symbol slot");
    out.emplace_back(a, b);
    if (lx.accept(bracket ? "," : "+")) continue;
    break;
  }
  if (bracket) lx.expect("]");
  expect_end(lx);
  return out;
}

}  // namespace qfb
