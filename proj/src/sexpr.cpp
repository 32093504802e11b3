#include "lcert/sexpr.hpp"

#include "lcert/error.hpp"

#include <cctype>

namespace lcert {

std::string Sexpr::str() const {
    switch (kind) {
    case Kind::symbol:
        return text;
    case Kind::number:
        return std::to_string(number);
    case Kind::list:
    case Kind::bracket: {
        std::string s = kind == Kind::list ? "(" : "[";
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (i) s += ' ';
            s += items[i].str();
        }
        return s + (kind == Kind::list ? ")" : "]");
    }
    }
    return {};
}

void Sexpr::fail(const std::string& what) const { throw ParseError(what, pos.line, pos.column); }

namespace {

class Reader {
  public:
    explicit Reader(std::string_view text) : text_(text) {}

    std::vector<Sexpr> all() {
        std::vector<Sexpr> out;
        skip();
        while (pos_ < text_.size()) {
            out.push_back(read());
            skip();
        }
        return out;
    }

  private:
    std::string_view text_;
    std::size_t pos_ = 0;
    SexprPos at_;

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, at_.line, at_.column); }

    void advance() {
        if (text_[pos_] == '\n') {
            ++at_.line;
            at_.column = 1;
        } else if ((static_cast<unsigned char>(text_[pos_]) & 0xC0) != 0x80) {
            ++at_.column;
        }
        ++pos_;
    }

    void skip() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    static bool delimiter(char c) {
        return c == '(' || c == ')' || c == '[' || c == ']' || c == ';' ||
               std::isspace(static_cast<unsigned char>(c));
    }

    Sexpr read() {
        skip();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        Sexpr s;
        s.pos = at_;
        char c = text_[pos_];
        if (c == '(' || c == '[') {
            char close = c == '(' ? ')' : ']';
            s.kind = c == '(' ? Sexpr::Kind::list : Sexpr::Kind::bracket;
            advance();
            for (;;) {
                skip();
                if (pos_ >= text_.size()) {
                    at_ = s.pos;
                    fail(std::string("unclosed '") + c + "'");
                }
                if (text_[pos_] == close) {
                    advance();
                    return s;
                }
                if (text_[pos_] == ')' || text_[pos_] == ']') fail("mismatched closing bracket");
                s.items.push_back(read());
            }
        }
        if (c == ')' || c == ']') fail("unexpected closing bracket");
        std::size_t start = pos_;
        while (pos_ < text_.size() && !delimiter(text_[pos_])) advance();
        s.text = std::string(text_.substr(start, pos_ - start));
        bool digits = !s.text.empty();
        for (char d : s.text) digits = digits && std::isdigit(static_cast<unsigned char>(d));
        if (digits) {
            if (s.text.size() > 18) {
                at_ = s.pos;
                fail("number too large: " + s.text);
            }
            s.kind = Sexpr::Kind::number;
            s.number = std::stoull(s.text);
        }
        return s;
    }
};

} // namespace

std::vector<Sexpr> parse_sexprs(std::string_view text) { return Reader(text).all(); }

Sexpr parse_sexpr(std::string_view text) {
    auto all = parse_sexprs(text);
    if (all.size() != 1) throw ParseError("expected exactly one s-expression", 1, 1);
    return all.front();
}

} // namespace lcert
