#ifndef LCERT_SEXPR_HPP
#define LCERT_SEXPR_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lcert {

struct SexprPos {
    std::size_t line = 1;
    std::size_t column = 1;
};

// Atoms are symbols or naturals; lists come in round and square flavours.
// `;` starts a comment running to the end of the line.
struct Sexpr {
    enum class Kind { symbol, number, list, bracket };

    Kind kind = Kind::symbol;
    std::string text;
    std::uint64_t number = 0;
    std::vector<Sexpr> items;
    SexprPos pos;

    bool is_symbol() const { return kind == Kind::symbol; }
    bool is_symbol(std::string_view s) const { return kind == Kind::symbol && text == s; }
    bool is_number() const { return kind == Kind::number; }
    bool is_list() const { return kind == Kind::list; }
    bool is_bracket() const { return kind == Kind::bracket; }
    // list whose head is the symbol `head`
    bool is_form(std::string_view head) const {
        return kind == Kind::list && !items.empty() && items[0].is_symbol(head);
    }

    std::string str() const;

    [[noreturn]] void fail(const std::string& what) const;
};

std::vector<Sexpr> parse_sexprs(std::string_view text);
Sexpr parse_sexpr(std::string_view text);

} // namespace lcert

#endif
