#ifndef LCERT_REDUCTIONS_HPP
#define LCERT_REDUCTIONS_HPP

#include "lcert/extract.hpp"
#include "lcert/sexpr.hpp"
#include "lcert/source.hpp"
#include "lcert/term.hpp"
#include "lcert/value.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lcert {

// ---------------------------------------------------------------------------
// L terms as data

Value term_value(const Term& t);
std::optional<Term> value_term(const Value& v);

// Extracts eva and everything below it into env; returns U = extract(eva).
Term build_universal(ExtractionEnv& env);

// ---------------------------------------------------------------------------
// H10

class Poly {
  public:
    enum class Kind { cst, var, add, mul };

    static Poly cst(std::uint64_t n);
    static Poly var(std::uint64_t n);
    static Poly add(Poly a, Poly b);
    static Poly mul(Poly a, Poly b);

    Kind kind() const { return kind_; }
    std::uint64_t number() const { return n_; }
    const Poly& lhs() const { return *a_; }
    const Poly& rhs() const { return *b_; }
    std::uint64_t size() const;

    // (c N) | (v N) | (+ P P) | (* P P)
    std::string str() const;

    friend bool operator==(const Poly& x, const Poly& y);
    friend bool operator!=(const Poly& x, const Poly& y) { return !(x == y); }
    friend bool operator<(const Poly& x, const Poly& y) { return x.str() < y.str(); }

  private:
    Kind kind_ = Kind::cst;
    std::uint64_t n_ = 0;
    std::shared_ptr<const Poly> a_, b_;
};

struct H10Instance {
    Poly lhs, rhs;
};

// Out-of-range variables read as 0.
std::uint64_t h10_eval(const Poly& p, const std::vector<std::uint64_t>& assignment);

Value poly_value(const Poly& p);
std::optional<Poly> value_poly(const Value& v);

std::vector<std::uint64_t> L_nat(std::uint64_t n);
// Cumulative: enumerate_polys(n) is a prefix of enumerate_polys(n + 1).
std::vector<Poly> enumerate_polys(std::uint64_t n);
std::vector<std::vector<std::uint64_t>> L_list_nat(std::uint64_t n);

struct H10Triple {
    Poly lhs, rhs;
    std::vector<std::uint64_t> assignment;
};
std::vector<H10Triple> h10_enumerator(std::uint64_t n);
// Same membership as h10_enumerator(n) without materializing it.
bool h10_enumerated_by(const H10Triple& t, std::uint64_t n);

std::uint64_t cantor_pair(std::uint64_t x, std::uint64_t y);
std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t k);

struct H10Witness {
    std::uint64_t level = 0;    // least a with the triple in h10_enumerator(a)
    std::uint64_t position = 0; // its position b in that list
    std::uint64_t index = 0;    // cantor_pair(a, b), the index μ returns
    std::vector<std::uint64_t> assignment;
};
// First occurrence of the instance among h10_enumerator(max_level), found
// level by level without materializing the list.
std::optional<H10Witness> h10_witness(const H10Instance& instance, std::uint64_t max_level);

// (h10 POLY POLY)
H10Instance parse_h10(std::string_view text);
Poly parse_poly(const Sexpr& s);

// s_x = μ(λn. at n (λy. decide x y) false) for an option-valued enumerator
// `at`, a decider of equality and the encoded instance x: x is enumerated
// iff s_x has a normal form, which is then the encoding of the index.
Term reduction_of_enumerable(const Term& enumerator_at, const Term& decider, const Term& encoded_instance);

Term h10_reduction(ExtractionEnv& env, const H10Instance& instance);

// ---------------------------------------------------------------------------
// Turing machines

enum class Move { left, right, stay };

struct TapeState {
    std::vector<std::uint64_t> left; // nearest cell first
    std::optional<std::uint64_t> head;
    std::vector<std::uint64_t> right; // nearest cell first

    friend bool operator==(const TapeState&, const TapeState&) = default;
};

struct TMConfig {
    std::uint64_t state = 0;
    std::vector<TapeState> tapes;

    friend bool operator==(const TMConfig&, const TMConfig&) = default;
};

struct TMAction {
    std::optional<std::uint64_t> write; // none keeps the cell
    Move move = Move::stay;
};

struct TMRow {
    std::uint64_t state = 0;
    std::vector<std::optional<std::uint64_t>> read;
    std::uint64_t next = 0;
    std::vector<TMAction> actions;
};

struct TMachine {
    std::uint64_t states = 0;
    std::uint64_t symbols = 0;
    std::size_t tapes = 1;
    std::uint64_t start = 0;
    std::vector<bool> halting; // indexed by state
    std::vector<TMRow> rows;
    std::vector<TapeState> input;

    TMConfig initial() const { return {start, input}; }
    bool halts_in(std::uint64_t state) const { return state < halting.size() && halting[state]; }
};

// Parses the s-expression machine format and validates it: rows are
// deterministic and refer to known states and symbols.
TMachine parse_tm(std::string_view text);

// First matching row; a configuration without one is left unchanged.
TMConfig tm_step(const TMachine& m, const TMConfig& c);
// The halted configuration reached within k steps, if any.
std::optional<TMConfig> tm_loop(const TMachine& m, const TMConfig& c, std::uint64_t k);

Value config_value(const TMConfig& c);
std::optional<TMConfig> value_config(const Value& v);

// Standard library, the machine library and the definitions generated for
// m (its value table, halting list, tm_loop and tm_halts_within), checked.
SourceProgram tm_program(const TMachine& m);

// Extracts tm_loop and tm_halts_within for the machine's program.
void extract_tm(ExtractionEnv& env, const SourceProgram& program);

// μ over k of tm_halts_within c k: halts iff the machine halts from c.
Term tm_halting_reduction(ExtractionEnv& env, const SourceProgram& program, const TMConfig& c);

} // namespace lcert

#endif
