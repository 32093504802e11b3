#ifndef LCERT_TERM_HPP
#define LCERT_TERM_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lcert {

enum class TermKind : std::uint8_t { var, app, lam };

// Immutable de Bruijn term of the weak call-by-value calculus. Subterms are
// shared, so copies are cheap and substitution reuses untouched branches.
class Term {
  public:
    Term();

    static Term var(std::uint64_t index);
    static Term app(Term fn, Term arg);
    static Term lam(Term body);

    TermKind kind() const;
    bool is_var() const { return kind() == TermKind::var; }
    bool is_app() const { return kind() == TermKind::app; }
    bool is_lam() const { return kind() == TermKind::lam; }

    std::uint64_t index() const;
    const Term& fn() const;
    const Term& arg() const;
    const Term& body() const;

    // node count
    std::uint64_t size() const;
    std::uint64_t depth() const;
    std::size_t hash() const;
    // least b such that bound_by(*this, b) holds
    std::uint64_t free_bound() const;

    bool same_node(const Term& other) const { return node_ == other.node_; }
    const void* identity() const { return node_.get(); }

    friend bool operator==(const Term& a, const Term& b);
    friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

  private:
    struct Node;

    explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

struct Term::Node {
    TermKind kind = TermKind::var;
    std::uint64_t index = 0;
    std::uint64_t size = 1;
    std::uint64_t depth = 1;
    std::uint64_t free_bound = 0;
    std::size_t hash = 0;
    Term left{nullptr};
    Term right{nullptr};
};

inline TermKind Term::kind() const { return node_->kind; }
inline std::uint64_t Term::size() const { return node_->size; }
inline std::uint64_t Term::depth() const { return node_->depth; }
inline std::size_t Term::hash() const { return node_->hash; }
inline std::uint64_t Term::free_bound() const { return node_->free_bound; }

struct TermHash {
    std::size_t operator()(const Term& t) const { return t.hash(); }
};

// Left-nested application spine: apply(f, {a, b}) = (f a) b.
Term apply(Term fn, const std::vector<Term>& args);
Term lams(std::size_t count, Term body);

// Capturing substitution s[k := u].
Term subst(const Term& s, std::uint64_t k, const Term& u);

// Adds `by` to every free index >= cutoff.
Term shift(const Term& s, std::uint64_t by, std::uint64_t cutoff = 0);

bool bound_by(const Term& s, std::uint64_t k);
bool closed(const Term& s);
// Closed abstraction.
bool is_proc(const Term& s);

// Size measure used by the term encoding: a variable n weighs 1 + n.
std::uint64_t weighted_size(const Term& s);

enum class TermStyle {
    debruijn, // \\1 (\\1) 0
    lambda,   // λλ(1 (λλ1) 0)
    named,    // λa b. a (λc d. c) b
};

std::string print_term(const Term& t, TermStyle style = TermStyle::debruijn);

// Grammar: term ::= nat | "\" term | term term | "(" term ")"; `λ` is an
// alias for `\`. Application associates left, a binder extends as far right
// as possible. Throws ParseError.
Term parse_term(std::string_view text);

} // namespace lcert

template <>
struct std::hash<lcert::Term> {
    std::size_t operator()(const lcert::Term& t) const { return t.hash(); }
};

#endif
