#include "lcert/term.hpp"

#include "lcert/error.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace lcert {

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
    return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

} // namespace

Term::Term() : Term(var(0)) {}

Term Term::var(std::uint64_t index) {
    auto n = std::make_shared<Node>();
    n->kind = TermKind::var;
    n->index = index;
    n->free_bound = index + 1;
    n->hash = mix(0x51, index);
    return Term(std::move(n));
}

Term Term::app(Term fn, Term arg) {
    auto n = std::make_shared<Node>();
    n->kind = TermKind::app;
    n->size = 1 + fn.size() + arg.size();
    n->depth = 1 + std::max(fn.depth(), arg.depth());
    n->free_bound = std::max(fn.free_bound(), arg.free_bound());
    n->hash = mix(mix(0xa9, fn.hash()), arg.hash());
    n->left = std::move(fn);
    n->right = std::move(arg);
    return Term(std::move(n));
}

Term Term::lam(Term body) {
    auto n = std::make_shared<Node>();
    n->kind = TermKind::lam;
    n->size = 1 + body.size();
    n->depth = 1 + body.depth();
    n->free_bound = body.free_bound() == 0 ? 0 : body.free_bound() - 1;
    n->hash = mix(0x1d, body.hash());
    n->left = std::move(body);
    return Term(std::move(n));
}

std::uint64_t Term::index() const {
    if (!is_var()) throw Error("Term::index on non-variable");
    return node_->index;
}

const Term& Term::fn() const {
    if (!is_app()) throw Error("Term::fn on non-application");
    return node_->left;
}

const Term& Term::arg() const {
    if (!is_app()) throw Error("Term::arg on non-application");
    return node_->right;
}

const Term& Term::body() const {
    if (!is_lam()) throw Error("Term::body on non-abstraction");
    return node_->left;
}

bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash() || a.size() != b.size() || a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case TermKind::var:
        return a.node_->index == b.node_->index;
    case TermKind::lam:
        return a.body() == b.body();
    case TermKind::app:
        return a.fn() == b.fn() && a.arg() == b.arg();
    }
    return false;
}

Term apply(Term fn, const std::vector<Term>& args) {
    for (const auto& a : args) fn = Term::app(std::move(fn), a);
    return fn;
}

Term lams(std::size_t count, Term body) {
    for (std::size_t i = 0; i < count; ++i) body = Term::lam(std::move(body));
    return body;
}

Term subst(const Term& s, std::uint64_t k, const Term& u) {
    // no free occurrence of k below this node
    if (s.free_bound() <= k) return s;
    switch (s.kind()) {
    case TermKind::var:
        return s.index() == k ? u : s;
    case TermKind::app:
        return Term::app(subst(s.fn(), k, u), subst(s.arg(), k, u));
    case TermKind::lam:
        return Term::lam(subst(s.body(), k + 1, u));
    }
    return s;
}

Term shift(const Term& s, std::uint64_t by, std::uint64_t cutoff) {
    if (by == 0 || s.free_bound() <= cutoff) return s;
    switch (s.kind()) {
    case TermKind::var:
        return s.index() >= cutoff ? Term::var(s.index() + by) : s;
    case TermKind::app:
        return Term::app(shift(s.fn(), by, cutoff), shift(s.arg(), by, cutoff));
    case TermKind::lam:
        return Term::lam(shift(s.body(), by, cutoff + 1));
    }
    return s;
}

bool bound_by(const Term& s, std::uint64_t k) { return s.free_bound() <= k; }

bool closed(const Term& s) { return bound_by(s, 0); }

bool is_proc(const Term& s) { return s.is_lam() && closed(s); }

std::uint64_t weighted_size(const Term& s) {
    switch (s.kind()) {
    case TermKind::var:
        return 1 + s.index();
    case TermKind::app:
        return 1 + weighted_size(s.fn()) + weighted_size(s.arg());
    case TermKind::lam:
        return 1 + weighted_size(s.body());
    }
    return 0;
}

namespace {

std::string binder_name(std::uint64_t depth) {
    std::string name(1, static_cast<char>('a' + depth % 26));
    if (depth >= 26) name += std::to_string(depth / 26);
    return name;
}

void print_debruijn(std::ostream& out, const Term& t, const char* lambda, bool paren_body) {
    switch (t.kind()) {
    case TermKind::var:
        out << t.index();
        return;
    case TermKind::lam: {
        const Term* cur = &t;
        while (cur->is_lam()) {
            out << lambda;
            cur = &cur->body();
        }
        if (paren_body && cur->is_app()) {
            out << '(';
            print_debruijn(out, *cur, lambda, paren_body);
            out << ')';
        } else {
            print_debruijn(out, *cur, lambda, paren_body);
        }
        return;
    }
    case TermKind::app: {
        const Term& f = t.fn();
        const Term& a = t.arg();
        if (f.is_lam()) {
            out << '(';
            print_debruijn(out, f, lambda, paren_body);
            out << ')';
        } else {
            print_debruijn(out, f, lambda, paren_body);
        }
        out << ' ';
        if (a.is_var()) {
            print_debruijn(out, a, lambda, paren_body);
        } else {
            out << '(';
            print_debruijn(out, a, lambda, paren_body);
            out << ')';
        }
        return;
    }
    }
}

void print_named(std::ostream& out, const Term& t, std::uint64_t depth) {
    switch (t.kind()) {
    case TermKind::var:
        if (t.index() < depth) {
            out << binder_name(depth - 1 - t.index());
        } else {
            out << '#' << (t.index() - depth);
        }
        return;
    case TermKind::lam: {
        out << "λ";
        const Term* cur = &t;
        bool first = true;
        while (cur->is_lam()) {
            if (!first) out << ' ';
            out << binder_name(depth++);
            first = false;
            cur = &cur->body();
        }
        out << ". ";
        print_named(out, *cur, depth);
        return;
    }
    case TermKind::app: {
        const Term& f = t.fn();
        const Term& a = t.arg();
        if (f.is_lam()) {
            out << '(';
            print_named(out, f, depth);
            out << ')';
        } else {
            print_named(out, f, depth);
        }
        out << ' ';
        if (a.is_var()) {
            print_named(out, a, depth);
        } else {
            out << '(';
            print_named(out, a, depth);
            out << ')';
        }
        return;
    }
    }
}

class TermParser {
  public:
    explicit TermParser(std::string_view text) : text_(text) {}

    Term parse() {
        Term t = sequence();
        skip_space();
        if (pos_ < text_.size()) fail("unexpected character");
        return t;
    }

  private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(what, line, col);
    }

    void skip_space() {
        while (pos_ < text_.size() &&
               (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r'))
            ++pos_;
    }

    bool at_lambda() const {
        if (pos_ < text_.size() && text_[pos_] == '\\') return true;
        return text_.substr(pos_, 2) == "λ";
    }

    bool at_atom_start() {
        skip_space();
        if (pos_ >= text_.size()) return false;
        char c = text_[pos_];
        return c == '(' || (c >= '0' && c <= '9') || at_lambda();
    }

    Term sequence() {
        if (!at_atom_start()) fail("expected a term");
        Term t = atom();
        while (at_atom_start()) t = Term::app(std::move(t), atom());
        return t;
    }

    Term atom() {
        skip_space();
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Term t = sequence();
            skip_space();
            if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
            ++pos_;
            return t;
        }
        if (at_lambda()) {
            pos_ += text_[pos_] == '\\' ? 1 : 2;
            // optional '.' after a binder, as in λ.0
            skip_space();
            if (pos_ < text_.size() && text_[pos_] == '.') ++pos_;
            return Term::lam(sequence());
        }
        std::uint64_t n = 0;
        while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') {
            n = n * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
            ++pos_;
        }
        return Term::var(n);
    }
};

} // namespace

std::string print_term(const Term& t, TermStyle style) {
    std::ostringstream out;
    switch (style) {
    case TermStyle::debruijn:
        print_debruijn(out, t, "\\", false);
        break;
    case TermStyle::lambda:
        print_debruijn(out, t, "λ", true);
        break;
    case TermStyle::named:
        print_named(out, t, 0);
        break;
    }
    return out.str();
}

Term parse_term(std::string_view text) { return TermParser(text).parse(); }

} // namespace lcert
