#include "lcert/reductions.hpp"

#include "lcert/combinators.hpp"
#include "lcert/error.hpp"
#include "lcert/eval.hpp"
#include "lcert/stdlib.hpp"

#include "tm_source.hpp"

#include <algorithm>
#include <set>

namespace lcert {

// ---------------------------------------------------------------------------
// L terms as data: var | app | lam

Value term_value(const Term& t) {
    switch (t.kind()) {
    case TermKind::var:
        return Value{0, {values::nat(t.index())}};
    case TermKind::app:
        return Value{1, {term_value(t.fn()), term_value(t.arg())}};
    case TermKind::lam:
        return Value{2, {term_value(t.body())}};
    }
    throw Error("unreachable term kind");
}

std::optional<Term> value_term(const Value& v) {
    if (v.ctor == 0 && v.args.size() == 1) {
        auto n = values::as_nat(v.args[0]);
        if (!n) return std::nullopt;
        return Term::var(*n);
    }
    if (v.ctor == 1 && v.args.size() == 2) {
        auto a = value_term(v.args[0]), b = value_term(v.args[1]);
        if (!a || !b) return std::nullopt;
        return Term::app(*a, *b);
    }
    if (v.ctor == 2 && v.args.size() == 1) {
        auto b = value_term(v.args[0]);
        if (!b) return std::nullopt;
        return Term::lam(*b);
    }
    return std::nullopt;
}

Term build_universal(ExtractionEnv& env) {
    const SourceProgram& p = stdlib_program();
    extract_program(env, p, {{"eqb", {}}, {"subst", {}}, {"eva", {}}});
    auto term = SrcType::adt("term");
    env.registry().register_closure(SrcType::adt("option", {term}));
    return env.at({"eva", {}});
}

// ---------------------------------------------------------------------------
// polynomials

Poly Poly::cst(std::uint64_t n) {
    Poly p;
    p.kind_ = Kind::cst;
    p.n_ = n;
    return p;
}

Poly Poly::var(std::uint64_t n) {
    Poly p;
    p.kind_ = Kind::var;
    p.n_ = n;
    return p;
}

Poly Poly::add(Poly a, Poly b) {
    Poly p;
    p.kind_ = Kind::add;
    p.a_ = std::make_shared<const Poly>(std::move(a));
    p.b_ = std::make_shared<const Poly>(std::move(b));
    return p;
}

Poly Poly::mul(Poly a, Poly b) {
    Poly p = add(std::move(a), std::move(b));
    p.kind_ = Kind::mul;
    return p;
}

std::uint64_t Poly::size() const {
    if (kind_ == Kind::cst || kind_ == Kind::var) return 1;
    return 1 + a_->size() + b_->size();
}

std::string Poly::str() const {
    switch (kind_) {
    case Kind::cst:
        return "(c " + std::to_string(n_) + ")";
    case Kind::var:
        return "(v " + std::to_string(n_) + ")";
    case Kind::add:
        return "(+ " + a_->str() + " " + b_->str() + ")";
    case Kind::mul:
        return "(* " + a_->str() + " " + b_->str() + ")";
    }
    return "?";
}

bool operator==(const Poly& x, const Poly& y) {
    if (x.kind_ != y.kind_) return false;
    if (x.kind_ == Poly::Kind::cst || x.kind_ == Poly::Kind::var) return x.n_ == y.n_;
    return *x.a_ == *y.a_ && *x.b_ == *y.b_;
}

std::uint64_t h10_eval(const Poly& p, const std::vector<std::uint64_t>& assignment) {
    switch (p.kind()) {
    case Poly::Kind::cst:
        return p.number();
    case Poly::Kind::var:
        return p.number() < assignment.size() ? assignment[p.number()] : 0;
    case Poly::Kind::add:
        return h10_eval(p.lhs(), assignment) + h10_eval(p.rhs(), assignment);
    case Poly::Kind::mul:
        return h10_eval(p.lhs(), assignment) * h10_eval(p.rhs(), assignment);
    }
    return 0;
}

Value poly_value(const Poly& p) {
    switch (p.kind()) {
    case Poly::Kind::cst:
        return Value{0, {values::nat(p.number())}};
    case Poly::Kind::var:
        return Value{1, {values::nat(p.number())}};
    case Poly::Kind::add:
        return Value{2, {poly_value(p.lhs()), poly_value(p.rhs())}};
    case Poly::Kind::mul:
        return Value{3, {poly_value(p.lhs()), poly_value(p.rhs())}};
    }
    throw Error("unreachable poly kind");
}

std::optional<Poly> value_poly(const Value& v) {
    if (v.ctor <= 1 && v.args.size() == 1) {
        auto n = values::as_nat(v.args[0]);
        if (!n) return std::nullopt;
        return v.ctor == 0 ? Poly::cst(*n) : Poly::var(*n);
    }
    if ((v.ctor == 2 || v.ctor == 3) && v.args.size() == 2) {
        auto a = value_poly(v.args[0]), b = value_poly(v.args[1]);
        if (!a || !b) return std::nullopt;
        return v.ctor == 2 ? Poly::add(*a, *b) : Poly::mul(*a, *b);
    }
    return std::nullopt;
}

std::vector<std::uint64_t> L_nat(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(i);
    return out;
}

std::vector<Poly> enumerate_polys(std::uint64_t n) {
    std::vector<Poly> out;
    for (std::uint64_t m = 0; m < n; ++m) {
        std::vector<Poly> prev = out;
        for (auto k : L_nat(m)) out.push_back(Poly::cst(k));
        for (auto k : L_nat(m)) out.push_back(Poly::var(k));
        for (const auto& a : prev)
            for (const auto& b : prev) out.push_back(Poly::add(a, b));
        for (const auto& a : prev)
            for (const auto& b : prev) out.push_back(Poly::mul(a, b));
    }
    return out;
}

std::vector<std::vector<std::uint64_t>> L_list_nat(std::uint64_t n) {
    std::vector<std::vector<std::uint64_t>> out;
    for (std::uint64_t m = 0; m < n; ++m) {
        auto prev = out;
        out.push_back({});
        for (auto x : L_nat(m))
            for (const auto& l : prev) {
                std::vector<std::uint64_t> c{x};
                c.insert(c.end(), l.begin(), l.end());
                out.push_back(std::move(c));
            }
    }
    return out;
}

std::vector<H10Triple> h10_enumerator(std::uint64_t n) {
    std::vector<H10Triple> out;
    for (std::uint64_t m = 0; m < n; ++m) {
        auto polys = enumerate_polys(m);
        auto lists = L_list_nat(m);
        for (const auto& a : polys)
            for (const auto& b : polys)
                for (const auto& s : lists)
                    if (h10_eval(a, s) == h10_eval(b, s)) out.push_back({a, b, s});
    }
    return out;
}

namespace {

// least n with p in enumerate_polys(n)
std::uint64_t poly_level(const Poly& p) {
    switch (p.kind()) {
    case Poly::Kind::cst:
    case Poly::Kind::var:
        return p.number() + 2;
    default:
        return std::max(poly_level(p.lhs()), poly_level(p.rhs())) + 1;
    }
}

// least n with l in L_list_nat(n)
std::uint64_t list_level(const std::vector<std::uint64_t>& l) {
    std::uint64_t level = 1;
    for (auto it = l.rbegin(); it != l.rend(); ++it) level = std::max(*it + 1, level) + 1;
    return level;
}

} // namespace

bool h10_enumerated_by(const H10Triple& t, std::uint64_t n) {
    if (n == 0) return false;
    std::uint64_t m = n - 1;
    return poly_level(t.lhs) <= m && poly_level(t.rhs) <= m && list_level(t.assignment) <= m &&
           h10_eval(t.lhs, t.assignment) == h10_eval(t.rhs, t.assignment);
}

std::uint64_t cantor_pair(std::uint64_t x, std::uint64_t y) {
    std::uint64_t d = x + y;
    return d * (d + 1) / 2 + x;
}

std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t k) {
    std::uint64_t d = 0;
    while ((d + 1) * (d + 2) / 2 <= k) ++d;
    std::uint64_t x = k - d * (d + 1) / 2;
    return {x, d - x};
}

std::optional<H10Witness> h10_witness(const H10Instance& instance, std::uint64_t max_level) {
    std::uint64_t position = 0;
    for (std::uint64_t m = 0; m < max_level; ++m) {
        auto polys = enumerate_polys(m);
        auto lists = L_list_nat(m);
        for (const auto& a : polys)
            for (const auto& b : polys)
                for (const auto& s : lists) {
                    if (h10_eval(a, s) != h10_eval(b, s)) continue;
                    if (a == instance.lhs && b == instance.rhs)
                        return H10Witness{m + 1, position, cantor_pair(m + 1, position), s};
                    ++position;
                }
    }
    return std::nullopt;
}

Poly parse_poly(const Sexpr& s) {
    if (!s.is_list() || s.items.empty() || !s.items[0].is_symbol()) s.fail("expected (c N), (v N), (+ P P) or (* P P)");
    const std::string& head = s.items[0].text;
    if (head == "c" || head == "v") {
        if (s.items.size() != 2 || !s.items[1].is_number()) s.fail("expected (" + head + " N)");
        return head == "c" ? Poly::cst(s.items[1].number) : Poly::var(s.items[1].number);
    }
    if (head == "+" || head == "*") {
        if (s.items.size() != 3) s.fail("expected (" + head + " P P)");
        Poly a = parse_poly(s.items[1]), b = parse_poly(s.items[2]);
        return head == "+" ? Poly::add(a, b) : Poly::mul(a, b);
    }
    s.items[0].fail("unknown polynomial form " + head);
}

H10Instance parse_h10(std::string_view text) {
    Sexpr s = parse_sexpr(text);
    if (!s.is_form("h10") || s.items.size() != 3) s.fail("expected (h10 POLY POLY)");
    return {parse_poly(s.items[1]), parse_poly(s.items[2])};
}

Term reduction_of_enumerable(const Term& enumerator_at, const Term& decider, const Term& encoded_instance) {
    if (!closed(enumerator_at) || !closed(decider) || !closed(encoded_instance))
        throw Error("reduction_of_enumerable: arguments must be closed");
    using T = Term;
    // λn. at n (λy. decide x y) false, with option = some | none
    T found = T::lam(apply(decider, {encoded_instance, T::var(0)}));
    T test = T::lam(apply(T::app(enumerator_at, T::var(0)), {found, gen_constructor(0, 2, 1)}));
    return mu(test);
}

Term h10_reduction(ExtractionEnv& env, const H10Instance& instance) {
    const SourceProgram& p = stdlib_program();
    extract_program(env, p, {{"h10_at", {}}, {"poly_pair_eqb", {}}});
    auto poly = SrcType::adt("poly");
    SrcType pp = SrcType::adt("pair", {poly, poly});
    env.registry().register_closure(pp);
    Term x = env.registry().encode(pp, values::pair(poly_value(instance.lhs), poly_value(instance.rhs)));
    return reduction_of_enumerable(env.at({"h10_at", {}}), env.at({"poly_pair_eqb", {}}), x);
}

// ---------------------------------------------------------------------------
// Turing machines

namespace {

std::optional<std::uint64_t> parse_cell(const Sexpr& s) {
    if (s.is_symbol("_")) return std::nullopt;
    if (!s.is_number()) s.fail("expected a symbol number or _");
    return s.number;
}

std::uint64_t number_field(const Sexpr& form) {
    if (form.items.size() != 2 || !form.items[1].is_number()) form.fail("expected (" + form.items[0].text + " N)");
    return form.items[1].number;
}

TapeState parse_tape(const Sexpr& s) {
    if (!s.is_form("tape") || s.items.size() != 4 || !s.items[1].is_list() || !s.items[3].is_list())
        s.fail("expected (tape (LEFT...) HEAD (RIGHT...))");
    TapeState t;
    for (const auto& c : s.items[1].items) {
        if (!c.is_number()) c.fail("expected a symbol number");
        t.left.push_back(c.number);
    }
    t.head = parse_cell(s.items[2]);
    for (const auto& c : s.items[3].items) {
        if (!c.is_number()) c.fail("expected a symbol number");
        t.right.push_back(c.number);
    }
    return t;
}

} // namespace

TMachine parse_tm(std::string_view text) {
    Sexpr s = parse_sexpr(text);
    if (!s.is_form("tm")) s.fail("expected (tm ...)");
    TMachine m;
    std::vector<std::uint64_t> halting;
    for (std::size_t i = 1; i < s.items.size(); ++i) {
        const Sexpr& f = s.items[i];
        if (!f.is_list() || f.items.empty() || !f.items[0].is_symbol()) f.fail("expected a machine field");
        const std::string& k = f.items[0].text;
        if (k == "states") {
            m.states = number_field(f);
        } else if (k == "symbols") {
            m.symbols = number_field(f);
        } else if (k == "tapes") {
            m.tapes = number_field(f);
        } else if (k == "start") {
            m.start = number_field(f);
        } else if (k == "halt") {
            for (std::size_t j = 1; j < f.items.size(); ++j) {
                if (!f.items[j].is_number()) f.items[j].fail("expected a state");
                halting.push_back(f.items[j].number);
            }
        } else if (k == "row") {
            if (f.items.size() < 4 || !f.items[1].is_number() || !f.items[2].is_list() || !f.items[3].is_number())
                f.fail("expected (row STATE (READ...) NEXT (WRITE MOVE)...)");
            TMRow row;
            row.state = f.items[1].number;
            for (const auto& c : f.items[2].items) row.read.push_back(parse_cell(c));
            row.next = f.items[3].number;
            for (std::size_t j = 4; j < f.items.size(); ++j) {
                const Sexpr& a = f.items[j];
                if (!a.is_list() || a.items.size() != 2 || !a.items[1].is_symbol()) a.fail("expected (WRITE MOVE)");
                TMAction act;
                act.write = parse_cell(a.items[0]);
                const std::string& mv = a.items[1].text;
                if (mv == "L")
                    act.move = Move::left;
                else if (mv == "R")
                    act.move = Move::right;
                else if (mv == "N")
                    act.move = Move::stay;
                else
                    a.items[1].fail("expected L, R or N");
                row.actions.push_back(act);
            }
            m.rows.push_back(std::move(row));
        } else if (k == "input") {
            for (std::size_t j = 1; j < f.items.size(); ++j) m.input.push_back(parse_tape(f.items[j]));
        } else {
            f.items[0].fail("unknown machine field " + k);
        }
    }
    if (m.states == 0) s.fail("machine needs at least one state");
    if (m.start >= m.states) s.fail("start state out of range");
    m.halting.assign(m.states, false);
    for (auto h : halting) {
        if (h >= m.states) s.fail("halting state out of range");
        m.halting[h] = true;
    }
    auto symbol_ok = [&](const std::optional<std::uint64_t>& c) { return !c || *c < m.symbols; };
    std::set<std::string> keys;
    for (const auto& r : m.rows) {
        if (r.state >= m.states || r.next >= m.states) s.fail("row refers to an unknown state");
        if (r.read.size() != m.tapes || r.actions.size() != m.tapes) s.fail("row does not match the number of tapes");
        std::string key = std::to_string(r.state);
        for (const auto& c : r.read) {
            if (!symbol_ok(c)) s.fail("row reads an unknown symbol");
            key += c ? " " + std::to_string(*c) : " _";
        }
        for (const auto& a : r.actions)
            if (!symbol_ok(a.write)) s.fail("row writes an unknown symbol");
        if (!keys.insert(key).second) s.fail("two rows for state/symbols " + key);
    }
    if (m.input.empty()) m.input.assign(m.tapes, TapeState{});
    if (m.input.size() != m.tapes) s.fail("input does not match the number of tapes");
    for (const auto& t : m.input) {
        if (!symbol_ok(t.head)) s.fail("input holds an unknown symbol");
        for (auto c : t.left)
            if (c >= m.symbols) s.fail("input holds an unknown symbol");
        for (auto c : t.right)
            if (c >= m.symbols) s.fail("input holds an unknown symbol");
    }
    return m;
}

namespace {

void push_cell(std::optional<std::uint64_t> h, std::vector<std::uint64_t>& side) {
    if (h) side.insert(side.begin(), *h);
}

TapeState act(TapeState t, const TMAction& a) {
    if (a.write) t.head = a.write;
    if (a.move == Move::left) {
        push_cell(t.head, t.right);
        if (t.left.empty()) {
            t.head.reset();
        } else {
            t.head = t.left.front();
            t.left.erase(t.left.begin());
        }
    } else if (a.move == Move::right) {
        push_cell(t.head, t.left);
        if (t.right.empty()) {
            t.head.reset();
        } else {
            t.head = t.right.front();
            t.right.erase(t.right.begin());
        }
    }
    return t;
}

} // namespace

TMConfig tm_step(const TMachine& m, const TMConfig& c) {
    for (const auto& r : m.rows) {
        if (r.state != c.state) continue;
        bool match = r.read.size() == c.tapes.size();
        for (std::size_t i = 0; match && i < r.read.size(); ++i) match = r.read[i] == c.tapes[i].head;
        if (!match) continue;
        TMConfig out{r.next, {}};
        for (std::size_t i = 0; i < c.tapes.size(); ++i)
            out.tapes.push_back(i < r.actions.size() ? act(c.tapes[i], r.actions[i]) : c.tapes[i]);
        return out;
    }
    return c;
}

std::optional<TMConfig> tm_loop(const TMachine& m, const TMConfig& c, std::uint64_t k) {
    TMConfig cur = c;
    for (;;) {
        if (m.halts_in(cur.state)) return cur;
        if (k == 0) return std::nullopt;
        --k;
        cur = tm_step(m, cur);
    }
}

namespace {

Value cell_value(const std::optional<std::uint64_t>& c) { return c ? values::some(values::nat(*c)) : values::none(); }

std::optional<std::optional<std::uint64_t>> value_cell(const Value& v) {
    if (v.ctor == 1 && v.args.empty()) return std::optional<std::uint64_t>{};
    if (v.ctor == 0 && v.args.size() == 1) {
        auto n = values::as_nat(v.args[0]);
        if (!n) return std::nullopt;
        return std::optional<std::uint64_t>{*n};
    }
    return std::nullopt;
}

std::optional<std::vector<std::uint64_t>> value_nats(const Value& v) {
    auto l = values::as_list(v);
    if (!l) return std::nullopt;
    std::vector<std::uint64_t> out;
    for (const auto& x : *l) {
        auto n = values::as_nat(x);
        if (!n) return std::nullopt;
        out.push_back(*n);
    }
    return out;
}

std::string cell_src(const std::optional<std::uint64_t>& c) {
    return c ? "([some nat] " + std::to_string(*c) + ")" : "[none nat]";
}

const char* move_src(Move m) {
    switch (m) {
    case Move::left:
        return "L";
    case Move::right:
        return "R";
    case Move::stay:
        return "N";
    }
    return "N";
}

const char* table_type =
    "(list (pair (pair nat (list (option nat))) (pair nat (list (pair (option nat) move)))))";

std::string machine_defs(const TMachine& m) {
    std::string s = "(def tm_table () " + std::string(table_type) + "\n  (list (pair (pair nat (list (option nat))) (pair nat (list (pair (option nat) move))))";
    for (const auto& r : m.rows) {
        std::string read = "(list (option nat)";
        for (const auto& c : r.read) read += " " + cell_src(c);
        read += ")";
        std::string acts = "(list (pair (option nat) move)";
        for (const auto& a : r.actions)
            acts += " ([pair (option nat) move] " + cell_src(a.write) + " " + move_src(a.move) + ")";
        acts += ")";
        s += "\n    ([pair (pair nat (list (option nat))) (pair nat (list (pair (option nat) move)))]"
             " ([pair nat (list (option nat))] " +
             std::to_string(r.state) + " " + read + ") ([pair nat (list (pair (option nat) move))] " +
             std::to_string(r.next) + " " + acts + "))";
    }
    s += "))\n\n(def tm_halting () (list bool) (list bool";
    for (bool h : m.halting) s += h ? " true" : " false";
    s += "))\n\n";
    s += R"((def tm_step () (-> config config)
  (lam (c config) (tm_step_with tm_table c)))

(def tm_loop () (-> config nat (option config))
  (fix loop 1 (-> config nat (option config))
    (lam (c config) (k nat)
      (match (tm_running_with tm_table tm_halting c) option
        (((some d) (match k nat (O [none config]) ((S j) (loop d j))))
         (none ([some config] c)))))))

(def tm_halts_within () (-> config nat bool)
  (lam (c config) (k nat) ([is_some config] (tm_loop c k))))
)";
    return s;
}

} // namespace

Value config_value(const TMConfig& c) {
    std::vector<Value> tapes;
    for (const auto& t : c.tapes)
        tapes.push_back(Value{0, {values::nat_list(t.left), cell_value(t.head), values::nat_list(t.right)}});
    return Value{0, {values::nat(c.state), values::list(std::move(tapes))}};
}

std::optional<TMConfig> value_config(const Value& v) {
    if (v.ctor != 0 || v.args.size() != 2) return std::nullopt;
    auto q = values::as_nat(v.args[0]);
    auto ts = values::as_list(v.args[1]);
    if (!q || !ts) return std::nullopt;
    TMConfig c;
    c.state = *q;
    for (const auto& t : *ts) {
        if (t.ctor != 0 || t.args.size() != 3) return std::nullopt;
        auto l = value_nats(t.args[0]);
        auto h = value_cell(t.args[1]);
        auto r = value_nats(t.args[2]);
        if (!l || !h || !r) return std::nullopt;
        c.tapes.push_back({*l, *h, *r});
    }
    return c;
}

SourceProgram tm_program(const TMachine& m) {
    SourceProgram p = stdlib_program();
    parse_into(p, embedded::tm);
    parse_into(p, machine_defs(m));
    typecheck(p);
    return p;
}

void extract_tm(ExtractionEnv& env, const SourceProgram& program) {
    extract_program(env, program, {{"tm_step", {}}, {"tm_loop", {}}, {"tm_halts_within", {}}});
    env.registry().register_closure(SrcType::adt("option", {SrcType::adt("config")}));
    env.registry().register_closure(SrcType::adt("config"));
}

Term tm_halting_reduction(ExtractionEnv& env, const SourceProgram& program, const TMConfig& c) {
    extract_tm(env, program);
    Term within = env.at({"tm_halts_within", {}});
    Term applied = Term::app(within, env.registry().encode(SrcType::adt("config"), config_value(c)));
    // partial application to a procedure, so μ gets a closed abstraction
    EvalOutcome p = machine_eval(applied, 1'000'000);
    if (p.exhausted()) throw Error("tm_halting_reduction: partial application did not normalize");
    return mu(*p.normal);
}

} // namespace lcert
