#include "fixtures.hpp"

#include "lcert/reductions.hpp"

#include <doctest.h>

#include <set>

using namespace lcert;
using namespace lcert::testing;

namespace {

TMachine machine(const std::string& name) {
    return parse_tm(read_file(std::string(LCERT_DATA_DIR) + "/machines/" + name + ".tm"));
}

std::optional<Term> run_universal(ExtractionEnv& env, const Term& u, std::uint64_t n, const Term& s) {
    const Registry& reg = env.registry();
    auto term = SrcType::adt("term");
    auto r = machine_eval(lcert::apply(u, {reg.encode(SrcType::adt("nat"), values::nat(n)), reg.encode(term, term_value(s))}),
                          10'000'000);
    REQUIRE_FALSE(r.exhausted());
    auto v = reg.decode(SrcType::adt("option", {term}), *r.normal);
    REQUIRE(v);
    if (v->ctor == 1) return std::nullopt;
    return value_term(v->args.at(0));
}

} // namespace

TEST_CASE("terms as data") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 200; ++i) {
        Term s = random_term(rng, 1 + rng() % 20, rng() % 3);
        CHECK(value_term(term_value(s)) == s);
    }
    CHECK(term_value(T("\\0")) == Value{2, {Value{0, {values::nat(0)}}}});
    CHECK(value_term(values::nat(1)) == std::nullopt);
}

TEST_CASE("universal term examples") {
    ExtractionEnv env;
    Term u = build_universal(env);
    CHECK(is_proc(u));
    CHECK(run_universal(env, u, 2, T("(\\0) (\\0)")) == T("\\0"));
    CHECK(run_universal(env, u, 0, T("5")) == std::nullopt);
    CHECK(run_universal(env, u, 0, T("\\0")) == T("\\0"));
    CHECK(run_universal(env, u, 3, T("(\\\\1) (\\0) (\\\\0)")) == eva(3, T("(\\\\1) (\\0) (\\\\0)")));
}

TEST_CASE("polynomial evaluation") {
    CHECK(h10_eval(Poly::var(0), {}) == 0);
    CHECK(h10_eval(Poly::add(Poly::cst(2), Poly::mul(Poly::cst(3), Poly::var(0))), {4}) == 14);
    CHECK(h10_eval(Poly::cst(7), {1, 2, 3}) == 7);
    Poly p = parse_poly(parse_sexpr("(+ (c 2) (* (c 3) (v 0)))"));
    CHECK(p.str() == "(+ (c 2) (* (c 3) (v 0)))");
    CHECK(value_poly(poly_value(p)) == p);
    CHECK(p.size() == 5);
    CHECK_THROWS_AS(parse_h10("(h10 (c 1))"), ParseError);
    CHECK_THROWS_AS(parse_h10("(h10 (c 1) (q 2))"), ParseError);
    CHECK_THROWS_AS(parse_h10("(h10 (c 1) (+ (c 2)))"), ParseError);
}

TEST_CASE("enumerators") {
    CHECK(enumerate_polys(0).empty());
    CHECK(h10_enumerator(0).empty());
    CHECK(L_nat(3) == std::vector<std::uint64_t>{0, 1, 2});
    for (std::uint64_t n = 0; n < 4; ++n) {
        auto small = enumerate_polys(n), big = enumerate_polys(n + 1);
        REQUIRE(small.size() <= big.size());
        CHECK(std::equal(small.begin(), small.end(), big.begin()));
        auto ls = L_list_nat(n), lb = L_list_nat(n + 1);
        CHECK(std::equal(ls.begin(), ls.end(), lb.begin()));
    }
    // sizes follow |L (n+1)| = |L n| + 2 n + 2 |L n|^2
    std::vector<std::size_t> sizes;
    for (std::uint64_t n = 0; n <= 4; ++n) sizes.push_back(enumerate_polys(n).size());
    CHECK(sizes == std::vector<std::size_t>{0, 0, 2, 14, 412});
}

TEST_CASE("enumerator membership without materializing") {
    for (std::uint64_t n = 0; n <= 4; ++n) {
        auto listed = h10_enumerator(n);
        for (const auto& t : listed) CHECK(h10_enumerated_by(t, n));
        for (const auto& t : h10_enumerator(n + 1)) {
            bool in_n = std::any_of(listed.begin(), listed.end(), [&](const H10Triple& u) {
                return u.lhs == t.lhs && u.rhs == t.rhs && u.assignment == t.assignment;
            });
            CHECK(h10_enumerated_by(t, n) == in_n);
        }
    }
}

TEST_CASE("extracted enumerator agrees with the native one") {
    Workbench& wb = stdlib_bench();
    Term enumerate = wb.extract({"h10_enum", {}});
    auto triple_t = SrcType::adt("pair", {SrcType::adt("pair", {SrcType::adt("poly"), SrcType::adt("poly")}),
                                          SrcType::adt("list", {SrcType::adt("nat")})});
    auto list_t = SrcType::adt("list", {triple_t});
    for (std::uint64_t n = 0; n <= 4; ++n) {
        auto r = machine_eval(Term::app(enumerate, wb.registry().encode(SrcType::adt("nat"), values::nat(n))), 2'000'000'000);
        REQUIRE_FALSE(r.exhausted());
        auto v = wb.registry().decode(list_t, *r.normal);
        REQUIRE(v);
        auto native = h10_enumerator(n);
        auto got = *values::as_list(*v);
        REQUIRE(got.size() == native.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            const Value& ps = got[i].args[0];
            CHECK(value_poly(ps.args[0]) == native[i].lhs);
            CHECK(value_poly(ps.args[1]) == native[i].rhs);
        }
    }
}

TEST_CASE("cantor pairing") {
    CHECK(cantor_unpair(0) == std::pair<std::uint64_t, std::uint64_t>{0, 0});
    CHECK(cantor_unpair(1) == std::pair<std::uint64_t, std::uint64_t>{0, 1});
    CHECK(cantor_unpair(2) == std::pair<std::uint64_t, std::uint64_t>{1, 0});
    CHECK(cantor_unpair(3) == std::pair<std::uint64_t, std::uint64_t>{0, 2});
    std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
    for (std::uint64_t k = 0; k < 2000; ++k) {
        auto [x, y] = cantor_unpair(k);
        CHECK(cantor_pair(x, y) == k);
        CHECK(seen.insert({x, y}).second);
    }
}

TEST_CASE("h10 witnesses") {
    auto zero = h10_witness(parse_h10("(h10 (c 0) (c 0))"), 5);
    REQUIRE(zero);
    CHECK(zero->index == 9);
    auto two = h10_witness(parse_h10("(h10 (v 0) (c 2))"), 5);
    REQUIRE(two);
    CHECK(two->assignment == std::vector<std::uint64_t>{2});
    CHECK(two->level == 5);
    CHECK(two->position == 13169);
    CHECK(two->index == 86'783'730);
    H10Triple t{Poly::var(0), Poly::cst(2), {2}};
    CHECK(h10_enumerated_by(t, 5));
    CHECK_FALSE(h10_enumerated_by(t, 4));
    CHECK_FALSE(h10_witness(parse_h10("(h10 (c 0) (c 1))"), 5));
}

TEST_CASE("h10 reduction terms") {
    ExtractionEnv env;
    Term s = h10_reduction(env, parse_h10("(h10 (c 0) (c 0))"));
    CHECK(closed(s));
    auto r = machine_eval(s, 10'000'000);
    REQUIRE_FALSE(r.exhausted());
    CHECK(env.registry().decode(SrcType::adt("nat"), *r.normal) == values::nat(9));
    CHECK(machine_eval(h10_reduction(env, parse_h10("(h10 (c 0) (c 1))")), 100'000).exhausted());
}

TEST_CASE("machine files") {
    TMachine w = machine("write_halt");
    CHECK(w.states == 2);
    CHECK(w.tapes == 1);
    CHECK(w.halts_in(1));
    CHECK_THROWS_AS(parse_tm("(tm (states 1) (symbols 1) (tapes 1) (start 3))"), ParseError);
    CHECK_THROWS_AS(parse_tm("(tm (states 2) (symbols 1) (tapes 1) (start 0) (row 0 (0) 1 (0 N)) (row 0 (0) 0 (0 N)))"),
                    ParseError);
    CHECK_THROWS_AS(parse_tm("(tm (states 2) (symbols 1) (tapes 1) (start 0) (row 0 (0 0) 1 (0 N)))"), ParseError);
    CHECK_THROWS_AS(parse_tm("(tm (states 2) (symbols 1) (tapes 1) (start 0) (row 0 (5) 1 (0 N)))"), ParseError);
    CHECK_THROWS_AS(parse_tm("(tm (states 2) (symbols 1) (tapes 1) (start 0) (row 0 (0) 1 (0 X)))"), ParseError);
}

TEST_CASE("native machine runs") {
    TMachine w = machine("write_halt");
    TMConfig c = w.initial();
    CHECK_FALSE(tm_loop(w, c, 0));
    auto done = tm_loop(w, c, 2);
    REQUIRE(done);
    CHECK(done->state == 1);
    CHECK(done->tapes[0].head == std::optional<std::uint64_t>{1});

    TMachine s = machine("scan");
    auto end = tm_loop(s, s.initial(), 100);
    REQUIRE(end);
    CHECK(end->tapes[0].left.size() == 45);
    CHECK_FALSE(end->tapes[0].head);
    for (std::uint64_t k = 0; k < 60; ++k) {
        auto a = tm_loop(s, s.initial(), k);
        if (a) CHECK(tm_loop(s, s.initial(), k + 1) == a);
    }
    TMachine walker = machine("walker");
    CHECK_FALSE(tm_loop(walker, walker.initial(), 200));
    TMConfig after = walker.initial();
    for (int i = 0; i < 4; ++i) after = tm_step(walker, after);
    CHECK(after.tapes[0].left == std::vector<std::uint64_t>{0, 1, 0, 1});
}

TEST_CASE("configurations as data") {
    TMConfig c{3, {{{1, 2}, std::nullopt, {0}}, {{}, 1, {}}}};
    CHECK(value_config(config_value(c)) == c);
    CHECK_FALSE(value_config(values::nat(2)));
}

TEST_CASE("extracted machine agrees with the native one") {
    for (const char* name : {"write_halt", "walker"}) {
        TMachine m = machine(name);
        SourceProgram p = tm_program(m);
        ExtractionEnv env;
        extract_tm(env, p);
        const Registry& reg = env.registry();
        Term loop = env.at({"tm_loop", {}});
        for (std::uint64_t k = 0; k < 6; ++k) {
            auto r = machine_eval(lcert::apply(loop, {reg.encode(SrcType::adt("config"), config_value(m.initial())),
                                                     reg.encode(SrcType::adt("nat"), values::nat(k))}),
                                  10'000'000);
            REQUIRE_FALSE(r.exhausted());
            auto v = reg.decode(SrcType::adt("option", {SrcType::adt("config")}), *r.normal);
            REQUIRE(v);
            auto native = tm_loop(m, m.initial(), k);
            if (native)
                CHECK(value_config(v->args.at(0)) == native);
            else
                CHECK(v->ctor == 1);
        }
    }
}

TEST_CASE("halting reduction") {
    TMachine w = machine("write_halt");
    SourceProgram p = tm_program(w);
    ExtractionEnv env;
    auto r = machine_eval(tm_halting_reduction(env, p, w.initial()), 1'000'000);
    REQUIRE_FALSE(r.exhausted());
    CHECK(env.registry().decode(SrcType::adt("nat"), *r.normal) == values::nat(1));

    TMachine walker = machine("walker");
    SourceProgram q = tm_program(walker);
    ExtractionEnv env2;
    CHECK(machine_eval(tm_halting_reduction(env2, q, walker.initial()), 1'000'000).exhausted());
}
