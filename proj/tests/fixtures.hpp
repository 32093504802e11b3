#ifndef LCERT_TESTS_FIXTURES_HPP
#define LCERT_TESTS_FIXTURES_HPP

#include "support.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace lcert::testing {

struct Fixture {
    std::string name;
    std::string at;           // type arguments
    std::uint64_t max_nat = 0; // naturals drawn from 0..max_nat-1 when set
    std::size_t max_list = 0;
};

// Every standard definition, instantiated where polymorphic. The bounded
// ones grow too fast in their arguments for the default sampler: fold_right
// nests cantor_pair and mul from its pool over the whole list.
inline std::vector<Fixture> stdlib_fixtures() {
    return {
        {"negb", ""},          {"andb", ""},          {"orb", ""},
        {"succ", ""},          {"pred", ""},          {"add", ""},
        {"mul", ""},           {"eqb_coq", ""},       {"id_bool", ""},
        {"is_zero", ""},       {"eqb", ""},           {"leb", ""},
        {"append", "nat"},     {"map", "nat nat"},    {"map", "nat bool"},
        {"filter", "nat"},     {"fold_right", "nat nat", 4, 3}, {"length", "bool"},
        {"nth", "nat"},        {"nth_error", "bool"}, {"list_prod", "nat bool"},
        {"is_some", "nat"},    {"cantor_next", ""},   {"cantor_unpair", ""},
        {"triangle", "", 40},  {"cantor_pair", "", 30}, {"subst", ""},
        {"eva", "", 5},        {"poly_eval", "", 4},     {"poly_eqb", ""},
        {"poly_add2", ""},     {"poly_mul2", ""},     {"cons_nat2", ""},
        {"L_nat", ""},         {"L_poly", "", 4},     {"L_list_nat", "", 5},
        {"h10_solves", ""},    {"h10_enum", "", 4},   {"h10_at", "", 15},
        {"poly_pair_eqb", ""}, {"h10_test", "", 15},
    };
}

struct Mutant {
    std::string name;     // definition in the mutant file
    std::string original; // reference it must disagree with
    std::string at;
};

inline std::vector<Mutant> curated_mutants() {
    return {
        {"negb__then", "negb", ""},         {"andb__else", "andb", ""},
        {"orb__else", "orb", ""},           {"pred__keep", "pred", ""},
        {"add__base", "add", ""},           {"add__step", "add", ""},
        {"mul__base", "mul", ""},           {"eqb__same", "eqb", ""},
        {"leb__base", "leb", ""},           {"append__drop", "append", "nat"},
        {"map__tail", "map", "nat nat"},    {"filter__negate", "filter", "nat"},
        {"length__base", "length", "nat"},  {"subst__depth", "subst", ""},
        {"cantor_next__swap", "cantor_next", ""}, {"poly_eval__plus", "poly_eval", ""},
    };
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

inline SourceProgram stdlib_with_mutants() {
    SourceProgram p = stdlib_program();
    parse_into(p, read_file(std::string(LCERT_TEST_DATA_DIR) + "/mutants.lsrc"));
    typecheck(p);
    return p;
}

inline SamplerConfig fixture_sampler(const Fixture& f, std::uint64_t seed, std::size_t samples) {
    SamplerConfig sc;
    sc.seed = seed;
    sc.samples = samples;
    for (std::uint64_t n = 0; n < f.max_nat; ++n) sc.nats.push_back(n);
    if (f.max_list) sc.max_list = f.max_list;
    return sc;
}

// check_computes of the extracted fixture against its own definition
inline CheckReport check_fixture(Workbench& wb, const Fixture& f, std::uint64_t seed, std::size_t samples) {
    ExtractKey key{f.name, parse_type_args(wb.program(), f.at)};
    Candidate c = wb.candidate(key);
    TyDesc ty = TyDesc::of(wb.type_of(key));
    Sampler sampler(wb.registry(), fixture_sampler(f, seed, samples));
    return check_computes(wb.registry(), wb.interp(), ty, c, sampler, wb.pool_for(key), {});
}

// check_computes of the mutant's term against the original's reference
inline CheckReport check_mutant(Workbench& wb, const Mutant& m, std::uint64_t seed, std::size_t samples) {
    auto args = parse_type_args(wb.program(), m.at);
    ExtractKey key{m.name, args};
    Candidate c = wb.candidate(key);
    c.reference = wb.interp().definition(m.original);
    TyDesc ty = TyDesc::of(wb.type_of(key));
    SamplerConfig sc;
    sc.seed = seed;
    sc.samples = samples;
    Sampler sampler(wb.registry(), sc);
    return check_computes(wb.registry(), wb.interp(), ty, c, sampler, wb.pool_for({m.original, args}), {});
}

} // namespace lcert::testing

#endif
