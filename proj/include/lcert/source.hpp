#ifndef LCERT_SOURCE_HPP
#define LCERT_SOURCE_HPP

#include "lcert/sexpr.hpp"
#include "lcert/types.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lcert {

// Source expression with de Bruijn variables. Pattern variables of a match
// branch are bound like nested binders: the last field is index 0.
struct SrcExpr {
    enum class Kind { var, lam, app, ctor, match, fix, cref };

    Kind kind = Kind::var;
    std::uint64_t index = 0;          // var: de Bruijn index; fix: decreasing argument position
    SrcType type;                     // lam: parameter type; fix: type of the recursive function
    std::string name;                 // ctor/match: datatype; cref: definition
    std::size_t ctor = 0;             // ctor: constructor index
    std::vector<SrcType> type_args;   // ctor, cref
    std::vector<SrcExpr> kids;        // lam/fix: {body}; app: {fn, arg}; match: {discriminee, branches...}
    std::vector<std::size_t> arities; // match: fields bound by each branch
    std::string label;                // surface name, for diagnostics
    SexprPos pos;

    static SrcExpr var(std::uint64_t i);
    static SrcExpr lam(SrcType param, SrcExpr body);
    static SrcExpr app(SrcExpr fn, SrcExpr arg);
    static SrcExpr ctor_ref(std::string adt, std::size_t index, std::vector<SrcType> type_args = {});
    static SrcExpr const_ref(std::string def, std::vector<SrcType> type_args = {});
    static SrcExpr match(SrcExpr discriminee, std::string adt, std::vector<std::pair<std::size_t, SrcExpr>> branches);
    static SrcExpr fix(std::uint64_t decreasing, SrcType type, SrcExpr body);

    std::string where() const;
};

struct Def {
    std::string name;
    std::vector<std::string> params;
    SrcType type;
    SrcExpr body;
    SexprPos pos;
};

struct SourceProgram {
    std::vector<AdtDef> adts;
    std::vector<Def> defs;

    const Def* find_def(const std::string& name) const;
    std::size_t def_position(const std::string& name) const;
    const AdtDef* find_adt(const std::string& name) const;

    // Appends every datatype and definition of `other`; names must stay unique.
    void merge(const SourceProgram& other);
};

// Surface grammar (one form per top-level item):
//   (data NAME ('a ...)? (CTOR TYPE*)*)
//   (def NAME (PARAM*) TYPE EXPR)
// with EXPR as documented in the README. Throws ParseError or TypeError.
SourceProgram parse_program(std::string_view text);
// Parses and appends to an existing program, whose datatypes and
// definitions are in scope for name resolution.
void parse_into(SourceProgram& program, std::string_view text);

SrcType parse_type(const SourceProgram& program, const Sexpr& s, const std::vector<std::string>& params);

// Type of `e` under `ctx` (innermost binder last) inside a definition with
// the given type parameters. Throws TypeError.
SrcType infer_type(const SourceProgram& program, const std::vector<SrcType>& ctx, const SrcExpr& e,
                   const std::vector<std::string>& params, std::size_t visible_defs);

// Checks every datatype and definition: simple types, admissible
// definition types, references to earlier definitions only, full type
// instantiation, and guardedness of every fix.
void typecheck(const SourceProgram& program);
void typecheck_def(const SourceProgram& program, const Def& def);

// Every recursive call passes, at the decreasing position, a pattern variable
// obtained by matching the decreasing formal (transitively). Throws GuardError.
void guardedness_check(const Def& def);

// Substitutes the definition's type parameters. Throws TypeError on arity
// mismatch.
Def monomorphize(const Def& def, const std::vector<SrcType>& type_args);

} // namespace lcert

#endif
