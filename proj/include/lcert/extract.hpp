#ifndef LCERT_EXTRACT_HPP
#define LCERT_EXTRACT_HPP

#include "lcert/scott.hpp"
#include "lcert/source.hpp"
#include "lcert/term.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lcert {

// Dictionary key: a definition or constructor (`adt.ctor`) at concrete type
// arguments. Printed as `name` or `name[nat bool]`.
struct ExtractKey {
    std::string name;
    std::vector<SrcType> type_args;

    std::string str() const;
};

// Lifting environment for de Bruijn translation; identity past the stored
// prefix.
class IndexEnv {
  public:
    IndexEnv() = default;
    std::uint64_t operator()(std::uint64_t n) const { return n < map_.size() ? map_[n] : n + offset_; }
    // 0 -> 0, n+1 -> E(n)+1
    IndexEnv lift() const;

  private:
    std::vector<std::uint64_t> map_;
    std::uint64_t offset_ = 0;
};

// Extracted terms keyed by definition and instance, plus the encodings.
class ExtractionEnv {
  public:
    explicit ExtractionEnv(Registry registry = {}) : registry_(std::move(registry)) {}

    Registry& registry() { return registry_; }
    const Registry& registry() const { return registry_; }

    bool contains(const ExtractKey& key) const { return entries_.count(key.str()) != 0; }
    std::optional<Term> find(const ExtractKey& key) const;
    const Term& at(const ExtractKey& key) const;
    // Stores a closed term; an existing entry is left untouched.
    void store(const ExtractKey& key, const Term& t);

    std::size_t size() const { return order_.size(); }
    // One `key<TAB>term` line per entry, in extraction order.
    std::string dump() const;

  private:
    Registry registry_;
    std::map<std::string, Term> entries_;
    std::vector<std::string> order_;
};

// Declares every datatype of the program in the environment's registry.
void declare_datatypes(ExtractionEnv& env, const SourceProgram& program);

// Translation of a checked, monomorphic expression. Throws ExtractError on
// missing dictionary entries, type parameters left in type arguments, and
// source lambdas passed as arguments.
Term extract_expr(const ExtractionEnv& env, const IndexEnv& ienv, const SrcExpr& e);

// Stores the constructor term of `adt.ctor` at the given instance.
Term extract_ctor(ExtractionEnv& env, const std::string& adt, std::size_t ctor, const std::vector<SrcType>& type_args);

// Monomorphizes and extracts one definition. Its dependencies must already be
// in the dictionary. Returns the stored term when present.
Term extract_def(ExtractionEnv& env, const SourceProgram& program, const std::string& name,
                 const std::vector<SrcType>& type_args);

// Extracts the requested instances together with everything they reference,
// dependencies first, registering the datatype instances nullary constructors
// need.
void extract_program(ExtractionEnv& env, const SourceProgram& program, const std::vector<ExtractKey>& requests);

} // namespace lcert

#endif
