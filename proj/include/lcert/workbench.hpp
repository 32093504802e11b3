#ifndef LCERT_WORKBENCH_HPP
#define LCERT_WORKBENCH_HPP

#include "lcert/extract.hpp"
#include "lcert/interp.hpp"
#include "lcert/source.hpp"
#include "lcert/verify.hpp"

#include <memory>
#include <string>
#include <vector>

namespace lcert {

// A checked program together with its extraction dictionary and reference
// interpreter: the common setup of every check, benchmark and case study.
class Workbench {
  public:
    explicit Workbench(SourceProgram program);
    Workbench(const Workbench&) = delete;
    Workbench& operator=(const Workbench&) = delete;

    const SourceProgram& program() const { return *program_; }
    ExtractionEnv& env() { return env_; }
    Registry& registry() { return env_.registry(); }
    Interpreter& interp() { return *interp_; }

    // Type of the definition at the given type arguments.
    SrcType type_of(const ExtractKey& key) const;
    // Extracts the definition and registers every datatype instance its
    // type mentions.
    Term extract(const ExtractKey& key);
    Candidate candidate(const ExtractKey& key, std::shared_ptr<const TimeBound> bound = nullptr);

    // Monomorphic definitions of the program whose type is exactly one of
    // the functional argument types of `key`, extracted and ready to pass.
    std::vector<PoolEntry> pool_for(const ExtractKey& key);

  private:
    void register_types(const SrcType& t);

    std::unique_ptr<SourceProgram> program_;
    ExtractionEnv env_;
    std::unique_ptr<Interpreter> interp_;
};

// "nat bool" -> {nat, bool}, resolved against the program's datatypes.
std::vector<SrcType> parse_type_args(const SourceProgram& program, const std::string& text);

} // namespace lcert

#endif
