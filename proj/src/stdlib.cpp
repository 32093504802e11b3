#include "lcert/stdlib.hpp"

#include "stdlib_source.hpp"

namespace lcert {

std::string_view stdlib_source() { return embedded::stdlib; }

const SourceProgram& stdlib_program() {
    static const SourceProgram program = [] {
        SourceProgram p = parse_program(stdlib_source());
        typecheck(p);
        return p;
    }();
    return program;
}

} // namespace lcert
