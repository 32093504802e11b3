#ifndef LCERT_STDLIB_HPP
#define LCERT_STDLIB_HPP

#include "lcert/source.hpp"

#include <string_view>

namespace lcert {

// Source text of the bundled standard library.
std::string_view stdlib_source();

// Parsed and checked once, on first use.
const SourceProgram& stdlib_program();

} // namespace lcert

#endif
