#ifndef LCERT_STACK_HPP
#define LCERT_STACK_HPP

#include <cstddef>
#include <functional>

namespace lcert {

// Runs f on a fresh thread with the given stack size and waits for it.
// Encodings of large naturals are deep chains, and encoding, decoding and
// destroying them recurse along the chain. Exceptions are rethrown here.
void run_with_stack(std::size_t bytes, const std::function<void()>& f);

inline constexpr std::size_t big_stack = std::size_t{1} << 30;

} // namespace lcert

#endif
