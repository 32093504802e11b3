#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "lcert/stack.hpp"

int main(int argc, char** argv) {
    int status = 0;
    lcert::run_with_stack(lcert::big_stack, [&] {
        doctest::Context context(argc, argv);
        status = context.run();
    });
    return status;
}
