// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "hybridfb/parallel.hpp"

int main(int argc, char** argv) {
    hybridfb::pin_blas_single_thread();
    return doctest::Context(argc, argv).run();
}
