#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "lpinn/allocator.hpp"

int main(int argc, char** argv) {
  lpinn::keep_freed_memory();
  doctest::Context context(argc, argv);
  return context.run();
}
