#include <gtest/gtest.h>

#include "mzak/util/allocator.hpp"

int main(int argc, char** argv) {
  mzak::tune_allocator();
  ::testing::InitGoogleTest(&argc, argv);
  return RUN_ALL_TESTS();
}
