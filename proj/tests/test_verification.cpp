#include <gtest/gtest.h>

#include "chemomech/verification.hpp"

using namespace chemomech;

TEST(Verification, EveryCheckPasses) {
  for (const CheckResult& r : run_checks(1)) {
    EXPECT_TRUE(r.passed) << r.name << ": " << r.value << " > " << r.tolerance << " (" << r.detail << ")";
  }
}

TEST(Verification, SeedIndependent) {
  EXPECT_TRUE(check_kkt(42, 1000).passed);
  EXPECT_TRUE(check_particle_stress(42, 20).passed);
  EXPECT_TRUE(check_sei_stress(StrainMeasure::gsv, 42, 20).passed);
}
