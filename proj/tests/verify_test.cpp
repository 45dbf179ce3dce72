#include <gtest/gtest.h>

#include "chromplane/verify.hpp"

namespace chromplane {
namespace {

const SubCheck* find_check(const VerdictReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

TEST(Faults, ParseNames) {
  for (Fault f : {Fault::kNone, Fault::kDropVertex, Fault::kPerturbCoordinate,
                  Fault::kRemoveEdge, Fault::kWrongForcingPair})
    EXPECT_EQ(parse_fault(to_string(f)), f);
  EXPECT_THROW(parse_fault("flip-a-coin"), std::invalid_argument);
}

// Faults that break a construction count fail before any search runs.
TEST(Verify, PerturbedCoordinateFailsAtFirstCount) {
  VerifyOptions o;
  o.fault = Fault::kPerturbCoordinate;
  auto r = verify_theorem(o);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.first_failure.rfind("counts/", 0), 0u) << r.first_failure;
  EXPECT_TRUE(r.derivation.empty());
  EXPECT_TRUE(find_check(r, "G 5-colorings")->skipped);
}

TEST(Verify, DroppedVertexFails) {
  VerifyOptions o;
  o.fault = Fault::kDropVertex;
  auto r = verify_theorem(o);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.first_failure.rfind("counts/G vertices", 0), 0u) << r.first_failure;
}

TEST(Verify, RemovedEdgeFails) {
  VerifyOptions o;
  o.fault = Fault::kRemoveEdge;
  auto r = verify_theorem(o);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.first_failure.rfind("counts/H unit edges", 0), 0u) << r.first_failure;
  const SubCheck* c = find_check(r, "H unit edges");
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->actual, "1003");
}

TEST(VerifyLong, FullPipelinePasses) {
  auto r = verify_theorem();
  for (const auto& c : r.checks)
    EXPECT_TRUE(c.pass) << c.group << "/" << c.name << " expected " << c.expected
                        << " got " << c.actual;
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.first_failure.empty());
  ASSERT_FALSE(r.derivation.empty());
  EXPECT_NE(r.derivation.back().find("chi({1,2}) >= 6"), std::string::npos);
  EXPECT_EQ(find_check(r, "|AB|^2")->actual, "25");
  EXPECT_EQ(find_check(r, "|AB'|^2")->actual, "25");
  EXPECT_EQ(find_check(r, "|BB'|^2")->actual, "1");
  EXPECT_EQ(r.second_coincidence, "[-4, 0, 0, 0]");
}

TEST(VerifyLong, WrongForcingPairFailsAtForcing) {
  VerifyOptions o;
  o.fault = Fault::kWrongForcingPair;
  auto r = verify_theorem(o);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.first_failure.rfind("colorings/A and B share a color", 0), 0u)
      << r.first_failure;
  EXPECT_EQ(find_check(r, "H 5-colorings")->actual, "35");
}

}  // namespace
}  // namespace chromplane
