#include "nlbox/box.hpp"

#include <gtest/gtest.h>

#include <vector>

namespace nlbox {
namespace {

TEST(BoxSession, CreateHasUnsetBoxes) {
  const BoxSession s = create_session(7, 3);
  ASSERT_EQ(s.size(), 3U);
  for (BoxId id = 0; id < 3; ++id) {
    const auto& b = s.box(id);
    EXPECT_FALSE(b.alice_input || b.bob_input || b.alice_output ||
                 b.bob_output || b.first_mover);
  }
}

TEST(BoxSession, ZeroCountRejected) {
  EXPECT_THROW(create_session(7, 0), std::invalid_argument);
}

TEST(BoxSession, SameSeedSameBehaviour) {
  BoxSession s1 = create_session(7, 3);
  BoxSession s2 = create_session(7, 3);
  for (BoxId id = 0; id < 3; ++id) {
    EXPECT_EQ(s1.enter_input(id, Party::Alice, 1),
              s2.enter_input(id, Party::Alice, 1));
    EXPECT_EQ(s1.enter_input(id, Party::Bob, id % 2),
              s2.enter_input(id, Party::Bob, id % 2));
  }
}

TEST(BoxSession, CorrelationHoldsForEveryInputPair) {
  BoxSession s(11, 4000);
  for (BoxId id = 0; id < 4000; ++id) {
    const Bit x = id & 1U;
    const Bit y = (id >> 1) & 1U;
    Bit a, b;
    if ((id >> 2) & 1U) {
      a = s.enter_input(id, Party::Alice, x);
      b = s.enter_input(id, Party::Bob, y);
    } else {
      b = s.enter_input(id, Party::Bob, y);
      a = s.enter_input(id, Party::Alice, x);
    }
    ASSERT_EQ(a ^ b, x & y) << "box " << id;
  }
}

TEST(BoxSession, ZeroZeroAndOneOne) {
  BoxSession s(3, 2);
  EXPECT_EQ(s.enter_input(0, Party::Alice, 0) ^ s.enter_input(0, Party::Bob, 0), 0);
  EXPECT_EQ(s.enter_input(1, Party::Alice, 1) ^ s.enter_input(1, Party::Bob, 1), 1);
}

TEST(BoxSession, OutputIsImmediate) {
  BoxSession s(5, 1);
  s.enter_input(0, Party::Bob, 1);
  EXPECT_TRUE(s.box(0).bob_output.has_value());
  EXPECT_FALSE(s.box(0).alice_input.has_value());
  EXPECT_EQ(*s.box(0).first_mover, Party::Bob);
}

TEST(BoxSession, OutputsNeverChange) {
  BoxSession s(5, 1);
  const Bit a = s.enter_input(0, Party::Alice, 1);
  s.enter_input(0, Party::Bob, 1);
  EXPECT_EQ(*s.box(0).alice_output, a);
}

TEST(BoxSession, DoubleInputIsViolation) {
  BoxSession s(5, 1);
  s.enter_input(0, Party::Alice, 0);
  EXPECT_THROW(s.enter_input(0, Party::Alice, 1), ProtocolViolation);
}

TEST(BoxSession, UnknownIdAndBadInput) {
  BoxSession s(5, 2);
  EXPECT_THROW(s.enter_input(2, Party::Alice, 0), std::invalid_argument);
  EXPECT_THROW(s.is_used(9, Party::Bob), std::invalid_argument);
  EXPECT_THROW(s.enter_input(0, Party::Alice, 2), std::invalid_argument);
}

TEST(BoxSession, IsUsedTracksEachSide) {
  BoxSession s(5, 1);
  EXPECT_FALSE(s.is_used(0, Party::Alice));
  EXPECT_FALSE(s.is_used(0, Party::Bob));
  s.enter_input(0, Party::Alice, 1);
  EXPECT_TRUE(s.is_used(0, Party::Alice));
  EXPECT_FALSE(s.is_used(0, Party::Bob));
}

TEST(BoxSession, FirstMoverOutputIgnoresRemote) {
  // Same seed, different later remote behaviour: first output identical.
  for (int remote = 0; remote < 3; ++remote) {
    BoxSession s(99, 500);
    std::vector<Bit> outs;
    for (BoxId id = 0; id < 500; ++id) {
      outs.push_back(s.enter_input(id, Party::Alice, 1));
      if (remote < 2) s.enter_input(id, Party::Bob, static_cast<Bit>(remote));
    }
    BoxSession ref(99, 500);
    for (BoxId id = 0; id < 500; ++id) {
      ASSERT_EQ(ref.enter_input(id, Party::Alice, 1), outs[id]);
    }
  }
}

TEST(BoxSession, MarginalUniformAtOneOne) {
  constexpr std::size_t kBoxes = 100000;
  BoxSession s(2024, kBoxes);
  std::size_t ones = 0;
  for (BoxId id = 0; id < kBoxes; ++id) {
    ones += s.enter_input(id, Party::Alice, 1);
    s.enter_input(id, Party::Bob, 1);
  }
  EXPECT_NEAR(double(ones) / kBoxes, 0.5, 0.005);
}

TEST(BoxSession, DistinctBoxesLookIndependent) {
  // neighbouring boxes should agree about half the time
  constexpr std::size_t kBoxes = 100000;
  BoxSession s(77, kBoxes);
  Bit prev = s.enter_input(0, Party::Alice, 0);
  std::size_t agree = 0;
  for (BoxId id = 1; id < kBoxes; ++id) {
    const Bit cur = s.enter_input(id, Party::Alice, 0);
    agree += cur == prev;
    prev = cur;
  }
  EXPECT_NEAR(double(agree) / (kBoxes - 1), 0.5, 0.005);
}

TEST(BoxSession, AllocateHandsOutDisjointRanges) {
  BoxSession s(1, 10);
  EXPECT_EQ(s.allocate(4), 0U);
  EXPECT_EQ(s.allocate(5), 4U);
  EXPECT_EQ(s.unallocated(), 1U);
  EXPECT_THROW(s.allocate(2), std::invalid_argument);
}

}  // namespace
}  // namespace nlbox
