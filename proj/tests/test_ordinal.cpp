#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "mucalc/ordinal.hpp"

using mucalc::Ordinal;
using mucalc::OrdinalKind;

namespace {

Ordinal ord(const char* s) { return mucalc::parse_ordinal(s); }

}  // namespace

TEST(Ordinal, ParsesFiniteOmegaAndPolynomials) {
  EXPECT_EQ(ord("3"), Ordinal(3));
  EXPECT_EQ(ord("w"), Ordinal::omega());
  EXPECT_EQ(ord("w^2*2+w+4"), Ordinal::from_terms({{2, 2}, {1, 1}, {0, 4}}));
  EXPECT_EQ(ord("0"), Ordinal());
  EXPECT_EQ(ord(" w*3 + 1 "), Ordinal::from_terms({{1, 3}, {0, 1}}));
}

TEST(Ordinal, PrintsCanonically) {
  EXPECT_EQ(Ordinal(3).to_string(), "3");
  EXPECT_EQ(Ordinal::omega().to_string(), "w");
  EXPECT_EQ(Ordinal::from_terms({{2, 2}, {1, 1}, {0, 4}}).to_string(), "w^2*2+w+4");
  EXPECT_EQ(Ordinal().to_string(), "0");
}

TEST(Ordinal, RejectsMalformedText) {
  for (const char* bad : {"", "w^", "w*0", "3+w", "w+w", "w^2+w^3", "x", "2 3", "w^2*", "+1", "0+1"})
    EXPECT_THROW(ord(bad), mucalc::ParseError) << bad;
}

TEST(Ordinal, CompareFollowsCantorNormalForm) {
  EXPECT_LT(Ordinal(5), Ordinal::omega());
  EXPECT_EQ(ord("w*2"), ord("w*2"));
  EXPECT_GT(ord("w^2"), ord("w*9+7"));
  EXPECT_LT(ord("w"), ord("w+1"));
  EXPECT_LT(ord("w^3"), ord("w^3+w"));
}

TEST(Ordinal, Classify) {
  EXPECT_EQ(Ordinal().kind(), OrdinalKind::zero);
  EXPECT_EQ(ord("w+1").kind(), OrdinalKind::successor);
  EXPECT_EQ(ord("w^2").kind(), OrdinalKind::limit);
  EXPECT_EQ(Ordinal(4).kind(), OrdinalKind::successor);
}

TEST(Ordinal, Predecessor) {
  EXPECT_EQ(Ordinal(1).predecessor(), Ordinal());
  EXPECT_EQ(ord("w+3").predecessor(), ord("w+2"));
  EXPECT_EQ(ord("w+1").predecessor(), ord("w"));
  EXPECT_THROW(Ordinal::omega().predecessor(), mucalc::InvalidArgument);
  EXPECT_THROW(Ordinal().predecessor(), mucalc::InvalidArgument);
}

TEST(Ordinal, ToFinite) {
  EXPECT_EQ(Ordinal(7).to_finite(), 7u);
  EXPECT_EQ(Ordinal::omega().to_finite(), std::nullopt);
  EXPECT_EQ(Ordinal().to_finite(), 0u);
}

TEST(Ordinal, FromTermsValidates) {
  EXPECT_THROW(Ordinal::from_terms({{1, 0}}), mucalc::InvalidArgument);
  EXPECT_THROW(Ordinal::from_terms({{1, 1}, {2, 1}}), mucalc::InvalidArgument);
}

// Random ordinals for the order properties.
class OrdinalProperties : public ::testing::Test {
 protected:
  Ordinal random_ordinal() {
    std::vector<Ordinal::Term> terms;
    int e = static_cast<int>(rng() % 4);
    while (e >= 0) {
      if (rng() % 2) terms.push_back({static_cast<std::uint32_t>(e), 1 + rng() % 3});
      --e;
    }
    return Ordinal::from_terms(terms);
  }
  std::mt19937_64 rng{1234};
};

TEST_F(OrdinalProperties, StrictTotalOrderAndRoundTrip) {
  for (int i = 0; i < 500; ++i) {
    const Ordinal a = random_ordinal(), b = random_ordinal(), c = random_ordinal();
    EXPECT_EQ(mucalc::parse_ordinal(a.to_string()), a);
    const int lt = (a < b) + (a == b) + (a > b);
    EXPECT_EQ(lt, 1);
    if (a < b && b < c) {
      EXPECT_LT(a, c);
    }
    EXPECT_LT(a, a.successor());
    if (a.kind() == OrdinalKind::successor) {
      EXPECT_LT(a.predecessor(), a);
      EXPECT_EQ(a.predecessor().successor(), a);
    }
  }
}

TEST_F(OrdinalProperties, DescendingChainsTerminate) {
  // Repeatedly step below the current ordinal: predecessor at successors,
  // an arbitrary smaller CNF at limits. Well-foundedness bounds the loop.
  for (int trial = 0; trial < 50; ++trial) {
    Ordinal cur = random_ordinal();
    int steps = 0;
    while (!cur.is_zero()) {
      if (cur.kind() == OrdinalKind::successor) {
        cur = cur.predecessor();
      } else {
        auto terms = cur.terms();
        const auto last = terms.back();
        terms.pop_back();
        if (last.coefficient > 1) terms.push_back({last.exponent, last.coefficient - 1});
        // Below w^e: any w^(e-1)*k; keep chains short.
        terms.push_back({last.exponent - 1, 1 + static_cast<std::uint64_t>(rng() % 3)});
        const Ordinal next = Ordinal::from_terms(terms);
        ASSERT_LT(next, cur);
        cur = next;
      }
      ASSERT_LT(++steps, 100000);
    }
  }
}
