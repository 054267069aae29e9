#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "qrde/special.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"

namespace qrde {
namespace {

TEST(LogBeta, ClosedFormValues) {
  EXPECT_EQ(log_beta(1.0, 1.0), 0.0);
  EXPECT_NEAR(log_beta(2.0, 2.0), -1.791759469228055, 1e-15);
  EXPECT_NEAR(log_beta(0.5, 0.5), 1.1447298858494002, 1e-15);
  EXPECT_NEAR(log_beta(3.0, 4.0), std::log(1.0 / 60.0), 1e-15);
}

// ln B(a, b) at 40 significant digits (mpmath loggamma).
struct LogBetaRow {
  double a;
  double b;
  double expected;
};
const std::vector<LogBetaRow> kLogBetaTable = {
    {0.001, 0.001, 7.6009008170083473785},
    {0.001, 0.1, 6.9175522548379124144},
    {0.001, 0.5, 6.9091399308095219597},
    {0.001, 1, 6.9077552789821370312},
    {0.001, 2.5, 6.9064754836036883835},
    {0.001, 9.9, 6.9049376519276072871},
    {0.001, 10, 6.9049270802134606422},
    {0.001, 37.3, 6.9035733431890909266},
    {0.001, 1000.0, 6.900271629687954933},
    {0.001, 100000.0, 6.8956659649138917414},
    {0.001, 1000000.0, 6.8933633753253894704},
    {0.1, 0.1, 2.9813614810376273379},
    {0.1, 0.5, 2.426843736589671098},
    {0.1, 1, 2.3025850929940456285},
    {0.1, 2.5, 2.1799836586581452874},
    {0.1, 9.9, 2.0280650758726151625},
    {0.1, 10, 2.0270133931824375421},
    {0.1, 37.3, 1.892024052531735691},
    {0.1, 1000.0, 1.5619821298353163966},
    {0.1, 100000.0, 1.1014205552377829954},
    {0.1, 1000000.0, 0.8711616409377844149},
    {0.5, 0.5, 1.1447298858494001741},
    {0.5, 1, 0.69314718055994530942},
    {0.5, 2.5, 0.16390063283767393729},
    {0.5, 9.9, -0.56128152447569888074},
    {0.5, 10, -0.56643279639759393488},
    {0.5, 37.3, -1.2337806143069253327},
    {0.5, 1000.0, -2.8813876965715767707},
    {0.5, 100000.0, -5.1840965395604141282},
    {0.5, 1000000.0, -6.335390211057436965},
    {1, 1, 0.0},
    {1, 2.5, -0.91629073187415506518},
    {1, 9.9, -2.2925347571405442787},
    {1, 10, -2.302585092994045684},
    {1, 37.3, -3.6189933266497697811},
    {1, 1000.0, -6.9077552789821370521},
    {1, 100000.0, -11.51292546497022842},
    {1, 1000000.0, -13.815510557964274104},
    {2.5, 2.5, -2.6086880894021073004},
    {2.5, 9.9, -5.6243827584752566306},
    {2.5, 10, -5.6478371613820569308},
    {2.5, 37.3, -8.8121920360134758733},
    {2.5, 1000.0, -16.986579078153018742},
    {2.5, 100000.0, -28.497649541827653062},
    {2.5, 1000000.0, -34.254095399436516102},
    {9.9, 9.9, -13.59244851900267119},
    {9.9, 10, -13.664081196934862205},
    {9.9, 37.3, -24.343591885295275014},
    {9.9, 1000.0, -55.853514962038494927},
    {9.9, 100000.0, -101.40122273518213268},
    {9.9, 1000000.0, -124.1964186744884005},
    {10, 10, -13.736229227036554814},
    {10, 37.3, -24.503427622242682919},
    {10, 1000.0, -56.320583480930653988},
    {10, 100000.0, -102.32787715537148955},
    {10, 1000000.0, -125.3533230994187721},
    {37.3, 37.3, -52.249413103518896166},
    {37.3, 1000.0, -161.52798487826215371},
    {37.3, 100000.0, -332.63876192507173647},
    {37.3, 1000000.0, -418.51909376073977435},
    {1000.0, 1000.0, -1388.4826016359022503},
    {1000.0, 100000.0, -5612.6834827573461668},
    {1000.0, 1000000.0, -7910.7894684214598004},
    {100000.0, 100000.0, -138633.92706134806235},
    {100000.0, 1000000.0, -335104.49695243038364},
    {1000000.0, 1000000.0, -1386300.0033629211163},
};

TEST(LogBeta, RelativeErrorAcrossShapeRange) {
  for (const auto& row : kLogBetaTable) {
    for (const auto& [a, b] : {std::pair{row.a, row.b}, std::pair{row.b, row.a}}) {
      const double got = log_beta(a, b);
      const double tol = 1e-13 * std::max(std::abs(row.expected), 1e-300);
      EXPECT_NEAR(got, row.expected, row.expected == 0.0 ? 0.0 : tol) << "a=" << a << " b=" << b;
    }
  }
}

TEST(LogBeta, RejectsInvalidArguments) {
  EXPECT_THROW(log_beta(0.0, 1.0), DomainError);
  EXPECT_THROW(log_beta(1.0, -2.0), DomainError);
  EXPECT_THROW(log_beta(NAN, 1.0), DomainError);
  EXPECT_THROW(log_beta(1.0, INFINITY), DomainError);
}

TEST(RegIncBeta, Examples) {
  EXPECT_NEAR(reg_inc_beta(0.3, 1.0, 1.0), 0.3, 1e-15);
  EXPECT_NEAR(reg_inc_beta(0.5, 3.7, 3.7), 0.5, 1e-15);
  EXPECT_NEAR(reg_inc_beta(0.25, 2.0, 2.0), 0.15625, 1e-15);
}

TEST(RegIncBeta, BoundariesAreExact) {
  for (double a : {1e-3, 0.5, 1.0, 7.5, 1e4, 1e7}) {
    for (double b : {1e-3, 0.5, 1.0, 7.5, 1e4, 1e7}) {
      EXPECT_EQ(reg_inc_beta(0.0, a, b), 0.0);
      EXPECT_EQ(reg_inc_beta(1.0, a, b), 1.0);
    }
  }
}

TEST(RegIncBeta, RejectsInvalidArguments) {
  EXPECT_THROW(reg_inc_beta(-0.1, 1.0, 1.0), DomainError);
  EXPECT_THROW(reg_inc_beta(1.0000001, 1.0, 1.0), DomainError);
  EXPECT_THROW(reg_inc_beta(NAN, 1.0, 1.0), DomainError);
  EXPECT_THROW(reg_inc_beta(0.5, 0.0, 1.0), DomainError);
  EXPECT_THROW(BetaParams(1.0, -1.0), DomainError);
  EXPECT_THROW(BetaParams(INFINITY, 1.0), DomainError);
}

TEST(RegIncBeta, MatchesIntegerShapePolynomial) {
  for (int a = 1; a <= 12; ++a) {
    for (int b = 1; b <= 12; ++b) {
      for (int i = 1; i <= 99; ++i) {
        const double t = i / 100.0;
        const auto expected = static_cast<double>(testing::beta_cdf_integer(t, a, b));
        ASSERT_NEAR(reg_inc_beta(t, a, b), expected, 1e-12) << a << ' ' << b << ' ' << t;
      }
    }
  }
}

TEST(RegIncBeta, MatchesQuadratureForArbitraryShapes) {
  testing::Rng rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const double a = rng.uniform(1.0, 40.0);
    const double b = rng.uniform(1.0, 40.0);
    const double t = rng.uniform(0.001, 0.999);
    const auto expected = static_cast<double>(testing::beta_mass(0.0L, t, a, b));
    ASSERT_NEAR(reg_inc_beta(t, a, b), expected, 1e-10) << a << ' ' << b << ' ' << t;
  }
}

TEST(RegIncBeta, ReflectionIdentity) {
  testing::Rng rng(11);
  for (int trial = 0; trial < 10000; ++trial) {
    const double a = rng.uniform(0.05, 50.0);
    const double b = rng.uniform(0.05, 50.0);
    const double t = rng.uniform();
    const double residual = reg_inc_beta(t, a, b) + reg_inc_beta(1.0 - t, b, a) - 1.0;
    ASSERT_LE(std::abs(residual), 1e-14) << a << ' ' << b << ' ' << t;
  }
}

TEST(RegIncBeta, MonotoneInT) {
  for (double a : {0.01, 0.3, 1.0, 2.5, 30.0, 500.0, 3e5}) {
    for (double b : {0.01, 0.3, 1.0, 2.5, 30.0, 500.0, 3e5}) {
      double prev = 0.0;
      for (int i = 0; i <= 2000; ++i) {
        const double value = reg_inc_beta(i / 2000.0, a, b);
        ASSERT_LE(prev, value) << a << ' ' << b << ' ' << i;
        prev = value;
      }
    }
  }
}

TEST(RegIncBeta, SmallArgumentsUseTheSeries) {
  // I_t(a, 1) = t^a exactly.
  for (double a : {0.001, 0.5, 3.0, 40.0}) {
    for (double t : {1e-12, 1e-6, 0.01, 0.2}) {
      EXPECT_NEAR(reg_inc_beta(t, a, 1.0), std::pow(t, a), 1e-15) << a << ' ' << t;
    }
  }
}

// Large shapes as produced by HD weights for big n. Reference values from
// 40-digit quadrature of the Beta density.
TEST(RegIncBeta, LargeShapesNearTheMean) {
  EXPECT_NEAR(reg_inc_beta(0.2, 1e7, 4e7), 0.50002820947934736565, 1e-12);
  EXPECT_NEAR(reg_inc_beta(0.5, 5e5, 5e5), 0.5, 1e-12);
  EXPECT_NEAR(reg_inc_beta(0.5005, 5e5, 5e5), 0.84134474606854654571, 1e-12);
  EXPECT_NEAR(reg_inc_beta(0.2995, 3e5, 7e5), 0.13760452174372954261, 1e-12);
  EXPECT_NEAR(reg_inc_beta(0.01, 5e3, 5e5 + 0.5), 0.76208091051837851929, 1e-12);
}

}  // namespace
}  // namespace qrde
