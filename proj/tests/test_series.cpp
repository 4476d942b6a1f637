#include <cmath>

#include "sos/series.hpp"
#include "test_support.hpp"

using namespace sos;

namespace {

Series sample() {
    Series s(6);
    s.add(2, -1, Rational(-1));
    s.add(3, -2, Rational(-2));
    s.add(4, 3, Rational(5, 2));
    s.add_half(9, 0, Rational(1, 3));
    s.add_linear_u(Rational(-1));
    return s;
}

}  // namespace

TEST(Series, TruncatesAboveOrder) {
    Series s(3);
    s.add(4, 0, Rational(1));
    s.add(3, 1, Rational(2));
    EXPECT_EQ(s.coefficient(4, 0), 0);
    EXPECT_EQ(s.coefficient(3, 1), 2);
    EXPECT_EQ(s.t_coefficient(3), 2);
}

TEST(Series, DumpParseRoundTrip) {
    Series s = sample();
    EXPECT_EQ(Series::parse(s.dump()), s);
    EXPECT_EQ(Series::parse(s.dump()).order(), 6);
    EXPECT_SOS_ERROR(Series::parse("orderly 3\n"), ErrorCode::ParseError);
    EXPECT_SOS_ERROR(Series::parse("order 3\n4 0 1 0\n"), ErrorCode::ParseError);
}

TEST(Series, PrettyForm) {
    Series s(3);
    s.add_linear_u(Rational(-1));
    s.add(2, -1, Rational(-1));
    s.add(3, -2, Rational(-2));
    EXPECT_EQ(s.pretty(), "-u - t^2 e^{-u} - 2 t^3 e^{-2u}");
}

TEST(Series, ArithmeticCancels) {
    Series s = sample();
    EXPECT_TRUE((s - s).empty());
    EXPECT_EQ(s + (-s), Series(6));
    EXPECT_EQ(s.scaled(Rational(2)), s + s);
    Series noU = s;
    noU.add_linear_u(Rational(1));
    EXPECT_EQ(noU.shifted(1, 1).coefficient(3, 0), -1);
    EXPECT_SOS_ERROR(s.shifted(1, 0), ErrorCode::InvalidArgument);
}

TEST(Series, EvaluateMatchesDirectSum) {
    Series s = sample();
    double t = 0.13, u = -0.4;
    double direct = -u - t * t * std::exp(-u) - 2 * std::pow(t, 3) * std::exp(-2 * u) +
                    2.5 * std::pow(t, 4) * std::exp(3 * u) + std::pow(t, 4.5) / 3;
    EXPECT_NEAR(s.evaluate(t, u), direct, 1e-15);
    HighFloat hf = s.evaluate(HighFloat(t), HighFloat(u));
    EXPECT_NEAR(hf.convert_to<double>(), direct, 1e-15);
}

TEST(Series, ProductTruncates) {
    Series a(4), b(4);
    a.add(1, 0, Rational(1));
    a.add(2, 1, Rational(3));
    b.add(2, 0, Rational(1));
    b.add(3, -1, Rational(2));
    Series p = a.times(b);
    EXPECT_EQ(p.coefficient(3, 0), 1);
    EXPECT_EQ(p.coefficient(4, 1), 3);
    EXPECT_EQ(p.coefficient(4, -1), 2);
    EXPECT_EQ(p.coefficient(5, 0), 0);
}

TEST(Series, LogOnePlusAgreesWithNumerics) {
    Series w(8);
    w.add(2, 1, Rational(1));
    w.add(3, -1, Rational(4));
    w.add(4, 0, Rational(-3));
    Series l = log_one_plus(w);
    EXPECT_EQ(l.coefficient(4, 2), Rational(-1, 2));
    EXPECT_EQ(l.coefficient(6, 3), Rational(1, 3));
    for (double t : {0.01, 0.003}) {
        HighFloat ht(t), hu(0.3);
        HighFloat exact = log(1 + w.evaluate(ht, hu));
        double gap = abs(l.evaluate(ht, hu) - exact).convert_to<double>();
        EXPECT_LT(gap, 50 * std::pow(t, 9)) << t;
        EXPECT_GT(gap, 0.0);
    }
    Series bad(3);
    bad.add(0, 1, Rational(1));
    EXPECT_SOS_ERROR(log_one_plus(bad), ErrorCode::InvalidArgument);
}

TEST(Series, SliceKeepsRange) {
    Series s = sample();
    Series mid = s.slice(3, 4);
    EXPECT_EQ(mid.coefficient(2, -1), 0);
    EXPECT_EQ(mid.coefficient(3, -2), -2);
    EXPECT_EQ(mid.coefficient(4, 3), Rational(5, 2));
}
