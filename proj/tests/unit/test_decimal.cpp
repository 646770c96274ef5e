#include "doctest.h"

#include "support/checks.hpp"
#include "valign/decimal.hpp"

using valign::Decimal;
using valign::ErrorCode;
using support::code_of;

TEST_CASE("decimal parsing and canonical text") {
    CHECK(Decimal::from_string("0.1").micro() == 100000);
    CHECK(Decimal::from_string("-0.5").micro() == -500000);
    CHECK(Decimal::from_string("140").str() == "140");
    CHECK(Decimal::from_string("0.100000").str() == "0.1");
    CHECK(Decimal::from_string("-3.25").str() == "-3.25");
    CHECK(Decimal::from_string("0.000001").micro() == 1);
    CHECK(Decimal::from_int(0).str() == "0");

    CHECK(code_of([] { Decimal::from_string("1.2345678"); }) == ErrorCode::parse_error);
    CHECK(code_of([] { Decimal::from_string("abc"); }) == ErrorCode::parse_error);
    CHECK(code_of([] { Decimal::from_string(""); }) == ErrorCode::parse_error);
    CHECK(code_of([] { Decimal::from_string("1.2.3"); }) == ErrorCode::parse_error);
}

TEST_CASE("from_double agrees with from_string on six-decimal literals") {
    CHECK(Decimal::from_double(0.1) == Decimal::from_string("0.1"));
    CHECK(Decimal::from_double(-0.000001) == Decimal::from_micro(-1));
    CHECK(Decimal::from_double(99999999.999999) == Decimal::from_string("99999999.999999"));
    CHECK(code_of([] { Decimal::from_double(1e12); }) == ErrorCode::domain_overflow);
}

TEST_CASE("decimal arithmetic is exact") {
    Decimal money = Decimal::from_int(150);
    Decimal rate = Decimal::from_string("0.2");
    Decimal salary = Decimal::from_int(50);
    CHECK((money - rate * salary) == Decimal::from_int(140));
    CHECK((rate * salary).str() == "10");

    // 0.1 + 0.2 == 0.3, which doubles get wrong
    CHECK((Decimal::from_string("0.1") + Decimal::from_string("0.2")) ==
          Decimal::from_string("0.3"));
    CHECK((-Decimal::from_string("1.5")).str() == "-1.5");
}

TEST_CASE("multiplication rounds half away from zero") {
    Decimal tiny = Decimal::from_micro(1); // 0.000001
    CHECK((Decimal::from_string("0.5") * tiny).micro() == 1);
    CHECK((Decimal::from_string("-0.5") * tiny).micro() == -1);
    CHECK((Decimal::from_string("0.4") * tiny).micro() == 0);
}

TEST_CASE("decimal range cap") {
    CHECK(code_of([] { Decimal::from_int(200'000'000); }) == ErrorCode::domain_overflow);
    Decimal big = Decimal::from_int(90'000'000);
    CHECK(code_of([&] { (void)(big + big); }) == ErrorCode::domain_overflow);
    CHECK(code_of([&] { (void)(big * big); }) == ErrorCode::domain_overflow);
}

TEST_CASE("decimal ordering") {
    CHECK(Decimal::from_string("0.1") < Decimal::from_string("0.2"));
    CHECK(Decimal::from_string("-1") < Decimal::from_int(0));
    CHECK(Decimal::from_string("2.5") >= Decimal::from_string("2.5"));
    CHECK(Decimal::from_string("1.5").is_integral() == false);
    CHECK(Decimal::from_int(7).is_integral());
    CHECK(Decimal::from_string("-2.75").whole_part() == -2);
}
