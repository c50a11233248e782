#ifndef MARGOPEN_TESTS_CATCH_SUPPORT_HPP
#define MARGOPEN_TESTS_CATCH_SUPPORT_HPP

#include <catch2/catch_amalgamated.hpp>

#include <margopen/rational.hpp>

template <>
struct Catch::StringMaker<margopen::Rational> {
  static std::string convert(const margopen::Rational& r) { return margopen::to_string(r); }
};

#endif  // MARGOPEN_TESTS_CATCH_SUPPORT_HPP
