#include "stopwalk/rational.hpp"

#include <cctype>
#include <cstdlib>

#include "stopwalk/errors.hpp"

namespace stopwalk {

namespace {

bool is_integer_literal(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) fail("ParseError", "empty rational literal");

    if (auto slash = s.find('/'); slash != std::string::npos) {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!is_integer_literal(num) || !is_integer_literal(den))
            fail("ParseError", "bad rational literal: " + text);
        Rational q{Natural(num, 10), Natural(den, 10)};
        if (q.get_den() == 0) fail("ParseError", "zero denominator: " + text);
        q.canonicalize();
        return q;
    }

    if (is_integer_literal(s)) return Rational(Natural(s, 10));

    // Decimal, possibly with exponent: mantissa * 10^exp, converted exactly.
    long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
        std::string tail = s.substr(e + 1);
        if (!is_integer_literal(tail)) fail("ParseError", "bad exponent: " + text);
        exp10 = std::strtol(tail.c_str(), nullptr, 10);
        s = s.substr(0, e);
    }
    auto dot = s.find('.');
    std::string digits = s;
    if (dot != std::string::npos) {
        digits = s.substr(0, dot) + s.substr(dot + 1);
        exp10 -= static_cast<long>(s.size() - dot - 1);
    }
    if (digits == "+" || digits == "-") digits += "0";
    if (digits.empty()) digits = "0";
    if (!is_integer_literal(digits)) fail("ParseError", "bad decimal literal: " + text);

    Rational q{Natural(digits, 10)};
    Natural pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(std::abs(exp10)));
    if (exp10 >= 0)
        q *= Rational(pow10);
    else
        q /= Rational(pow10);
    q.canonicalize();
    return q;
}

std::string fraction_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string decimal_string(const Rational& q, int digits) {
    Rational a = q >= 0 ? q : Rational(-q);
    Natural pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    // Round half away from zero.
    Natural scaled_num = a.get_num() * pow10 * 2 + a.get_den();
    Natural scaled;
    mpz_fdiv_q(scaled.get_mpz_t(), scaled_num.get_mpz_t(),
               Natural(a.get_den() * 2).get_mpz_t());
    Natural whole = scaled / pow10;
    Natural frac = scaled % pow10;
    std::string out = (q < 0 && scaled != 0) ? "-" : "";
    out += whole.get_str();
    if (digits > 0) {
        std::string f = frac.get_str();
        out += "." + std::string(static_cast<std::size_t>(digits) - f.size(), '0') + f;
    }
    return out;
}

std::string natural_string(const Natural& n) { return n.get_str(); }

}  // namespace stopwalk
