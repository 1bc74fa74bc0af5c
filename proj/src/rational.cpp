#include "qck/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace qck {

namespace {

Int pow10(long e) {
    Int r = 1;
    for (long i = 0; i < e; ++i) r *= 10;
    return r;
}

}  // namespace

Rational parse_rational(const std::string& token) {
    if (token.empty()) throw std::invalid_argument("empty number");

    auto slash = token.find('/');
    if (slash != std::string::npos) {
        Int num(token.substr(0, slash));
        Int den(token.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator in '" + token + "'");
        return Rational(num, den);
    }

    // Decimal form: [sign] digits [. digits] [e|E [sign] digits]
    std::size_t i = 0;
    bool negative = false;
    if (i < token.size() && (token[i] == '+' || token[i] == '-')) {
        negative = token[i] == '-';
        ++i;
    }
    std::string int_part, frac_part;
    while (i < token.size() && std::isdigit(static_cast<unsigned char>(token[i]))) int_part += token[i++];
    if (i < token.size() && token[i] == '.') {
        ++i;
        while (i < token.size() && std::isdigit(static_cast<unsigned char>(token[i]))) frac_part += token[i++];
    }
    long exponent = 0;
    if (i < token.size() && (token[i] == 'e' || token[i] == 'E')) {
        ++i;
        bool eneg = false;
        if (i < token.size() && (token[i] == '+' || token[i] == '-')) {
            eneg = token[i] == '-';
            ++i;
        }
        std::string digits;
        while (i < token.size() && std::isdigit(static_cast<unsigned char>(token[i]))) digits += token[i++];
        if (digits.empty()) throw std::invalid_argument("malformed exponent in '" + token + "'");
        exponent = std::stol(digits);
        if (eneg) exponent = -exponent;
    }
    if (i != token.size() || (int_part.empty() && frac_part.empty()))
        throw std::invalid_argument("malformed number '" + token + "'");

    Int mantissa(int_part.empty() ? std::string("0") : int_part);
    for (char c : frac_part) mantissa = mantissa * 10 + (c - '0');
    long scale = static_cast<long>(frac_part.size()) - exponent;

    Rational q;
    if (scale >= 0)
        q = Rational(mantissa, pow10(scale));
    else
        q = Rational(mantissa * pow10(-scale), 1);
    if (negative) q = -q;
    return q;
}

std::string rational_to_string(const Rational& q) {
    std::string s = numerator(q).str();
    if (denominator(q) != 1) s += "/" + denominator(q).str();
    return s;
}

std::vector<Int> clear_denominators(const std::vector<Rational>& v) {
    Int lcm = 1;
    for (const auto& q : v) {
        Int d = denominator(q);
        lcm = lcm / gcd(lcm, d) * d;
    }
    std::vector<Int> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = numerator(v[i]) * (lcm / denominator(v[i]));
    normalize_gcd(out);
    return out;
}

void normalize_gcd(std::vector<Int>& v) {
    Int g = 0;
    for (const auto& x : v) g = gcd(g, x);
    if (g > 1)
        for (auto& x : v) x /= g;
}

}  // namespace qck
