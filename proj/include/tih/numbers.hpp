#ifndef TIH_NUMBERS_HPP
#define TIH_NUMBERS_HPP

#include <boost/multiprecision/gmp.hpp>
#include <stdexcept>
#include <string>
#include <vector>

namespace tih {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

inline Int gcd_int(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }

// Parses "num/den" or "num"; throws on malformed input or zero denominator.
inline Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rat(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed rational: " + s);
    }
}

inline std::string rat_to_string(const Rat& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

// Scales a rational vector to a primitive integer vector (gcd 1), preserving direction.
inline std::vector<Int> primitive_vector(const std::vector<Rat>& v) {
    Int lcm_den = 1;
    for (const auto& x : v) lcm_den = lcm_den / gcd_int(lcm_den, denominator(x)) * denominator(x);
    std::vector<Int> w(v.size());
    Int g = 0;
    for (size_t i = 0; i < v.size(); ++i) {
        w[i] = numerator(v[i]) * (lcm_den / denominator(v[i]));
        g = gcd_int(g, w[i]);
    }
    if (g > 1)
        for (auto& x : w) x /= g;
    return w;
}

}  // namespace tih

#endif
