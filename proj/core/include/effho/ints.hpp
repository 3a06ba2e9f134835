#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace effho {

// Exact integer used for all matrix entries and chain coefficients.
// Smith reduction intermediates can blow up far past 64 bits even on small
// inputs, so everything stays arbitrary precision; no floating point exists
// anywhere in the library.
using Int = boost::multiprecision::cpp_int;

inline Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int abs(const Int& a) { return boost::multiprecision::abs(a); }

inline std::string to_string(const Int& a) { return a.str(); }

// Euclidean division with remainder in [0, |b|).
inline Int floordiv_pos(const Int& a, const Int& b) {
    Int q = a / b, r = a % b;
    if (r < 0) q -= (b > 0 ? 1 : -1);
    return q;
}
inline Int mod_pos(const Int& a, const Int& b) {
    Int r = a % b;
    if (r < 0) r += abs(b);
    return r;
}

// Quotient minimizing |a - q*b|, used by the pivot-reduction steps.
inline Int nearest_div(const Int& a, const Int& b) {
    Int q = floordiv_pos(a, b);
    Int r = a - q * b;  // 0 <= r < |b|
    if (2 * r > abs(b)) q += (b > 0 ? 1 : -1);
    return q;
}

}  // namespace effho
