#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace mwkit {

using Int = boost::multiprecision::cpp_int;

inline Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

inline Int gcd_int(Int a, Int b) {
    a = abs_int(a);
    b = abs_int(b);
    while (b != 0) {
        Int r = a % b;
        a = b;
        b = r;
    }
    return a;
}

// g = gcd(a,b) together with x,y satisfying x*a + y*b = g.
inline Int exgcd(const Int& a, const Int& b, Int& x, Int& y) {
    if (b == 0) {
        x = a < 0 ? -1 : 1;
        y = 0;
        return abs_int(a);
    }
    Int x1, y1;
    Int g = exgcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

// Quotient nearest to a/b; remainder a - q*b satisfies |a - q*b| <= |b|/2.
inline Int round_div(const Int& a, const Int& b) {
    Int q = a / b;
    Int r = a - q * b;
    if (r != 0) {
        Int twice = 2 * abs_int(r);
        if (twice > abs_int(b) || (twice == abs_int(b) && (r < 0) == (b < 0))) {
            if ((r < 0) == (b < 0))
                ++q;
            else
                --q;
        }
    }
    return q;
}

}  // namespace mwkit
