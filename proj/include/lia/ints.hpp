#ifndef LIA_INTS_HPP
#define LIA_INTS_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/functional/hash.hpp>

#include <cstdint>
#include <cstdlib>

namespace lia {

// All coefficient/constant arithmetic is arbitrary precision; the halving
// chains of the transition function and the gcd rules must never wrap.
using Int = boost::multiprecision::cpp_int;

using s64 = std::int64_t;
using u64 = std::uint64_t;
using u32 = std::uint32_t;
using u8 = std::uint8_t;

inline Int gcd_int(const Int& a, const Int& b) {
    return boost::multiprecision::gcd(a, b);
}

inline Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

// Floor division (C++ '/' truncates towards zero).
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if (a % b != 0 && ((a < 0) != (b < 0))) q -= 1;
    return q;
}

inline Int ceil_div(const Int& a, const Int& b) {
    Int q = a / b;
    if (a % b != 0 && ((a < 0) == (b < 0))) q += 1;
    return q;
}

// The unique representative of `a` modulo `m` in [0, m), m > 0.
inline Int mod_norm(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

inline std::size_t hash_int(const Int& a) {
    return boost::hash<Int>{}(a);
}

// g = gcd(a, b) together with x, y such that a*x + b*y = g.
struct ExtGcd {
    Int g, x, y;
};

inline ExtGcd ext_gcd(const Int& a, const Int& b) {
    Int old_r = a, r = b;
    Int old_x = 1, x = 0;
    Int old_y = 0, y = 1;
    while (r != 0) {
        Int q = old_r / r;
        Int t = old_r - q * r; old_r = r; r = t;
        t = old_x - q * x; old_x = x; x = t;
        t = old_y - q * y; old_y = y; y = t;
    }
    if (old_r < 0) { old_r = -old_r; old_x = -old_x; old_y = -old_y; }
    return {old_r, old_x, old_y};
}

// Combined congruence for v ~ k1 (mod m1) and v ~ k2 (mod m2), if consistent.
struct Crt {
    bool consistent;
    Int modulus, value;  // v ~ value (mod modulus), modulus = lcm(m1, m2)
};

inline Crt crt_merge(const Int& m1, const Int& k1, const Int& m2, const Int& k2) {
    ExtGcd e = ext_gcd(m1, m2);
    if ((k2 - k1) % e.g != 0) return {false, 0, 0};
    Int lcm = m1 / e.g * m2;
    Int step = (k2 - k1) / e.g;
    Int value = mod_norm(k1 + m1 * mod_norm(step * e.x, m2 / e.g), lcm);
    return {true, lcm, value};
}

inline std::size_t hash_combine(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

inline s64 to_s64(const Int& a) { return a.convert_to<s64>(); }

}  // namespace lia

#endif
