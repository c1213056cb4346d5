#include "besicomp/field.hpp"

#include <stdexcept>
#include <string>

namespace besicomp {

namespace {

u64 mul_mod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}

} // namespace

u64 mod_pow(u64 base, u64 exp, u64 m) {
    u64 result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // This base set is a proven witness set for all n < 3.3e24.
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = mod_pow(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

u64 mod_inverse(u64 a, u64 m) {
    long long t = 0, new_t = 1;
    long long r = static_cast<long long>(m), new_r = static_cast<long long>(a % m);
    while (new_r != 0) {
        long long q = r / new_r;
        t -= q * new_t; std::swap(t, new_t);
        r -= q * new_r; std::swap(r, new_r);
    }
    if (r != 1) throw std::domain_error("mod_inverse: argument is not invertible");
    if (t < 0) t += static_cast<long long>(m);
    return static_cast<u64>(t);
}

PrimeField::PrimeField(u64 d) : d_(d) {
    if (!is_prime(d)) {
        throw std::invalid_argument("PrimeField: modulus " + std::to_string(d) + " is not prime");
    }
}

u64 eval_fermat_quotient(u64 d, u64 a) {
    if (d > 0xffffffffull) {
        throw std::invalid_argument("eval_fermat_quotient: modulus too large for mod-d^2 arithmetic");
    }
    if (!is_prime(d)) {
        throw std::invalid_argument("eval_fermat_quotient: modulus " + std::to_string(d) +
                                    " is not prime");
    }
    if (a >= d) throw std::invalid_argument("eval_fermat_quotient: argument out of range");
    const u64 d2 = d * d;
    u64 num = mod_pow(a + 1, d, d2);
    num = (num + d2 - mod_pow(a, d, d2)) % d2;
    num = (num + d2 - 1 % d2) % d2;
    if (num % d != 0) {
        throw std::logic_error("eval_fermat_quotient: numerator not divisible by modulus");
    }
    return (num / d) % d;
}

FermatPoly::FermatPoly(const PrimeField& field) : d_(field.modulus()) {
    values_.reserve(d_);
    for (u64 a = 0; a < d_; ++a) {
        values_.push_back(static_cast<u32>(eval_fermat_quotient(d_, a)));
    }
}

std::optional<std::pair<u64, u64>> cube_roots_of_unity(u64 d) {
    if (d < 5) throw std::invalid_argument("cube_roots_of_unity: modulus must be >= 5");
    if (!is_prime(d)) throw std::invalid_argument("cube_roots_of_unity: modulus is not prime");
    if (d % 3 != 1) return std::nullopt;
    // c^((d-1)/3) is a cube root of unity; primitive unless c is a cube.
    const u64 e = (d - 1) / 3;
    for (u64 c = 2; ; ++c) {
        u64 w = mod_pow(c, e, d);
        if (w != 1) {
            u64 w2 = mul_mod(w, w, d);
            return w < w2 ? std::make_pair(w, w2) : std::make_pair(w2, w);
        }
    }
}

} // namespace besicomp
