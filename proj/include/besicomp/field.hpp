#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace besicomp {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

/// Deterministic Miller-Rabin, valid for every 64-bit input.
bool is_prime(u64 n);

/// base^exp mod m (m > 0), square-and-multiply with 128-bit products.
u64 mod_pow(u64 base, u64 exp, u64 m);

/// Inverse of a mod m for gcd(a, m) == 1 (extended Euclid).
u64 mod_inverse(u64 a, u64 m);

/// Prime modulus d with element arithmetic in F_d. Elements are canonical
/// least non-negative residues in [0, d). Immutable after construction.
class PrimeField {
public:
    /// Throws std::invalid_argument unless d is prime.
    explicit PrimeField(u64 d);

    u64 modulus() const { return d_; }

    u64 add(u64 a, u64 b) const {
        const u64 t = d_ - b;
        return a >= t ? a - t : a + b;
    }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + d_ - b; }
    u64 neg(u64 a) const { return a == 0 ? 0 : d_ - a; }
    u64 mul(u64 a, u64 b) const {
        return static_cast<u64>(static_cast<unsigned __int128>(a) * b % d_);
    }
    u64 inv(u64 a) const { return mod_inverse(a, d_); }

    /// Reduce an arbitrary signed integer to [0, d).
    u64 reduce(long long x) const {
        long long r = x % static_cast<long long>(d_);
        if (r < 0) r += static_cast<long long>(d_);
        return static_cast<u64>(r);
    }

private:
    u64 d_;
};

/// Evaluate ((a+1)^d - a^d - 1) / d reduced mod d for prime d and 0 <= a < d.
///
/// The numerator is computed by modular exponentiation mod d^2, so no
/// big-integer power is ever materialized; the result is checked for
/// divisibility by d before dividing (failure would indicate an arithmetic
/// bug and throws std::logic_error).
u64 eval_fermat_quotient(u64 d, u64 a);

/// Memoized table of eval_fermat_quotient(d, a) for all a in [0, d).
/// p(0) == 0 always, and p(d-1) == 0 for odd d.
class FermatPoly {
public:
    explicit FermatPoly(const PrimeField& field);

    u64 modulus() const { return d_; }
    u64 operator()(u64 a) const { return values_[a]; }
    const std::vector<u32>& values() const { return values_; }

private:
    u64 d_;
    std::vector<u32> values_;
};

/// For prime d >= 5: the primitive cube roots of unity (w, w^2) with w < w^2
/// as integers, or empty when d == 2 mod 3 (none exist).
/// Throws std::invalid_argument for d < 5.
std::optional<std::pair<u64, u64>> cube_roots_of_unity(u64 d);

} // namespace besicomp
