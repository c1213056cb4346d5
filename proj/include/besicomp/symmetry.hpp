#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "besicomp/arrangement.hpp"
#include "besicomp/field.hpp"

namespace besicomp {

enum class GammaName { Identity, Iota, Theta, ThetaSq, Kappa, Lambda };

const char* to_string(GammaName g);

/// One element of the six-element subgroup of GL_2(F_d) generated by
/// (x,y) -> (y,x) and (x,y) -> (y-x,-x). The matrix acts on column points;
/// its inverse is kept for transforming line coefficient rows.
struct GammaElement {
    GammaName name;
    u64 d;
    std::array<u64, 4> m;     // row-major [[m0 m1],[m2 m3]]
    std::array<u64, 4> m_inv;

    std::pair<u64, u64> apply_point(const PrimeField& field, u64 x, u64 y) const;
};

/// All six elements, ordered Identity, Iota, Theta, ThetaSq, Kappa, Lambda.
std::array<GammaElement, 6> gamma_group(const PrimeField& field);

/// Image line {g(P) : P in l}: the coefficient row (a, b) is multiplied by
/// the inverse matrix of g, c is kept, and the result is renormalized.
/// Throws std::invalid_argument on a modulus mismatch.
Line apply_gamma(const PrimeField& field, const GammaElement& g, const Line& line);

struct Orbit {
    std::vector<u32> labels;  // sorted; kInfinityLabel sorts last
    bool through_origin = false;
};

struct OrbitPartition {
    u64 d = 0;
    std::vector<Orbit> orbits;

    std::vector<u64> cardinality_profile() const; // sorted orbit sizes
};

/// Decompose the labelled arrangement's lines into orbits under the group
/// (closure by repeated application of the generators, with canonical-form
/// hashing). Pre: canonical arrangement, d >= 5. Each orbit either has all
/// lines through the origin or none; a mixed orbit throws std::logic_error.
OrbitPartition orbit_partition(const PrimeField& field, const Arrangement& arr);

enum class PrimeClass { Star, DoubleStar, Unstarred, Small };

const char* to_string(PrimeClass c);

struct Classification {
    PrimeClass tag = PrimeClass::Unstarred;
    /// For Unstarred: the orbit, outside the always-through-origin ones,
    /// whose lines pass through the origin.
    std::vector<u32> offending_orbit;
};

/// Small for d in {2, 3}. Otherwise Star when d == 1 mod 3 and p(a) != 0 for
/// every a outside {0, d-1, w, w^2}; DoubleStar when d == 2 mod 3 and
/// p(a) != 0 for every a outside {0, d-1}; else Unstarred.
Classification classify_prime(u64 d);

/// Fixed points of (x,y) -> (y-x,-x): the origin alone unless d == 3, where
/// the whole line y = -x is fixed.
std::vector<std::pair<u64, u64>> theta_fixed_points(const PrimeField& field);

/// Geometry checks run on every origin-avoiding orbit.
///
/// p1: for g in {iota, kappa, lambda} and every orbit line L with g(L) != L,
///     the point L ^ g(L) lies on the fixed line of g (x=y, y=0, x=0
///     respectively).
/// p2: six-line orbits place three pairwise-distinct image intersection
///     points on each of y=0, x=0, x=y; three-line orbits place their three
///     pairwise intersection points one on each of those lines.
/// p3: six-line orbits: the six remaining intersection points avoid the
///     three fixed lines and are pairwise distinct.
struct PropositionReport {
    struct OrbitCheck {
        Orbit orbit;
        bool applicable = false; // origin-avoiding orbit of size 3 or 6
        bool p1 = true;
        bool p2 = true;
        bool p3 = true;
    };
    u64 d = 0;
    std::vector<OrbitCheck> orbits;
    bool theta_unique_fixed_point = false;

    bool all_pass() const;
};

/// Throws std::domain_error if two lines that must intersect are parallel
/// (degenerate input; cannot happen for a canonical arrangement).
PropositionReport verify_propositions(const PrimeField& field, const Arrangement& arr);

/// Intersection point of two non-parallel lines, empty if parallel.
std::optional<std::pair<u64, u64>> intersect(const PrimeField& field, const Line& l1,
                                             const Line& l2);

} // namespace besicomp
