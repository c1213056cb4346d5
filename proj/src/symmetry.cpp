#include "besicomp/symmetry.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace besicomp {

const char* to_string(GammaName g) {
    switch (g) {
        case GammaName::Identity: return "id";
        case GammaName::Iota: return "iota";
        case GammaName::Theta: return "theta";
        case GammaName::ThetaSq: return "theta2";
        case GammaName::Kappa: return "kappa";
        case GammaName::Lambda: return "lambda";
    }
    return "?";
}

const char* to_string(PrimeClass c) {
    switch (c) {
        case PrimeClass::Star: return "star";
        case PrimeClass::DoubleStar: return "double_star";
        case PrimeClass::Unstarred: return "unstarred";
        case PrimeClass::Small: return "small";
    }
    return "?";
}

std::pair<u64, u64> GammaElement::apply_point(const PrimeField& field, u64 x, u64 y) const {
    return {field.add(field.mul(m[0], x), field.mul(m[1], y)),
            field.add(field.mul(m[2], x), field.mul(m[3], y))};
}

std::array<GammaElement, 6> gamma_group(const PrimeField& field) {
    const u64 d = field.modulus();
    const u64 one = 1 % d;
    const u64 neg = field.neg(one);
    // (x,y) images: iota (y,x); theta (y-x,-x); theta2 (-y,x-y);
    //               kappa (x-y,-y); lambda (-x,y-x)
    const std::array<u64, 4> id{one, 0, 0, one};
    const std::array<u64, 4> iota{0, one, one, 0};
    const std::array<u64, 4> theta{neg, one, neg, 0};
    const std::array<u64, 4> theta2{0, neg, one, neg};
    const std::array<u64, 4> kappa{one, neg, 0, neg};
    const std::array<u64, 4> lambda{neg, 0, neg, one};
    return {GammaElement{GammaName::Identity, d, id, id},
            GammaElement{GammaName::Iota, d, iota, iota},
            GammaElement{GammaName::Theta, d, theta, theta2},
            GammaElement{GammaName::ThetaSq, d, theta2, theta},
            GammaElement{GammaName::Kappa, d, kappa, kappa},
            GammaElement{GammaName::Lambda, d, lambda, lambda}};
}

Line apply_gamma(const PrimeField& field, const GammaElement& g, const Line& line) {
    if (g.d != field.modulus()) {
        throw std::invalid_argument("apply_gamma: group element and field modulus differ");
    }
    // row (a, b) times m_inv
    const u64 a = field.add(field.mul(line.a, g.m_inv[0]), field.mul(line.b, g.m_inv[2]));
    const u64 b = field.add(field.mul(line.a, g.m_inv[1]), field.mul(line.b, g.m_inv[3]));
    return make_line(field, a, b, line.c);
}

std::optional<std::pair<u64, u64>> intersect(const PrimeField& field, const Line& l1,
                                             const Line& l2) {
    const u64 det = field.sub(field.mul(l1.a, l2.b), field.mul(l2.a, l1.b));
    if (det == 0) return std::nullopt;
    const u64 inv_det = field.inv(det);
    // Cramer on a*x + b*y = -c
    const u64 x = field.mul(field.sub(field.mul(l1.b, l2.c), field.mul(l2.b, l1.c)), inv_det);
    const u64 y = field.mul(field.sub(field.mul(l2.a, l1.c), field.mul(l1.a, l2.c)), inv_det);
    return std::make_pair(x, y);
}

std::vector<u64> OrbitPartition::cardinality_profile() const {
    std::vector<u64> sizes;
    sizes.reserve(orbits.size());
    for (const Orbit& o : orbits) sizes.push_back(o.labels.size());
    std::sort(sizes.begin(), sizes.end());
    return sizes;
}

namespace {

u64 line_key(const Line& ln) {
    return (u64(ln.a) << 42) | (u64(ln.b) << 21) | u64(ln.c);
}

} // namespace

OrbitPartition orbit_partition(const PrimeField& field, const Arrangement& arr) {
    const u64 d = field.modulus();
    if (d < 5) throw std::invalid_argument("orbit_partition: modulus must be >= 5");
    if (arr.d != d || arr.lines.size() != d + 1) {
        throw std::invalid_argument("orbit_partition: malformed arrangement");
    }

    std::unordered_map<u64, u32> label_of;
    label_of.reserve(arr.lines.size() * 2);
    for (u64 i = 0; i <= d; ++i) {
        label_of.emplace(line_key(arr.lines[i]), i == d ? kInfinityLabel : static_cast<u32>(i));
    }

    const auto group = gamma_group(field);
    OrbitPartition part;
    part.d = d;
    std::vector<bool> visited(d + 1, false);

    auto slot_of = [d](u32 label) { return label == kInfinityLabel ? d : label; };

    for (u64 start = 0; start <= d; ++start) {
        if (visited[start]) continue;
        Orbit orbit;
        std::vector<u32> stack{start == d ? kInfinityLabel : static_cast<u32>(start)};
        visited[start] = true;
        while (!stack.empty()) {
            const u32 label = stack.back();
            stack.pop_back();
            orbit.labels.push_back(label);
            const Line& ln = arr.line(label);
            for (std::size_t gi = 1; gi < group.size(); ++gi) {
                const Line img = apply_gamma(field, group[gi], ln);
                const auto it = label_of.find(line_key(img));
                if (it == label_of.end()) {
                    throw std::logic_error("orbit_partition: image line leaves the arrangement");
                }
                if (!visited[slot_of(it->second)]) {
                    visited[slot_of(it->second)] = true;
                    stack.push_back(it->second);
                }
            }
        }
        std::sort(orbit.labels.begin(), orbit.labels.end());
        orbit.through_origin = arr.line(orbit.labels.front()).through_origin();
        for (u32 label : orbit.labels) {
            if (arr.line(label).through_origin() != orbit.through_origin) {
                throw std::logic_error("orbit_partition: orbit mixes through-origin lines");
            }
        }
        part.orbits.push_back(std::move(orbit));
    }
    return part;
}

Classification classify_prime(u64 d) {
    if (!is_prime(d)) {
        throw std::invalid_argument("classify_prime: " + std::to_string(d) + " is not prime");
    }
    if (d == 2 || d == 3) return Classification{PrimeClass::Small, {}};

    PrimeField field(d);
    FermatPoly p(field);
    std::vector<bool> allowed(d, false);
    allowed[0] = true;
    allowed[d - 1] = true;
    const bool mod3_is_1 = d % 3 == 1;
    if (mod3_is_1) {
        const auto roots = cube_roots_of_unity(d);
        allowed[roots->first] = true;
        allowed[roots->second] = true;
    }

    for (u64 a = 1; a + 1 < d; ++a) {
        if (p(a) == 0 && !allowed[a]) {
            Classification cls{PrimeClass::Unstarred, {}};
            const Arrangement arr = build_pv_arrangement(field, p);
            for (const Orbit& orbit : orbit_partition(field, arr).orbits) {
                if (std::binary_search(orbit.labels.begin(), orbit.labels.end(),
                                       static_cast<u32>(a))) {
                    cls.offending_orbit = orbit.labels;
                    break;
                }
            }
            return cls;
        }
    }
    return Classification{mod3_is_1 ? PrimeClass::Star : PrimeClass::DoubleStar, {}};
}

std::vector<std::pair<u64, u64>> theta_fixed_points(const PrimeField& field) {
    const u64 d = field.modulus();
    // theta(x,y) = (x,y)  <=>  y = 2x and 3x = 0
    std::vector<std::pair<u64, u64>> pts;
    if (d == 3) {
        for (u64 x = 0; x < d; ++x) pts.emplace_back(x, field.neg(x));
    } else {
        pts.emplace_back(0, 0);
    }
    return pts;
}

bool PropositionReport::all_pass() const {
    if (!theta_unique_fixed_point) return false;
    for (const OrbitCheck& check : orbits) {
        if (check.applicable && !(check.p1 && check.p2 && check.p3)) return false;
    }
    return true;
}

namespace {

std::pair<u64, u64> require_intersection(const PrimeField& field, const Line& l1, const Line& l2) {
    const auto pt = intersect(field, l1, l2);
    if (!pt) throw std::domain_error("verify_propositions: required intersection is degenerate");
    return *pt;
}

bool all_distinct(const std::vector<std::pair<u64, u64>>& pts) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            if (pts[i] == pts[j]) return false;
        }
    }
    return true;
}

} // namespace

PropositionReport verify_propositions(const PrimeField& field, const Arrangement& arr) {
    const u64 d = field.modulus();
    PropositionReport report;
    report.d = d;
    report.theta_unique_fixed_point = theta_fixed_points(field).size() == 1;

    const auto group = gamma_group(field);
    const GammaElement& iota = group[1];
    const GammaElement& theta = group[2];
    const GammaElement& theta2 = group[3];
    const GammaElement& kappa = group[4];
    const GammaElement& lambda = group[5];

    const Line diag = make_line(field, 1, field.neg(1 % d), 0);   // x = y, fixed by iota
    const Line horiz = make_line(field, 0, 1, 0);                 // y = 0, fixed by kappa
    const Line vert = make_line(field, 1, 0, 0);                  // x = 0, fixed by lambda
    const std::array<std::pair<const GammaElement*, const Line*>, 3> involutions{
        std::make_pair(&iota, &diag), std::make_pair(&kappa, &horiz),
        std::make_pair(&lambda, &vert)};

    auto on_line = [&](const Line& ln, const std::pair<u64, u64>& pt) {
        return ln.contains(field, pt.first, pt.second);
    };

    for (const Orbit& orbit : orbit_partition(field, arr).orbits) {
        PropositionReport::OrbitCheck check;
        check.orbit = orbit;
        const std::size_t size = orbit.labels.size();
        check.applicable = !orbit.through_origin && (size == 3 || size == 6);
        if (check.applicable) {
            // p1
            for (u32 label : orbit.labels) {
                const Line& ln = arr.line(label);
                for (const auto& [g, fixed] : involutions) {
                    const Line img = apply_gamma(field, *g, ln);
                    if (img == ln) continue;
                    if (!on_line(*fixed, require_intersection(field, ln, img))) check.p1 = false;
                }
            }
            const Line& base = arr.line(orbit.labels.front());
            if (size == 6) {
                const Line t1 = apply_gamma(field, theta, base);
                const Line t2 = apply_gamma(field, theta2, base);
                const Line i1 = apply_gamma(field, iota, base);
                const Line k1 = apply_gamma(field, kappa, base);
                const Line m1 = apply_gamma(field, lambda, base);
                // p2: three image intersections per fixed line, pairwise
                // distinct. The partner of theta^j(L) on Fix(gamma) is
                // gamma(theta^j(L)), so e.g. theta(L) meets iota(L) on y = 0
                // because kappa(theta(L)) = (theta iota theta)(L) = iota(L).
                const std::array<std::pair<const Line*, std::array<std::pair<const Line*, const Line*>, 3>>, 3>
                    per_axis{{{&horiz, {{{&base, &k1}, {&t1, &i1}, {&t2, &m1}}}},
                              {&vert, {{{&base, &m1}, {&t1, &k1}, {&t2, &i1}}}},
                              {&diag, {{{&base, &i1}, {&t1, &m1}, {&t2, &k1}}}}}};
                for (const auto& [axis, pairs] : per_axis) {
                    std::vector<std::pair<u64, u64>> pts;
                    for (const auto& [la, lb] : pairs) {
                        const auto pt = require_intersection(field, *la, *lb);
                        if (!on_line(*axis, pt)) check.p2 = false;
                        pts.push_back(pt);
                    }
                    if (!all_distinct(pts)) check.p2 = false;
                }
                // p3: the six remaining intersections avoid the axes and are distinct
                const std::array<std::pair<const Line*, const Line*>, 6> rest{
                    {{&base, &t1}, {&base, &t2}, {&t1, &t2}, {&i1, &k1}, {&i1, &m1}, {&k1, &m1}}};
                std::vector<std::pair<u64, u64>> pts;
                for (const auto& [la, lb] : rest) {
                    const auto pt = require_intersection(field, *la, *lb);
                    if (on_line(horiz, pt) || on_line(vert, pt) || on_line(diag, pt)) {
                        check.p3 = false;
                    }
                    pts.push_back(pt);
                }
                if (!all_distinct(pts)) check.p3 = false;
            } else {
                // Three-line orbit: the three pairwise intersections land one
                // on each fixed line.
                const Line& l1 = arr.line(orbit.labels[0]);
                const Line& l2 = arr.line(orbit.labels[1]);
                const Line& l3 = arr.line(orbit.labels[2]);
                std::array<std::pair<u64, u64>, 3> pts{require_intersection(field, l1, l2),
                                                       require_intersection(field, l1, l3),
                                                       require_intersection(field, l2, l3)};
                for (const Line* axis : {&horiz, &vert, &diag}) {
                    int hits = 0;
                    for (const auto& pt : pts) {
                        if (on_line(*axis, pt)) ++hits;
                    }
                    if (hits != 1) check.p2 = false;
                }
            }
        }
        report.orbits.push_back(std::move(check));
    }
    return report;
}

} // namespace besicomp
