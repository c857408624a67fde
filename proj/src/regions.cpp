#include "dof_atlas/regions.hpp"

#include <algorithm>
#include <utility>

namespace dofatlas {

namespace {

const Rational kZero{0};

std::string rational_display(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational rational_abs(const Rational& r) { return r < kZero ? -r : r; }

AntennaConfig swapped(const AntennaConfig& c) { return {c.m2, c.m1, c.n2, c.n1}; }

}  // namespace

Regime classify(const AntennaConfig& config) {
    config.validate();
    const int m1 = config.m1, m2 = config.m2, n1 = config.n1, n2 = config.n2;
    Regime regime;
    if (std::min(m1, n1) > n2 && n2 > m2)
        regime.ic = RegimeTag::Asymmetric;
    else if (std::min(m2, n2) > n1 && n1 > m1)
        regime.ic = RegimeTag::AsymmetricSwapped;
    if (std::min(m1 + m2, n1) > n2 && n2 > m2)
        regime.crc = RegimeTag::Asymmetric;
    else if (std::min(m1 + m2, n2) > n1 && n1 > m1)
        regime.crc = RegimeTag::AsymmetricSwapped;
    return regime;
}

std::string to_string(RegimeTag tag) {
    switch (tag) {
        case RegimeTag::Asymmetric: return "asymmetric";
        case RegimeTag::AsymmetricSwapped: return "asymmetric-swapped";
        case RegimeTag::General: return "general";
    }
    return "general";
}

std::string format_halfspace(const HalfSpace& hs) {
    std::string out;
    auto append_term = [&out](const Rational& coeff, const char* var) {
        if (coeff == kZero) return;
        const Rational mag = rational_abs(coeff);
        if (out.empty()) {
            if (coeff < kZero) out += "-";
        } else {
            out += coeff < kZero ? " - " : " + ";
        }
        if (mag != Rational(1)) {
            out += rational_display(mag);
            out += " ";
        }
        out += var;
    };
    append_term(hs.a1, "d1");
    append_term(hs.a2, "d2");
    out += " <= ";
    out += rational_display(hs.c);
    return out;
}

std::string to_string(Scenario scenario) {
    switch (scenario) {
        case Scenario::IcNoCsit: return "ic-nocsit";
        case Scenario::CrcNoCsitIid: return "crc-nocsit-iid";
        case Scenario::CrcNoCsitCorr: return "crc-nocsit-corr";
    }
    return "ic-nocsit";
}

Scenario scenario_from_string(const std::string& name) {
    if (name == "ic-nocsit") return Scenario::IcNoCsit;
    if (name == "crc-nocsit-iid") return Scenario::CrcNoCsitIid;
    if (name == "crc-nocsit-corr") return Scenario::CrcNoCsitCorr;
    throw std::invalid_argument("unknown scenario: " + name);
}

HalfSpace bound_L(const AntennaConfig& config, int n1prime) {
    config.validate();
    if (n1prime < 1) throw std::invalid_argument("n1prime must be >= 1");
    if (config.n2 <= config.m2)
        throw std::invalid_argument("bound L requires N2 > M2");
    return {Rational(1), Rational(n1prime + config.m2 - config.n2, config.m2),
            Rational(n1prime)};
}

namespace {

// Sorts distinct points counterclockwise around their centroid, then
// rotates so (0,0) leads. Collinear ties (degenerate polytopes) fall back
// to (d1, d2) lexicographic order.
void sort_ccw_from_origin(std::vector<DofPoint>& pts) {
    auto lex_less = [](const DofPoint& a, const DofPoint& b) {
        return a.d1 != b.d1 ? a.d1 < b.d1 : a.d2 < b.d2;
    };
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() > 2) {
        Rational cx{0}, cy{0};
        for (const auto& p : pts) {
            cx += p.d1;
            cy += p.d2;
        }
        const Rational k(static_cast<std::int64_t>(pts.size()));
        cx /= k;
        cy /= k;
        auto angle_less = [&](const DofPoint& a, const DofPoint& b) {
            const Rational ux = a.d1 - cx, uy = a.d2 - cy;
            const Rational vx = b.d1 - cx, vy = b.d2 - cy;
            const int ha = (uy > kZero || (uy == kZero && ux > kZero)) ? 0 : 1;
            const int hb = (vy > kZero || (vy == kZero && vx > kZero)) ? 0 : 1;
            if (ha != hb) return ha < hb;
            const Rational cross = ux * vy - uy * vx;
            if (cross != kZero) return cross > kZero;
            return lex_less(a, b);
        };
        std::sort(pts.begin(), pts.end(), angle_less);
    }
    const DofPoint origin{kZero, kZero};
    const auto it = std::find(pts.begin(), pts.end(), origin);
    if (it != pts.end()) std::rotate(pts.begin(), it, pts.end());
}

bool feasible_for_all(const std::vector<HalfSpace>& hs, const Rational& d1,
                      const Rational& d2) {
    return std::all_of(hs.begin(), hs.end(),
                       [&](const HalfSpace& h) { return h.satisfied_by(d1, d2); });
}

// The system is unbounded iff the recession cone {r >= 0 : a·r <= 0 for all
// constraints} has a nonzero ray. Every extreme ray of that cone lies on a
// constraint boundary or a coordinate axis, so testing those candidate
// directions is exhaustive.
bool has_recession_ray(const std::vector<HalfSpace>& hs) {
    std::vector<std::pair<Rational, Rational>> candidates = {{Rational(1), kZero},
                                                             {kZero, Rational(1)}};
    for (const auto& h : hs) {
        candidates.emplace_back(h.a2, -h.a1);
        candidates.emplace_back(-h.a2, h.a1);
    }
    for (const auto& [rx, ry] : candidates) {
        if (rx < kZero || ry < kZero || (rx == kZero && ry == kZero)) continue;
        const bool escapes = std::all_of(hs.begin(), hs.end(), [&](const HalfSpace& h) {
            return h.a1 * rx + h.a2 * ry <= kZero;
        });
        if (escapes) return true;
    }
    return false;
}

}  // namespace

std::vector<DofPoint> enumerate_vertices(const std::vector<HalfSpace>& halfspaces) {
    std::vector<HalfSpace> hs = halfspaces;
    hs.push_back({Rational(-1), kZero, kZero});  // d1 >= 0
    hs.push_back({kZero, Rational(-1), kZero});  // d2 >= 0
    for (const auto& h : hs)
        if (h.a1 == kZero && h.a2 == kZero)
            throw std::invalid_argument("half-space with zero normal");

    if (!feasible_for_all(hs, kZero, kZero))
        throw InfeasibleRegion("origin violates a constraint");
    if (has_recession_ray(hs))
        throw UnboundedRegion("no upper bound on d1 or d2 derivable");

    std::vector<DofPoint> vertices;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        for (std::size_t j = i + 1; j < hs.size(); ++j) {
            const Rational det = hs[i].a1 * hs[j].a2 - hs[i].a2 * hs[j].a1;
            if (det == kZero) continue;
            const Rational d1 = (hs[i].c * hs[j].a2 - hs[i].a2 * hs[j].c) / det;
            const Rational d2 = (hs[i].a1 * hs[j].c - hs[i].c * hs[j].a1) / det;
            if (feasible_for_all(hs, d1, d2)) vertices.push_back({d1, d2});
        }
    }
    sort_ccw_from_origin(vertices);
    return vertices;
}

namespace {

DofRegion make_region(const AntennaConfig& config, Scenario scenario,
                      std::vector<HalfSpace> halfspaces) {
    DofRegion region;
    region.config = config;
    region.scenario = scenario;
    region.halfspaces = std::move(halfspaces);
    region.vertices = enumerate_vertices(region.halfspaces);
    return region;
}

// Region D(M1,M2,N1,N2,N1') of the asymmetric regime: the box bounds L_o1,
// L_o2, the cross bound L, and explicit nonnegativity.
DofRegion region_d(const AntennaConfig& config, int n1prime, Scenario scenario) {
    return make_region(config, scenario,
                       {{Rational(1), kZero, Rational(n1prime)},
                        {kZero, Rational(1), Rational(config.m2)},
                        bound_L(config, n1prime),
                        {Rational(-1), kZero, kZero},
                        {kZero, Rational(-1), kZero}});
}

DofRegion mirrored(DofRegion region, const AntennaConfig& original) {
    region.config = original;
    for (auto& h : region.halfspaces) std::swap(h.a1, h.a2);
    for (auto& v : region.vertices) std::swap(v.d1, v.d2);
    sort_ccw_from_origin(region.vertices);
    return region;
}

}  // namespace

DofRegion region_ic_nocsit(const AntennaConfig& config) {
    const Regime regime = classify(config);
    if (regime.ic == RegimeTag::Asymmetric)
        return region_d(config, std::min(config.n1, config.m1), Scenario::IcNoCsit);
    if (regime.ic == RegimeTag::AsymmetricSwapped) {
        const AntennaConfig sw = swapped(config);
        return mirrored(region_d(sw, std::min(sw.n1, sw.m1), Scenario::IcNoCsit), config);
    }
    throw UnsupportedRegime("config not in the asymmetric IC regime");
}

DofRegion region_crc_asym(const AntennaConfig& config, Scenario scenario) {
    if (scenario == Scenario::IcNoCsit)
        throw std::invalid_argument("CRC region requires a CRC scenario label");
    if (classify(config).crc != RegimeTag::Asymmetric)
        throw UnsupportedRegime("config not in the asymmetric CRC regime");
    return region_d(config, std::min(config.n1, config.m1 + config.m2), scenario);
}

DofRegion region_crc_full(const AntennaConfig& config) {
    config.validate();
    const int m1 = config.m1, m2 = config.m2, n1 = config.n1, n2 = config.n2;
    const int d1cap = std::min(n1, m1 + m2);
    const int d2cap = std::min(m2, n2);

    HalfSpace cross;
    if (n1 <= n2) {
        cross = {Rational(1, std::min(n1, m2)), Rational(1, std::min(n2, m2)),
                 Rational(d1cap, std::min(n1, m2))};
    } else if (std::min(m1 + m2, n1) > n2 && n2 > m2) {
        cross = bound_L(config, d1cap);
    } else {
        cross = {Rational(1, d1cap), Rational(1, std::min(n2, m1 + m2)), Rational(1)};
    }
    return make_region(config, Scenario::CrcNoCsitIid,
                       {{Rational(1), kZero, Rational(d1cap)},
                        {kZero, Rational(1), Rational(d2cap)},
                        cross,
                        {Rational(-1), kZero, kZero},
                        {kZero, Rational(-1), kZero}});
}

bool contains(const DofRegion& region, const DofPoint& p) {
    return first_violated(region, p) == nullptr;
}

const HalfSpace* first_violated(const DofRegion& region, const DofPoint& p) {
    for (const auto& h : region.halfspaces)
        if (!h.satisfied_by(p.d1, p.d2)) return &h;
    return nullptr;
}

bool is_subset(const DofRegion& a, const DofRegion& b) {
    return std::all_of(a.vertices.begin(), a.vertices.end(),
                       [&](const DofPoint& v) { return contains(b, v); });
}

Rational weighted_sum_max(const DofRegion& region, const Rational& w1,
                          const Rational& w2) {
    if (w1 < kZero || w2 < kZero)
        throw std::invalid_argument("weights must be nonnegative");
    if (region.vertices.empty())
        throw std::invalid_argument("region has no vertices");
    Rational best = w1 * region.vertices.front().d1 + w2 * region.vertices.front().d2;
    for (const auto& v : region.vertices) best = std::max(best, w1 * v.d1 + w2 * v.d2);
    return best;
}

DofRegion DofRegion::minimal() const {
    // Canonical key: scale so the first nonzero of (a1, a2) has magnitude 1.
    auto normalized = [](const HalfSpace& h) {
        const Rational s = rational_abs(h.a1 != kZero ? h.a1 : h.a2);
        return HalfSpace{h.a1 / s, h.a2 / s, h.c / s};
    };
    DofRegion out;
    out.config = config;
    out.scenario = scenario;
    out.vertices = vertices;
    std::vector<HalfSpace> seen;
    for (const auto& h : halfspaces) {
        const HalfSpace key = normalized(h);
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
        seen.push_back(key);
        const auto tight = std::count_if(vertices.begin(), vertices.end(),
                                         [&](const DofPoint& v) {
                                             return h.a1 * v.d1 + h.a2 * v.d2 == h.c;
                                         });
        if (tight >= 2) out.halfspaces.push_back(h);
    }
    return out;
}

}  // namespace dofatlas
