#pragma once

#include "dof_atlas/rational.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace dofatlas {

/// Antenna counts (M1, M2, N1, N2) of the two transmit-receive pairs.
/// T1/T2 are the transmitters, R1/R2 the paired receivers.
struct AntennaConfig {
    int m1 = 1;
    int m2 = 1;
    int n1 = 1;
    int n2 = 1;

    void validate() const {
        if (m1 < 1 || m2 < 1 || n1 < 1 || n2 < 1)
            throw std::invalid_argument("antenna counts must be >= 1");
    }
    bool operator==(const AntennaConfig&) const = default;
};

/// Result of testing the asymmetric-transmitter inequalities. The IC test
/// (min(M1,N1) > N2 > M2) and the CRC test (min(M1+M2,N1) > N2 > M2) are
/// independent; callers inspect whichever applies to their channel.
enum class RegimeTag { Asymmetric, AsymmetricSwapped, General };

struct Regime {
    RegimeTag ic = RegimeTag::General;
    RegimeTag crc = RegimeTag::General;
};

Regime classify(const AntennaConfig& config);

std::string to_string(RegimeTag tag);

/// One linear constraint a1*d1 + a2*d2 <= c with exact coefficients.
struct HalfSpace {
    Rational a1, a2, c;

    bool satisfied_by(const Rational& d1, const Rational& d2) const {
        return a1 * d1 + a2 * d2 <= c;
    }
    bool operator==(const HalfSpace&) const = default;
};

/// Renders a half-space as e.g. "d1 + 2 d2 <= 3" (integer coefficients
/// printed bare, non-integers as p/q).
std::string format_halfspace(const HalfSpace& hs);

struct DofPoint {
    Rational d1, d2;
    bool operator==(const DofPoint&) const = default;
};

enum class Scenario { IcNoCsit, CrcNoCsitIid, CrcNoCsitCorr };

std::string to_string(Scenario scenario);
Scenario scenario_from_string(const std::string& name);

/// A DoF region: bounded convex polytope in the nonnegative quadrant of the
/// (d1, d2) plane. `halfspaces` keeps the defining constraints verbatim
/// (plus explicit nonnegativity), redundant or not; `vertices` are
/// deduplicated and sorted counterclockwise starting at (0,0).
struct DofRegion {
    AntennaConfig config;
    Scenario scenario = Scenario::IcNoCsit;
    std::vector<HalfSpace> halfspaces;
    std::vector<DofPoint> vertices;

    /// Canonical view: duplicate and redundant half-spaces dropped. A
    /// half-space survives iff it supports an edge of the polytope (is
    /// tight at two or more vertices).
    DofRegion minimal() const;
};

struct UnsupportedRegime : std::domain_error {
    using std::domain_error::domain_error;
};

struct UnboundedRegion : std::domain_error {
    using std::domain_error::domain_error;
};

struct InfeasibleRegion : std::domain_error {
    using std::domain_error::domain_error;
};

/// Bound L of the region definition: d1 + ((n1'+M2-N2)/M2) d2 <= n1'.
/// Requires N2 > M2; the slope-zero case n1' = N2-M2 is legal and returned
/// as-is.
HalfSpace bound_L(const AntennaConfig& config, int n1prime);

/// IC region under isotropic fading, asymmetric regime: N1' = min(N1,M1).
/// Index-swapped configs are computed through the mirror map and un-mirrored.
/// Throws UnsupportedRegime outside both regimes.
DofRegion region_ic_nocsit(const AntennaConfig& config);

/// CRC region (T2 cognitive), asymmetric regime: N1' = min(N1,M1+M2). The
/// same region holds for i.i.d. and correlated Rayleigh fading; `scenario`
/// records which assumption the caller works under.
DofRegion region_crc_asym(const AntennaConfig& config,
                          Scenario scenario = Scenario::CrcNoCsitIid);

/// Full piecewise CRC region with i.i.d. Rayleigh fading; total over all
/// configs. Cross bound selected by: N1 <= N2 first, then the asymmetric
/// inequality, else the general ratio bound.
DofRegion region_crc_full(const AntennaConfig& config);

/// All vertices of the polytope {d >= 0} ∩ halfspaces, by exact pairwise
/// line intersection (the nonnegativity axes participate whether or not
/// they appear in the input). Throws UnboundedRegion / InfeasibleRegion.
std::vector<DofPoint> enumerate_vertices(const std::vector<HalfSpace>& halfspaces);

bool contains(const DofRegion& region, const DofPoint& p);

/// First half-space of `region` violated by `p`, or nullptr if `p` is
/// inside. Pointer is into region.halfspaces.
const HalfSpace* first_violated(const DofRegion& region, const DofPoint& p);

/// a ⊆ b, decided by checking every vertex of `a` against every half-space
/// of `b` (sound and complete for convex polytopes).
bool is_subset(const DofRegion& a, const DofRegion& b);

/// max over the region of w1*d1 + w2*d2; the optimum of a linear objective
/// over a bounded polytope is attained at a vertex.
Rational weighted_sum_max(const DofRegion& region, const Rational& w1, const Rational& w2);

}  // namespace dofatlas
