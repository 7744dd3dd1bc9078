#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "halfsphere/conic_hull.hpp"
#include "halfsphere/random_source.hpp"
#include "halfsphere/sphere_core.hpp"

namespace halfsphere {

enum class FunctionalKind { facets, ridges, vertices, surface_area, volume, missed_volume, mean_width, hausdorff };

std::string_view to_string(FunctionalKind kind);

struct FunctionalValue {
    FunctionalKind kind;
    double value = 0.0;
    std::optional<double> std_error;          // present iff Monte Carlo
    std::optional<std::size_t> samples_used;  // present iff Monte Carlo
    // Set by hausdorff_to_halfsphere when the pole lies outside the polytope:
    // `value` is then only the lower bound pi/2.
    bool lower_bound_only = false;

    bool is_monte_carlo() const { return std_error.has_value(); }
};

struct FaceCounts {
    int vertices = 0;  // f_0
    int ridges = 0;    // f_{d-2}
    int facets = 0;    // f_{d-1}
};

FaceCounts face_counts(const SphericalPolytope& poly);

// Sum of the (d-1)-measures of the facets. Exact for d = 2 (arc lengths) and
// d = 3 (Girard excess); per-facet Monte Carlo solid angles for d >= 4.
FunctionalValue surface_area(const SphericalPolytope& poly, RandomSource& rng, std::size_t mc_samples);

struct VolumeValues {
    FunctionalValue volume;
    FunctionalValue missed_volume;  // omega_{d+1}/2 - volume
};

// sigma(P) and sigma(S_e^+ \ P). Exact for d = 2 (Girard on the polygon),
// Monte Carlo over the halfsphere for d >= 3.
VolumeValues spherical_volume(const SphericalPolytope& poly, const PoleFrame& pole, RandomSource& rng,
                              std::size_t mc_samples);

struct MeanWidthValues {
    FunctionalValue hit_count;  // primary estimate
    FunctionalValue dual_cone;  // cross-check
};

// Spherical mean width U_1, estimated twice from independent sub-streams:
// hit counting of random great subspheres, and 1/2 - sigma(C*)/omega_{d+1}.
MeanWidthValues mean_width(const SphericalPolytope& poly, RandomSource& rng, std::size_t mc_samples);

// Spherical Hausdorff distance between the polytope and the halfsphere.
//
// With the pole inside the polytope the distance is attained on a wedge
// v^- cap S_e^+ whose direction v lies in the dual cone; <e, v>/|v| is
// quasiconcave there, so its minimum sits on an extreme ray of the dual cone,
// i.e. on a facet normal. Hence delta = max_n arccos <n, e>.
//
// When some <n, e> < -kHullEps the pole is outside and delta >= pi/2; the
// value pi/2 is returned with lower_bound_only set.
FunctionalValue hausdorff_to_halfsphere(const SphericalPolytope& poly, const PoleFrame& pole);

}  // namespace halfsphere
