#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "wavrel/geometry.hpp"

namespace wavrel::chars {

struct BoundaryPoint {
    std::size_t component = 0;
    double t = 0.0;
};

enum class HitOutcome { Hit, Asymptotic, Escaped };

struct HitResult {
    HitOutcome outcome = HitOutcome::Escaped;
    BoundaryPoint target{};
    std::vector<geom::Vec2> path; // diagnostic polyline
};

struct TraceConfig {
    double s_eps_rel = 1e-9;      // minimum ray parameter, relative to diameter
    std::size_t bracket_grid = 4096;
    double t_tol_rel = 1e-12;
};

// Follow the null characteristic of the given sign from a boundary point to
// its second boundary intersection. Minkowski/conformal domains use straight
// chords; the Misner cylinder integrates the null ODE.
HitResult trace_null(const geom::Domain& domain, BoundaryPoint start, int sign,
                     const TraceConfig& cfg = {});

// Chord trace from an interior point; returns the two boundary hits, ordered
// along the +direction ray first.
std::pair<BoundaryPoint, BoundaryPoint> trace_from_interior(const geom::Domain& domain,
                                                            geom::Vec2 p, int sign,
                                                            const TraceConfig& cfg = {});

// Boundary involution E_sign backed by the tracer, with the sampled table and
// the exceptional set I' (class order != 2).
class InvolutionMap {
public:
    struct Entry {
        bool valid = false;
        BoundaryPoint target{};
    };

    InvolutionMap() = default;

    int sign() const { return sign_; }
    const geom::Domain& domain() const { return domain_; }
    std::size_t grid() const { return grid_; }
    const std::vector<std::vector<Entry>>& table() const { return table_; }
    const std::vector<BoundaryPoint>& exceptional() const { return exceptional_; }
    const std::vector<int>& exceptional_orders() const { return exceptional_orders_; }
    const std::vector<geom::LightPoint>& lights() const { return lights_; }

    // class order at p: the order of the nearby exceptional class, else 2
    int class_order(BoundaryPoint p, double radius_rel = 1e-5) const;

    // Tracer-backed evaluation (ground truth).
    BoundaryPoint apply(BoundaryPoint p) const;
    // d(target t)/dt by central differences of the tracer.
    double derivative(BoundaryPoint p, double step_rel = 1e-6) const;

    bool near_exceptional(BoundaryPoint p, double radius_rel = 1e-6) const;

private:
    friend InvolutionMap involution_map(const geom::Domain&, int, std::size_t,
                                        const TraceConfig&);
    geom::Domain domain_;
    int sign_ = -1;
    std::size_t grid_ = 0;
    TraceConfig cfg_{};
    std::vector<std::vector<Entry>> table_;
    std::vector<BoundaryPoint> exceptional_;
    std::vector<int> exceptional_orders_;
    std::vector<geom::LightPoint> lights_;
};

InvolutionMap involution_map(const geom::Domain& domain, int sign, std::size_t grid = 2048,
                             const TraceConfig& cfg = {});

// The full equivalence class of p under the sign's chord relation, ordered by
// (component, t). Size 1, 2 or 3 under assumptions (A)-(C).
std::vector<BoundaryPoint> equivalence_class(const geom::Domain& domain, int sign,
                                             BoundaryPoint p, std::size_t max_size = 16,
                                             const TraceConfig& cfg = {});

// Closed-form involutions for the centered disk and annulus (section 5.2
// formulas, arccos branch calibrated against the tracer). Angles are
// counterclockwise plane angles, not component parameters.
double disk_oracle(int sign, double theta);

struct AnnulusPoint {
    bool outer = false;
    double angle = 0.0;
};

// Throws GeometryError when an outer point lies outside the arcs of the
// outer-outer formula and the inner-outer inverse does not apply.
AnnulusPoint annulus_oracle(double r1, double r2, int sign, AnnulusPoint p);

} // namespace wavrel::chars
