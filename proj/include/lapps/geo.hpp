#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lapps::geo {

inline constexpr double kEarthRadiusM = 6'371'008.8;

/// Conservative meters-per-degree-of-latitude used for the prefilter box;
/// slightly below the exact arc length, which widens the box.
inline constexpr double kMetersPerDegreeLat = 111'194.93;

inline constexpr double kDefaultRadiusM = 20.0;

struct GeoPoint {
    double lat_deg = 0.0;
    double lon_deg = 0.0;

    GeoPoint() = default;
    GeoPoint(double lat, double lon) : lat_deg(lat), lon_deg(lon) {
        if (!std::isfinite(lat) || !std::isfinite(lon)) {
            throw std::invalid_argument("GeoPoint: coordinates must be finite");
        }
        if (lat < -90.0 || lat > 90.0) {
            throw std::invalid_argument("GeoPoint: latitude out of [-90, 90]");
        }
        if (lon < -180.0 || lon > 180.0) {
            throw std::invalid_argument("GeoPoint: longitude out of [-180, 180]");
        }
    }

    bool operator==(const GeoPoint&) const = default;
};

/// Great-circle distance in meters on a sphere of radius kEarthRadiusM.
inline double haversine_m(const GeoPoint& a, const GeoPoint& b) {
    constexpr double kRad = std::numbers::pi / 180.0;
    const double lat1 = a.lat_deg * kRad;
    const double lat2 = b.lat_deg * kRad;
    const double s_lat = std::sin((b.lat_deg - a.lat_deg) * kRad / 2.0);
    const double s_lon = std::sin((b.lon_deg - a.lon_deg) * kRad / 2.0);
    const double h = s_lat * s_lat + std::cos(lat1) * std::cos(lat2) * s_lon * s_lon;
    return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

struct BoundingBox {
    double lat_min = 0, lat_max = 0;
    double lon_min = 0, lon_max = 0;

    /// Longitude comparison wraps across the antimeridian.
    bool contains(const GeoPoint& p) const {
        if (p.lat_deg < lat_min || p.lat_deg > lat_max) return false;
        const double center = (lon_min + lon_max) / 2.0;
        const double half = (lon_max - lon_min) / 2.0;
        double d = std::fmod(p.lon_deg - center, 360.0);
        if (d > 180.0) d -= 360.0;
        if (d < -180.0) d += 360.0;
        return std::abs(d) <= half;
    }
};

/// Rectangle guaranteed to contain every point within `radius_m` of `center`.
/// Degenerates near the poles, hence the 89-degree cutoff.
inline BoundingBox bbox_prefilter(const GeoPoint& center, double radius_m) {
    if (radius_m <= 0.0) throw std::invalid_argument("bbox_prefilter: radius must be positive");
    if (std::abs(center.lat_deg) > 89.0) {
        throw std::domain_error("bbox_prefilter: polar region, bounding box degenerates");
    }
    const double dlat = radius_m / kMetersPerDegreeLat;
    const double dlon = dlat / std::cos(center.lat_deg * std::numbers::pi / 180.0);
    return BoundingBox{center.lat_deg - dlat, center.lat_deg + dlat,
                       center.lon_deg - dlon, center.lon_deg + dlon};
}

struct AtmRecord {
    std::string atm_id;
    GeoPoint position;
    bool operator==(const AtmRecord&) const = default;
};

struct NearestResult {
    std::string atm_id;
    double distance_m = 0.0;
};

namespace detail {

/// Ordering for candidates: distance, then id for determinism on ties.
inline bool closer(const NearestResult& a, const NearestResult& b) {
    return a.distance_m < b.distance_m ||
           (a.distance_m == b.distance_m && a.atm_id < b.atm_id);
}

template <typename Pred>
std::optional<NearestResult> scan_nearest(std::span<const AtmRecord> atms, const GeoPoint& user,
                                          double radius_m, Pred&& prefilter) {
    std::optional<NearestResult> best;
    for (const AtmRecord& atm : atms) {
        if (!prefilter(atm.position)) continue;
        const double d = haversine_m(atm.position, user);
        if (d >= radius_m) continue;
        NearestResult cand{atm.atm_id, d};
        if (!best || closer(cand, *best)) best = std::move(cand);
    }
    return best;
}

}  // namespace detail

/// Bounding-box prefilter followed by exact spherical distances; returns the
/// closest terminal strictly inside `radius_m`, or nothing. Near the poles
/// the prefilter degenerates, so the scan falls back to exact-only.
inline std::optional<NearestResult> nearest_atm(std::span<const AtmRecord> atms,
                                                const GeoPoint& user,
                                                double radius_m = kDefaultRadiusM) {
    if (radius_m <= 0.0) throw std::invalid_argument("nearest_atm: radius must be positive");
    if (std::abs(user.lat_deg) > 89.0) {
        return detail::scan_nearest(atms, user, radius_m, [](const GeoPoint&) { return true; });
    }
    const BoundingBox box = bbox_prefilter(user, radius_m);
    return detail::scan_nearest(atms, user, radius_m,
                                [&box](const GeoPoint& p) { return box.contains(p); });
}

/// Exact distance for every terminal, no prefilter. The slow reference query
/// kept alongside the optimised one.
inline std::optional<NearestResult> nearest_atm_naive(std::span<const AtmRecord> atms,
                                                      const GeoPoint& user,
                                                      double radius_m = kDefaultRadiusM) {
    if (radius_m <= 0.0) throw std::invalid_argument("nearest_atm_naive: radius must be positive");
    return detail::scan_nearest(atms, user, radius_m, [](const GeoPoint&) { return true; });
}

/// Read-mostly terminal registry. Seed before serving; lookups are
/// const and may run from any number of threads.
class AtmRegistry {
public:
    AtmRegistry() = default;
    explicit AtmRegistry(std::vector<AtmRecord> atms) : atms_(std::move(atms)) {}

    void add(AtmRecord atm) { atms_.push_back(std::move(atm)); }
    std::size_t size() const { return atms_.size(); }
    std::span<const AtmRecord> records() const { return atms_; }

    std::optional<NearestResult> nearest(const GeoPoint& user,
                                         double radius_m = kDefaultRadiusM) const {
        queries_.fetch_add(1, std::memory_order_relaxed);
        return nearest_atm(atms_, user, radius_m);
    }

    /// Number of nearest() calls served; lets tests and telemetry observe
    /// whether a request ever reached the geo stage.
    std::uint64_t query_count() const { return queries_.load(std::memory_order_relaxed); }

private:
    std::vector<AtmRecord> atms_;
    mutable std::atomic<std::uint64_t> queries_{0};
};

}  // namespace lapps::geo
