#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "wavrel/geometry.hpp"

// Verification suites shared by the CLI and the test harness. Every suite
// returns a JSON fragment with a "pass" flag and its residuals; the CLI wraps
// them into the versioned run report.

namespace wavrel::suites {

using json = nlohmann::ordered_json;

inline constexpr const char* tool_version = "wavrel 1.0.0";
inline constexpr int schema_version = 1;

json light_points_suite(const geom::Domain& domain);

json involution_suite(const geom::Domain& domain, int sign, std::size_t grid,
                      const std::string& csv_path);

json orbit_suite(const geom::Domain& domain, std::size_t component, double start,
                 std::size_t iters, const std::string& csv_path);

json pairing_suite(const geom::Domain& domain, std::size_t K, std::size_t M,
                   const std::string& csv_path);

json isotropy_suite(const geom::Domain& domain, std::size_t K, std::size_t M, double tol);

json defect_suite(const geom::Domain& domain, std::size_t K, std::size_t M);

json dirichlet_suite(const geom::Domain& domain, std::uint64_t seed);

json diamond_suite(const std::string& f_spec, const std::string& g_spec, double sp0, double sp1,
                   double sm0, double sm1);

json flow_suite(double xi, const std::string& in_csv, const std::string& out_csv);

json flow_compose_suite(double xi, double xi2, std::size_t M);

json misner_suite(std::size_t K, const std::string& half);

json misner_trace_suite(double x0, int sign, const std::string& csv_path);

// envelope: {schema_version, tool, command, domain_hash?, seed, suites, pass}
json make_report(const std::string& command, const std::string& domain_hash, std::uint64_t seed,
                 json suites_array, bool with_timings, double wall_seconds);

} // namespace wavrel::suites
