#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "cgas/estimators.hpp"

namespace cgas {

using Json = nlohmann::ordered_json;

Json to_json(const Box&);
Json to_json(const Interval&);
Json to_json(const Ci&);
Json to_json(const Alpha0Bounds&);
Json to_json(const BetaStarBracket&);
Json to_json(const BoundReport&);
Json to_json(const PresenceEstimate&);
Json to_json(const LambdaEstimate&);
Json to_json(const WindowSizing&);
Json to_json(const TvExperimentResult&);
Json to_json(const LemmaReport&);

Box box_from_json(const Json&);

// Contour family files: one contour per line, links as comma-separated
// doubled-midpoint pairs; lines sorted (byte-exact output for goldens).
void write_family(const ContourFamily&, std::ostream&);
ContourFamily read_family(std::istream&);

// CSV exports.
std::string bound_report_csv_header();
std::string bound_report_csv_row(const BoundReport&);
void write_per_replica_csv(const std::vector<int64_t>& totals, std::ostream&);
void write_histogram_csv(const std::vector<int64_t>& hist, int64_t n, double poisson_mean,
                         std::ostream&);

}  // namespace cgas
