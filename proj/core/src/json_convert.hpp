#pragma once

// nlohmann::json conversions shared by report_io.cpp and experiments.cpp.

#include <json.hpp>

#include "singular_sl/report_io.hpp"

namespace singular_sl::detail {

using Json = nlohmann::json;

/// Non-finite values become their format_number strings.
Json number(double v);

Json to_json(const RegularityReport& report);
Json to_json(const RatioStudy& study);
Json to_json(const Profile& profile);
Json to_json(const CounterexampleScan& scan);
Json solution_header(const SolutionTable& table);

}  // namespace singular_sl::detail
