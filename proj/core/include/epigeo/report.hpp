#pragma once

#include <string>
#include <vector>

namespace epigeo {

/// One verification check: `pass` states whether `statistic` satisfied
/// the check's acceptance rule against `threshold` (the rule direction
/// is the check's own; see `note`).
struct CheckRow {
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string note;
};

struct CheckReport {
    std::vector<CheckRow> rows;

    bool all_passed() const;
    /// Machine-readable report: one row per check.
    std::string to_csv(const std::string& config_json) const;
};

}  // namespace epigeo
