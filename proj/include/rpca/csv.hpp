#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace rpca {

struct CsvOptions {
    char delimiter = ',';
    bool header = false;
    enum class NaPolicy { reject, drop_row } na_policy = NaPolicy::reject;
};

struct CsvResult {
    Eigen::MatrixXd X;
    std::vector<std::string> column_names; // empty when header = false
    int dropped_rows = 0;                  // rows removed under drop_row
};

// RFC-4180-style parser (quoted fields, configurable delimiter). Numeric
// cells only; NA/NaN/empty cells follow na_policy. Errors carry 1-based
// line numbers.
CsvResult load_csv(const std::string& path, const CsvOptions& options = {});

// same parser over an in-memory buffer (used by dataset loaders and tests)
CsvResult parse_csv(const std::string& text, const CsvOptions& options = {});

} // namespace rpca
