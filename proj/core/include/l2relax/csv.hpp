#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "l2relax/covariance.hpp"

namespace l2relax {

struct LabeledMatrix {
    std::vector<std::string> labels;
    Matrix values;
};

/// Comma-separated numbers under a required header row; '.' decimals, no quoting.
LabeledMatrix parse_csv(std::string_view text, std::string_view source = "<csv>");
LabeledMatrix read_csv(const std::filesystem::path& file);

/// Panel from a CSV whose column `target` (if present) is the outcome y_{t+1}.
Panel read_panel_csv(const std::filesystem::path& file, std::string_view target = "y");
/// Square matrix whose header count matches its column count; symmetry is checked.
CovEstimate read_covariance_csv(const std::filesystem::path& file);

/// Shortest round-trip text for a double (17 significant digits at most).
std::string format_double(double x);

void write_csv(std::ostream& out, const std::vector<std::string>& labels, const Matrix& values);

}  // namespace l2relax
