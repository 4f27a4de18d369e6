#pragma once

#include <istream>
#include <string>
#include <vector>

namespace wfoot {

struct BivariateData {
    std::vector<double> x;
    std::vector<double> y;
};

// Reads two numeric columns from delimiter-separated text (comma, semicolon
// or whitespace). A non-numeric first line is treated as a header. cols
// selects the two columns, either by header name or as 1-based indices;
// empty means the first two columns. Throws DataError naming the offending
// line.
BivariateData read_bivariate_csv(std::istream& in, const std::string& cols = "");

BivariateData read_bivariate_csv_file(const std::string& path, const std::string& cols = "");

}  // namespace wfoot
