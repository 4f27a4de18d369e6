#include "wfoot/csv.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "wfoot/errors.hpp"

namespace wfoot {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    const bool has_comma = line.find(',') != std::string::npos;
    const bool has_semi = line.find(';') != std::string::npos;
    const char sep = has_comma ? ',' : (has_semi ? ';' : ' ');
    std::istringstream in(line);
    if (sep == ' ') {
        while (in >> current) fields.push_back(current);
        return fields;
    }
    while (std::getline(in, current, sep)) {
        const size_t b = current.find_first_not_of(" \t\r");
        const size_t e = current.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? "" : current.substr(b, e - b + 1));
    }
    return fields;
}

bool parse_double(const std::string& text, double& out) {
    if (text.empty()) return false;
    size_t pos = 0;
    try {
        out = std::stod(text, &pos);
    } catch (const std::exception&) {
        return false;
    }
    return pos == text.size();
}

}  // namespace

BivariateData read_bivariate_csv(std::istream& in, const std::string& cols) {
    std::string want_x, want_y;
    if (!cols.empty()) {
        const size_t comma = cols.find(',');
        if (comma == std::string::npos) {
            throw DataError("--cols expects two names or indices separated by a comma");
        }
        want_x = cols.substr(0, comma);
        want_y = cols.substr(comma + 1);
    }

    BivariateData data;
    int col_x = -1, col_y = -1;
    int line_no = 0;
    std::string line;
    bool first_content_line = true;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<std::string> fields = split_fields(line);

        if (first_content_line) {
            first_content_line = false;
            double ignored;
            const bool numeric_first =
                !fields.empty() && parse_double(fields[0], ignored);

            if (!want_x.empty()) {
                double xi, yi;
                const bool indices = parse_double(want_x, xi) && parse_double(want_y, yi);
                if (indices) {
                    col_x = static_cast<int>(xi) - 1;
                    col_y = static_cast<int>(yi) - 1;
                    if (col_x < 0 || col_y < 0) {
                        throw DataError("--cols indices are 1-based");
                    }
                } else {
                    if (numeric_first) {
                        throw DataError("--cols names given but the file has no header");
                    }
                    for (size_t c = 0; c < fields.size(); ++c) {
                        if (fields[c] == want_x) col_x = static_cast<int>(c);
                        if (fields[c] == want_y) col_y = static_cast<int>(c);
                    }
                    if (col_x < 0 || col_y < 0) {
                        throw DataError("--cols names not found in header");
                    }
                    continue;  // header consumed
                }
            } else {
                col_x = 0;
                col_y = 1;
            }
            if (!numeric_first) continue;  // unnamed header line
        }

        if (std::max(col_x, col_y) >= static_cast<int>(fields.size())) {
            throw DataError("line " + std::to_string(line_no) + ": expected at least " +
                            std::to_string(std::max(col_x, col_y) + 1) + " columns");
        }
        double x, y;
        if (!parse_double(fields[col_x], x) || !parse_double(fields[col_y], y)) {
            throw DataError("line " + std::to_string(line_no) + ": non-numeric value");
        }
        data.x.push_back(x);
        data.y.push_back(y);
    }

    if (data.x.size() < 2) {
        throw DataError("need at least 2 data rows, got " + std::to_string(data.x.size()));
    }
    return data;
}

BivariateData read_bivariate_csv_file(const std::string& path, const std::string& cols) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open input file '" + path + "'");
    return read_bivariate_csv(in, cols);
}

}  // namespace wfoot
