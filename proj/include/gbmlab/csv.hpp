#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "gbmlab/common.hpp"

namespace gbmlab {

// Shortest round-trip decimal for a double; the same value always prints the
// same bytes, which is what makes result.csv reproducible.
inline std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    double back = 0.0;
    for (int prec = 1; prec <= 16; ++prec) {
        char shorter[40];
        std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
        std::sscanf(shorter, "%lf", &back);
        if (back == v) return shorter;
    }
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const std::string& path, std::vector<std::string> header)
        : out_(path, std::ios::binary), n_cols_(header.size()) {
        require(out_.good(), "cannot write csv file: " + path);
        require(!header.empty(), "csv needs at least one column");
        for (std::size_t i = 0; i < header.size(); ++i)
            out_ << (i ? "," : "") << header[i];
        out_ << "\n";
    }

    void row(const std::vector<double>& values) {
        require(values.size() == n_cols_, "csv row width does not match the header");
        for (std::size_t i = 0; i < values.size(); ++i)
            out_ << (i ? "," : "") << csv_number(values[i]);
        out_ << "\n";
    }

    // mixed row: first cell a label, the rest numeric
    void row(const std::string& label, const std::vector<double>& values) {
        require(values.size() + 1 == n_cols_, "csv row width does not match the header");
        out_ << label;
        for (double v : values) out_ << "," << csv_number(v);
        out_ << "\n";
    }

private:
    std::ofstream out_;
    std::size_t n_cols_;
};

}  // namespace gbmlab
