#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "srreg/matrix.hpp"

namespace srreg {

/// Regression sample: n x p carriers and an n response. Joint view z = (x, y).
struct Dataset {
    Matrix x;
    Vec y;
    std::vector<std::string> names;  // p carrier names + response name; may be empty

    int n() const { return x.rows(); }
    int p() const { return x.cols(); }

    /// n x (p+1) matrix with the response appended as the last column.
    Matrix joint() const;

    /// Fitting preconditions: p >= 1, n >= p + 2, finite entries.
    void validate_for_fit() const;

    /// FNV-1a over the canonical little-endian bytes of (n, p, rows of z).
    uint64_t hash() const;
};

struct CsvOptions {
    bool header = false;
    std::string response_column;  // empty: last column
};

Dataset load_csv(const std::string& path, const CsvOptions& opts = {});
Dataset parse_csv(const std::string& text, const CsvOptions& opts = {});
void write_csv(const Dataset& ds, const std::string& path);
std::string to_csv(const Dataset& ds);

/// Embedded classical datasets: "star" (n=47, p=1) and "hbk" (n=75, p=3).
Dataset builtin_dataset(const std::string& name);
std::vector<std::string> builtin_dataset_names();

}  // namespace srreg
