#include "srreg/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "srreg/errors.hpp"

namespace srreg {

Matrix Dataset::joint() const {
    Matrix z(n(), p() + 1);
    for (int i = 0; i < n(); ++i) {
        for (int j = 0; j < p(); ++j) z(i, j) = x(i, j);
        z(i, p()) = y[i];
    }
    return z;
}

void Dataset::validate_for_fit() const {
    if (p() < 1) throw ValidationError("need at least one carrier column");
    if (n() < p() + 2)
        throw ValidationError("need n >= p + 2 observations, got n=" + std::to_string(n()) +
                              ", p=" + std::to_string(p()));
    for (int i = 0; i < n(); ++i) {
        for (int j = 0; j < p(); ++j)
            if (!std::isfinite(x(i, j))) throw ValidationError("non-finite carrier entry");
        if (!std::isfinite(y[i])) throw ValidationError("non-finite response entry");
    }
}

uint64_t Dataset::hash() const {
    uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](const void* bytes, size_t len) {
        const unsigned char* b = static_cast<const unsigned char*>(bytes);
        for (size_t i = 0; i < len; ++i) {
            h ^= b[i];
            h *= 0x100000001b3ULL;
        }
    };
    int64_t dims[2] = {n(), p()};
    mix(dims, sizeof(dims));
    for (int i = 0; i < n(); ++i) {
        mix(x.row(i), sizeof(double) * p());
        mix(&y[i], sizeof(double));
    }
    return h;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& cell, double& out) {
    std::string t = trim(cell);
    if (t.empty()) return false;
    const char* begin = t.data();
    const char* end = begin + t.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

}  // namespace

Dataset parse_csv(const std::string& text, const CsvOptions& opts) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    int line_no = 0;
    size_t width = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split_line(line);
        if (opts.header && header.empty()) {
            for (auto& c : cells) header.push_back(trim(c));
            width = header.size();
            continue;
        }
        if (width == 0) width = cells.size();
        if (cells.size() != width)
            throw ValidationError("ragged row " + std::to_string(line_no) + ": expected " +
                                  std::to_string(width) + " cells, got " +
                                  std::to_string(cells.size()));
        std::vector<double> vals(cells.size());
        for (size_t j = 0; j < cells.size(); ++j) {
            if (!parse_double(cells[j], vals[j]))
                throw ValidationError("non-numeric cell at row " + std::to_string(line_no) +
                                      ", column " + std::to_string(j + 1) + ": '" +
                                      trim(cells[j]) + "'");
        }
        rows.push_back(std::move(vals));
    }

    if (rows.empty()) throw ValidationError("no data rows");
    size_t ncols = rows[0].size();
    if (ncols < 2) throw ValidationError("need at least two columns (carrier + response)");

    size_t resp = ncols - 1;
    if (!opts.response_column.empty()) {
        if (header.empty())
            throw ValidationError("response column by name requires a header row");
        bool found = false;
        for (size_t j = 0; j < header.size(); ++j)
            if (header[j] == opts.response_column) {
                resp = j;
                found = true;
                break;
            }
        if (!found)
            throw ValidationError("response column '" + opts.response_column + "' not found");
    }

    Dataset ds;
    int n = static_cast<int>(rows.size());
    int p = static_cast<int>(ncols) - 1;
    ds.x = Matrix(n, p);
    ds.y.resize(n);
    for (int i = 0; i < n; ++i) {
        int jx = 0;
        for (size_t j = 0; j < ncols; ++j) {
            if (j == resp)
                ds.y[i] = rows[i][j];
            else
                ds.x(i, jx++) = rows[i][j];
        }
    }
    if (!header.empty()) {
        for (size_t j = 0; j < ncols; ++j)
            if (j != resp) ds.names.push_back(header[j]);
        ds.names.push_back(header[resp]);
    }
    ds.validate_for_fit();
    return ds;
}

Dataset load_csv(const std::string& path, const CsvOptions& opts) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), opts);
}

std::string to_csv(const Dataset& ds) {
    std::ostringstream out;
    out.precision(17);
    if (!ds.names.empty()) {
        for (int j = 0; j < ds.p(); ++j) out << ds.names[j] << ",";
        out << ds.names[ds.p()] << "\n";
    }
    for (int i = 0; i < ds.n(); ++i) {
        for (int j = 0; j < ds.p(); ++j) out << ds.x(i, j) << ",";
        out << ds.y[i] << "\n";
    }
    return out.str();
}

void write_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << to_csv(ds);
}

}  // namespace srreg
