#pragma once

#include <cstdio>
#include <cstdlib>
#include <limits>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "errors.hpp"

namespace flapmav {

/// Writes a `# schema: <name>/v<version>` line, then the header, then rows.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& schema, int version, const std::vector<std::string>& header)
        : out_(path), width_(header.size()) {
        if (!out_) throw ConfigError("cannot write '" + path + "'");
        out_ << "# schema: " << schema << "/v" << version << "\n";
        row_strings(header);
    }

    void row(const std::vector<double>& values) {
        std::vector<std::string> cells;
        cells.reserve(values.size());
        for (double v : values) cells.push_back(num(v));
        row_strings(cells);
    }

    void row_strings(const std::vector<std::string>& cells) {
        if (cells.size() != width_) throw DomainError("csv: row width does not match header");
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << "\n";
    }

    static std::string num(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.10g", v);
        return buf;
    }

private:
    std::ofstream out_;
    std::size_t width_;
};

struct CsvTable {
    std::string schema;
    SampleTable table;
};

/// Reads a numeric CSV written by CsvWriter. Non-numeric cells become NaN.
inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    CsvTable t;
    std::string line;
    int lineNo = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineNo;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string tag = "# schema: ";
            if (line.rfind(tag, 0) == 0) t.schema = line.substr(tag.size());
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!header) {
            t.table.columns = cells;
            header = true;
            continue;
        }
        if (cells.size() != t.table.columns.size())
            throw ConfigError("expected " + std::to_string(t.table.columns.size()) + " cells", lineNo);
        std::vector<double> row;
        for (const auto& c : cells) {
            char* end = nullptr;
            const double v = std::strtod(c.c_str(), &end);
            row.push_back(end != c.c_str() && *end == '\0' ? v : std::numeric_limits<double>::quiet_NaN());
        }
        t.table.rows.push_back(std::move(row));
    }
    if (!header) throw ConfigError("'" + path + "' has no header row");
    return t;
}

} // namespace flapmav
