#pragma once

#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace scalesep {

/// Deterministic CSV emitter: provenance comment lines, a header row, then
/// %.17g-formatted values. A sibling <name>.schema.json documents the
/// columns.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, std::vector<std::pair<std::string, std::string>> columns,
              const std::string& manifest_hash, const std::string& ledger_version)
        : path_(path), columns_(std::move(columns)) {
        out_.open(path);
        if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
        out_ << "# manifest_hash=" << manifest_hash << "\n";
        out_ << "# ledger_version=" << ledger_version << "\n";
        for (std::size_t i = 0; i < columns_.size(); ++i)
            out_ << columns_[i].first << (i + 1 < columns_.size() ? "," : "\n");
    }

    void row(const std::vector<double>& values) {
        if (values.size() != columns_.size())
            throw std::invalid_argument("CsvWriter: row width mismatch in " + path_);
        for (std::size_t i = 0; i < values.size(); ++i) {
            out_ << format(values[i]);
            out_ << (i + 1 < values.size() ? "," : "\n");
        }
    }

    void write_schema() const {
        nlohmann::ordered_json cols = nlohmann::ordered_json::array();
        for (const auto& [name, desc] : columns_)
            cols.push_back({{"name", name}, {"description", desc}});
        nlohmann::ordered_json j{{"file", path_}, {"columns", cols}};
        std::ofstream s(path_ + ".schema.json");
        s << j.dump(2) << "\n";
    }

    static std::string format(double v) {
        if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

  private:
    std::string path_;
    std::vector<std::pair<std::string, std::string>> columns_;
    std::ofstream out_;
};

}  // namespace scalesep
