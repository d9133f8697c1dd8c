#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace scalesep {

/// Flat key = value experiment manifest with dotted namespaces. A manifest
/// (plus the calibration ledger version) determines every output byte.
class Manifest {
  public:
    Manifest() = default;

    static Manifest parse(std::istream& in) {
        Manifest m;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            auto trim = [](std::string s) {
                auto b = s.find_first_not_of(" \t\r");
                auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            std::string t = trim(line);
            if (t.empty()) continue;
            auto eq = t.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("manifest line " + std::to_string(lineno) + ": expected key = value");
            std::string key = trim(t.substr(0, eq)), value = trim(t.substr(eq + 1));
            if (key.empty()) throw std::runtime_error("manifest line " + std::to_string(lineno) + ": empty key");
            m.entries_[key] = value;
        }
        return m;
    }

    static Manifest load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("manifest: cannot open " + path);
        return parse(in);
    }

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& dflt) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? dflt : it->second;
    }

    std::string require(const std::string& key) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) throw std::runtime_error("manifest: missing required key '" + key + "'");
        return it->second;
    }

    double get_double(const std::string& key, double dflt) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) return dflt;
        if (it->second == "inf") return std::numeric_limits<double>::infinity();
        return std::stod(it->second);
    }

    long get_int(const std::string& key, long dflt) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? dflt : std::stol(it->second);
    }

    std::uint64_t get_u64(const std::string& key, std::uint64_t dflt) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? dflt : std::stoull(it->second);
    }

    /// Comma-separated doubles; "inf" allowed.
    std::vector<double> get_list(const std::string& key, const std::vector<double>& dflt) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) return dflt;
        std::vector<double> out;
        std::stringstream ss(it->second);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            auto b = tok.find_first_not_of(" \t");
            auto e = tok.find_last_not_of(" \t");
            if (b == std::string::npos) continue;
            tok = tok.substr(b, e - b + 1);
            out.push_back(tok == "inf" ? std::numeric_limits<double>::infinity() : std::stod(tok));
        }
        return out;
    }

    void set(const std::string& key, const std::string& value) { entries_[key] = value; }

    /// Canonical listing: sorted key = value lines.
    std::string canonical() const {
        std::string out;
        for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
        return out;
    }

    /// FNV-1a 64 over the canonical listing; embedded in every output file.
    std::uint64_t hash() const {
        std::uint64_t h = 1469598103934665603ull;
        for (char c : canonical()) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
        return h;
    }

    std::string hash_hex() const {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
        return buf;
    }

  private:
    std::map<std::string, std::string> entries_;
};

}  // namespace scalesep
