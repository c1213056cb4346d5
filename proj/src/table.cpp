#include "besicomp/table.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "besicomp/arrangement.hpp"

namespace besicomp {

std::string format_real(double value) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

std::vector<ComplexityEntry> load_complexity_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open complexity table: " + path);
    std::string line;
    if (!std::getline(in, line) || csv_split(line) != std::vector<std::string>{"d", "C_d"}) {
        throw std::runtime_error("complexity table " + path + ": expected header d,C_d");
    }
    std::vector<ComplexityEntry> table;
    u64 previous = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = csv_split(line);
        if (fields.size() != 2) {
            throw std::runtime_error("complexity table " + path + ": bad row at line " +
                                     std::to_string(line_no));
        }
        ComplexityEntry entry;
        try {
            entry.d = std::stoull(fields[0]);
            entry.count = std::stoull(fields[1]);
        } catch (const std::exception&) {
            throw std::runtime_error("complexity table " + path + ": non-numeric row at line " +
                                     std::to_string(line_no));
        }
        if (!is_prime(entry.d) || entry.d <= previous) {
            throw std::runtime_error("complexity table " + path +
                                     ": rows must be strictly increasing primes (line " +
                                     std::to_string(line_no) + ")");
        }
        previous = entry.d;
        table.push_back(entry);
    }
    return table;
}

void save_complexity_table(const std::string& path, std::span<const ComplexityEntry> table) {
    std::ofstream out(path, std::ios::binary); // LF line endings everywhere
    if (!out) throw std::runtime_error("cannot write complexity table: " + path);
    out << "d,C_d\n";
    for (const ComplexityEntry& entry : table) {
        out << entry.d << ',' << entry.count << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void verify_complexity_table(std::span<const ComplexityEntry> table, unsigned workers) {
    if (table.empty()) return;
    const u64 hi = table.back().d;
    const auto rows = complexity_range(3, hi, workers);
    std::size_t r = 0;
    for (const ComplexityEntry& entry : table) {
        if (entry.d == 2) continue; // refused by complexity(); documented discrepancy
        while (r < rows.size() && rows[r].d < entry.d) ++r;
        if (r == rows.size() || rows[r].d != entry.d) {
            throw std::runtime_error("data integrity: no computed value for prime " +
                                     std::to_string(entry.d));
        }
        if (rows[r].count != entry.count) {
            throw std::runtime_error("data integrity: mismatch at prime " +
                                     std::to_string(entry.d) + " (table " +
                                     std::to_string(entry.count) + ", computed " +
                                     std::to_string(rows[r].count) + ")");
        }
    }
}

} // namespace besicomp
