#include "slsamp/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace slsamp {

std::string format_g17(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string format_hex16(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf);
}

void OutputTable::row(std::vector<std::string> cells) {
    if (cells.size() != columns.size())
        throw IoError("table row width does not match the column count");
    rows.push_back(std::move(cells));
}

std::string render_csv(const OutputTable& t) {
    std::string out;
    out += "# slsamp " + t.tool + " config=" + format_hex16(t.fingerprint) + "\n";
    for (const auto& n : t.notes) out += "# " + n + "\n";
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        if (c) out += ",";
        out += t.columns[c];
    }
    out += "\n";
    for (const auto& r : t.rows) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (c) out += ",";
            out += r[c];
        }
        out += "\n";
    }
    return out;
}

std::string json_quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    out += "\"";
    return out;
}

bool cell_is_number(const std::string& s) {
    if (s.empty()) return false;
    char first = s[0];
    if (!(first == '-' || first == '+' || first == '.' || (first >= '0' && first <= '9')))
        return false;  // rejects most inf/nan spellings, which JSON cannot carry
    const char* begin = s.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    // "-inf" passes the first-char screen and overflow parses to infinity;
    // either way the cell has no valid JSON number form
    return end == begin + s.size() && std::isfinite(v);
}

std::string render_json(const OutputTable& t) {
    std::string out = "{\n";
    out += "  \"tool\": " + json_quote(t.tool) + ",\n";
    out += "  \"config\": " + json_quote(format_hex16(t.fingerprint)) + ",\n";
    out += "  \"notes\": [";
    for (std::size_t i = 0; i < t.notes.size(); ++i) {
        if (i) out += ", ";
        out += json_quote(t.notes[i]);
    }
    out += "],\n  \"columns\": [";
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out += ", ";
        out += json_quote(t.columns[i]);
    }
    out += "],\n  \"rows\": [\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        out += "    [";
        for (std::size_t c = 0; c < t.rows[r].size(); ++c) {
            if (c) out += ", ";
            const std::string& cell = t.rows[r][c];
            out += cell_is_number(cell) ? cell : json_quote(cell);
        }
        out += r + 1 < t.rows.size() ? "],\n" : "]\n";
    }
    out += "  ]\n}\n";
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open for writing");
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) throw IoError(path + ": write failed");
}

}  // namespace slsamp
