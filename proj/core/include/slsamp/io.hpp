#pragma once

// Deterministic table emission for the CLI: CSV or JSON with %.17g numbers,
// '.' decimal point regardless of locale, LF line endings, and a header
// carrying the producing tool plus the config fingerprint. Identical input
// must give identical bytes, whatever the thread count was.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace slsamp {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// shortest-of-17-significant-digits rendering, locale independent
std::string format_g17(double v);
std::string format_hex16(std::uint64_t v);

struct OutputTable {
    std::string tool;
    std::uint64_t fingerprint = 0;
    std::vector<std::string> notes;    // extra comment lines under the header
    std::vector<std::string> columns;  // "name [unit]"
    std::vector<std::vector<std::string>> rows;

    void row(std::vector<std::string> cells);
};

std::string render_csv(const OutputTable& t);
std::string render_json(const OutputTable& t);

std::string json_quote(const std::string& s);

// true when the cell can be emitted as a bare JSON number
bool cell_is_number(const std::string& s);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace slsamp
