#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cpcmine {

// Input that violates a documented file format. Line is 1-based, 0 when the
// error is not line-addressable.
class ParseError : public std::invalid_argument {
public:
    ParseError(std::string file, std::size_t line, const std::string& what);

    const std::string& file() const { return file_; }
    std::size_t line() const { return line_; }

private:
    std::string file_;
    std::size_t line_ = 0;
};

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

std::vector<std::string> split(std::string_view text, char delim);
std::string trim(std::string_view text);
std::string to_lower(std::string_view text);

// One CSV record per line; double quotes delimit fields that contain commas
// or quotes, with "" as the embedded-quote escape. Unquoted fields are
// trimmed. Embedded newlines are not supported.
std::vector<std::string> parse_csv_line(std::string_view line, const std::string& file,
                                        std::size_t lineno);
std::string csv_quote(std::string_view field);

long parse_long(std::string_view text, const std::string& file, std::size_t lineno);
double parse_double(std::string_view text, const std::string& file, std::size_t lineno);

// Shortest text that round-trips a double (printf %.17g).
std::string format_double(double value);

// Calls fn(line, lineno) for every line; strips one trailing '\r'.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        if (pos == text.size()) {
            break;
        }
        std::size_t nl = text.find('\n', pos);
        std::string_view line = (nl == std::string_view::npos)
                                    ? text.substr(pos)
                                    : text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        fn(line, ++lineno);
        if (nl == std::string_view::npos) {
            break;
        }
        pos = nl + 1;
    }
}

// FNV-1a over raw bytes. Not cryptographic; used for change detection and
// reproducibility checks only.
std::uint64_t fnv1a64(std::string_view bytes);
std::string digest_bytes(std::string_view bytes);
std::string digest_file(const std::filesystem::path& path);

}  // namespace cpcmine
