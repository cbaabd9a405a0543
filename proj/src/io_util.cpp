#include "cpcmine/io_util.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cpcmine {

namespace {

std::string location_prefix(const std::string& file, std::size_t line) {
    std::ostringstream os;
    os << file;
    if (line > 0) {
        os << ":" << line;
    }
    os << ": ";
    return os.str();
}

}  // namespace

ParseError::ParseError(std::string file, std::size_t line, const std::string& what)
    : std::invalid_argument(location_prefix(file, line) + what),
      file_(std::move(file)),
      line_(line) {}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("cannot open file: " + path.string());
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write file: " + path.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

std::vector<std::string> split(std::string_view text, char delim) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = text.find(delim, pos);
        if (next == std::string_view::npos) {
            out.emplace_back(text.substr(pos));
            return out;
        }
        out.emplace_back(text.substr(pos, next - pos));
        pos = next + 1;
    }
}

std::string trim(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) {
        ++begin;
    }
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) {
        --end;
    }
    return std::string(text.substr(begin, end - begin));
}

std::string to_lower(std::string_view text) {
    std::string out(text);
    for (char& c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

std::vector<std::string> parse_csv_line(std::string_view line, const std::string& file,
                                        std::size_t lineno) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    bool was_quoted = false;
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    i += 2;
                    continue;
                }
                quoted = false;
                ++i;
                continue;
            }
            current.push_back(c);
            ++i;
            continue;
        }
        if (c == '"' && trim(current).empty()) {
            quoted = true;
            was_quoted = true;
            current.clear();
            ++i;
            continue;
        }
        if (c == ',') {
            fields.push_back(was_quoted ? current : trim(current));
            current.clear();
            was_quoted = false;
            ++i;
            continue;
        }
        current.push_back(c);
        ++i;
    }
    if (quoted) {
        throw ParseError(file, lineno, "unterminated quoted field");
    }
    fields.push_back(was_quoted ? current : trim(current));
    return fields;
}

std::string csv_quote(std::string_view field) {
    bool needs_quote = field.find_first_of(",\"\n\r") != std::string_view::npos;
    if (!needs_quote) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += "\"\"";
        } else {
            out.push_back(c);
        }
    }
    out += "\"";
    return out;
}

long parse_long(std::string_view text, const std::string& file, std::size_t lineno) {
    std::string s = trim(text);
    if (s.empty()) {
        throw ParseError(file, lineno, "expected integer, got empty field");
    }
    std::size_t used = 0;
    long value = 0;
    try {
        value = std::stol(s, &used);
    } catch (const std::exception&) {
        throw ParseError(file, lineno, "expected integer, got '" + s + "'");
    }
    if (used != s.size()) {
        throw ParseError(file, lineno, "expected integer, got '" + s + "'");
    }
    return value;
}

double parse_double(std::string_view text, const std::string& file, std::size_t lineno) {
    std::string s = trim(text);
    std::size_t used = 0;
    double value = 0;
    try {
        value = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ParseError(file, lineno, "expected number, got '" + s + "'");
    }
    if (used != s.size()) {
        throw ParseError(file, lineno, "expected number, got '" + s + "'");
    }
    return value;
}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= static_cast<std::uint64_t>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

std::string digest_bytes(std::string_view bytes) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

std::string digest_file(const std::filesystem::path& path) {
    return digest_bytes(read_text_file(path));
}

}  // namespace cpcmine
