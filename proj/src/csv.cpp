#include "textnet/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "textnet/error.hpp"

namespace textnet::csv {

static std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::vector<std::vector<std::string>> read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::vector<std::vector<std::string>> parse(const std::string& bytes) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(bytes);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(split_line(line));
    }
    return rows;
}

std::string escape(const std::string& field) {
    bool needs = field.find_first_of(",\"\n") != std::string::npos;
    if (!needs) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << escape(fields[i]);
    }
    out << '\n';
}

std::string format_double(double value, int sig) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", sig, value);
    return buf;
}

double parse_double(const std::string& text) {
    try {
        size_t pos = 0;
        double v = std::stod(text, &pos);
        if (pos != text.size()) throw DataError("trailing characters in number: " + text);
        return v;
    } catch (const std::invalid_argument&) {
        throw DataError("not a number: " + text);
    } catch (const std::out_of_range&) {
        throw DataError("number out of range: " + text);
    }
}

}  // namespace textnet::csv
