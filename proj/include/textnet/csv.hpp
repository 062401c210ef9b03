#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace textnet::csv {

// Minimal CSV support: comma separator, double-quote escaping, no embedded
// newlines inside fields. Enough for manifests and the matrix/report files.
std::vector<std::vector<std::string>> read(const std::filesystem::path& path);
std::vector<std::vector<std::string>> parse(const std::string& bytes);

std::string escape(const std::string& field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

// Round-trip-safe double formatting (%.17g). `sig` overrides the digit count.
std::string format_double(double value, int sig = 17);
double parse_double(const std::string& text);

}  // namespace textnet::csv
