#pragma once

#include <filesystem>
#include <string>

namespace parkassign::io {

// Shortest decimal text that round-trips to the same double.
std::string shortest(double v);

std::string fixed(double v, int decimals);

// Writes the whole file at once; throws std::runtime_error naming the path.
void write_text(const std::filesystem::path& path, const std::string& text);

std::string read_text(const std::filesystem::path& path);

}  // namespace parkassign::io
