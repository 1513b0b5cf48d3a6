// io.hpp: CSV and metadata serialization with round-trip number formatting

#pragma once

#include "hopspec/oracle.hpp"
#include "hopspec/spectrum.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace hopspec {

std::string_view library_version() noexcept;

// Shortest decimal representation that parses back to the same double.
std::string format_number(double x);

// "omega,F" rows, or "<axis>,omega,F" rows (axis-major) for 2-D results.
std::string spectrum_csv(const SpectrumResult& result);
std::string mode_table_csv(const ModeTable& table);

// Writes the text atomically enough for our purposes (temp file + rename).
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace hopspec
