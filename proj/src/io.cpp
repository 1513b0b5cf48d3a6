#include "hopspec/io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace hopspec {

std::string_view library_version() noexcept { return HOPSPEC_VERSION; }

std::string format_number(double x) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return std::string(buf, end);
}

std::string spectrum_csv(const SpectrumResult& result) {
    result.validate();
    std::string out;
    out.reserve(result.f.size() * 48);
    const bool two_d = !result.axis_values.empty();
    out += two_d ? result.axis_name + ",omega,F\n" : "omega,F\n";
    for (std::size_t r = 0; r < result.rows(); ++r) {
        const auto row = result.row(r);
        for (std::size_t i = 0; i < result.omega.size(); ++i) {
            if (two_d) {
                out += format_number(result.axis_values[r]);
                out += ',';
            }
            out += format_number(result.omega[i]);
            out += ',';
            out += format_number(row[i]);
            out += '\n';
        }
    }
    return out;
}

std::string mode_table_csv(const ModeTable& table) {
    std::string out = table.geometry == Geometry::Ring ? "j,omega,f,f_printed\n" : "j,omega,f,f_closed_form\n";
    for (const auto& e : table.entries) {
        out += std::to_string(e.j) + ',' + format_number(e.omega) + ',' + format_number(e.strength) + ',' +
               format_number(e.closed_form) + '\n';
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        f << text;
        if (!f) throw std::runtime_error("write to " + tmp.string() + " failed");
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace hopspec
