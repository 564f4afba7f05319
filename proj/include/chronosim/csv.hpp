#ifndef CHRONOSIM_CSV_HPP
#define CHRONOSIM_CSV_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "chronosim/errors.hpp"

namespace chronosim {

// 17 significant digits: enough for a lossless double round-trip.
inline std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Writes via a temp file plus rename so readers never see a partial file.
inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open for writing: " + tmp.string());
        }
        out << content;
        if (!out) {
            throw IoError("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw IoError("rename failed: " + path.string() + ": " + ec.message());
    }
}

}  // namespace chronosim

#endif
