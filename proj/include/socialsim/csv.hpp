#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "socialsim/errors.hpp"

namespace socialsim {

// Thin CSV emitter. Doubles print with 17 significant digits so outputs are
// exact and diffable; integers print as-is.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header)
        : path_(path), out_(path, std::ios::binary) {
        if (!out_) {
            throw ModelError("cannot open output file " + path);
        }
        write_row_raw(header);
    }

    void begin_row() { first_in_row_ = true; }

    void field(long long v) { put(std::to_string(v)); }
    void field(int v) { put(std::to_string(v)); }

    void field(double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        put(buf);
    }

    void field(const std::string& s) { put(s); }

    void end_row() {
        out_ << '\n';
        ++data_rows_;
    }

    void close() {
        out_.close();
        if (!out_) {
            throw ModelError("failed writing output file " + path_);
        }
    }

    long long data_rows() const { return data_rows_; }
    const std::string& path() const { return path_; }

private:
    void put(const std::string& s) {
        if (!first_in_row_) out_ << ',';
        out_ << s;
        first_in_row_ = false;
    }

    void write_row_raw(const std::vector<std::string>& cells) {
        begin_row();
        for (const auto& c : cells) put(c);
        out_ << '\n';
    }

    std::string path_;
    std::ofstream out_;
    bool first_in_row_ = true;
    long long data_rows_ = 0;
};

}  // namespace socialsim
