// SPDX-License-Identifier: Apache-2.0

#include "hybridfb/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace hybridfb {

CsvWriter::CsvWriter(const std::string& path) : os_(path) {
    if (!os_) throw std::runtime_error("cannot open for writing: " + path);
}

void CsvWriter::comment(const std::string& text) { os_ << "# " << text << "\n"; }

namespace {
void write_cells(std::ofstream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ',';
        os << cells[i];
    }
    os << '\n';
}
} // namespace

void CsvWriter::header(const std::vector<std::string>& columns) { write_cells(os_, columns); }
void CsvWriter::row(const std::vector<std::string>& cells) { write_cells(os_, cells); }

std::string csv_num(double v) {
    char buf[40];
    // %.12g keeps sums/CI stable to well below any tolerance in use while
    // staying compact; the locale is never changed from "C", so the decimal
    // point is always '.'.
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string csv_int(long long v) { return std::to_string(v); }
std::string csv_uint(unsigned long long v) { return std::to_string(v); }

} // namespace hybridfb
