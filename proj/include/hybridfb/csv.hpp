// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace hybridfb {

// Minimal CSV writer: '#' comment lines, one header row, '.' decimal
// separator, fixed significant digits so identical runs serialize
// identically byte for byte.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path);
    void comment(const std::string& text);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& cells);
    bool good() const { return static_cast<bool>(os_); }

  private:
    std::ofstream os_;
};

std::string csv_num(double v); // shortest round-trip-stable form
std::string csv_int(long long v);
std::string csv_uint(unsigned long long v);

} // namespace hybridfb
