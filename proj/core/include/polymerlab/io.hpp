#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace polymer {

// Round-trip decimal form (%.17g): parsing the text recovers the exact
// double, which is what makes byte-identical reruns meaningful.
std::string format_g17(double x);

// CSV with an optional leading block of '#' comment lines (configuration
// hash, provenance of the run), then one header row, then data rows.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path);

    void comment(const std::string& line);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);
    void row_cells(const std::vector<std::string>& cells);

  private:
    std::ofstream out_;
    std::size_t columns_ = 0;
    bool header_written_ = false;
};

void write_text_file(const std::string& path, const std::string& content);

}  // namespace polymer
