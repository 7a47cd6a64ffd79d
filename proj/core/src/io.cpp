#include "polymerlab/io.hpp"

#include <cstdio>
#include <stdexcept>

namespace polymer {

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open output file: " + path);
}

void CsvWriter::comment(const std::string& line) {
    if (header_written_)
        throw std::logic_error("CsvWriter: comments must precede the header");
    out_ << "# " << line << "\n";
}

void CsvWriter::header(const std::vector<std::string>& columns) {
    if (header_written_) throw std::logic_error("CsvWriter: header already written");
    columns_ = columns.size();
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
    header_written_ = true;
}

void CsvWriter::row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (const double v : values) cells.push_back(format_g17(v));
    row_cells(cells);
}

void CsvWriter::row_cells(const std::vector<std::string>& cells) {
    if (!header_written_) throw std::logic_error("CsvWriter: header must come first");
    if (cells.size() != columns_)
        throw std::logic_error("CsvWriter: row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i)
        out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
}

}  // namespace polymer
