// RFC-4180-style CSV emission and a small numeric reader for the tests.
// Floats are printed with %.17g so values round-trip exactly.
#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace viscodiff {

std::string format_double(double v);

class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void write_row(std::span<const std::string> cells);
    void write_row(std::span<const double> values);

  private:
    std::ostream& os_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column_index(const std::string& name) const;  // -1 when absent
    std::vector<double> column(const std::string& name) const;
    double cell(int row, const std::string& name) const;
};

CsvTable read_csv(std::istream& is);
CsvTable read_csv_file(const std::string& path);

}  // namespace viscodiff
