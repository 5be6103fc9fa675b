#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace biostab {

/// 12-significant-digit scientific notation used by every emitted table.
std::string csv_num(double v);

/// CSV writer with write-temp-then-rename commit, so failed runs leave no
/// partial file behind. Comment lines are prefixed with '#'.
class CsvWriter {
public:
    explicit CsvWriter(std::filesystem::path path);
    ~CsvWriter();

    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void comment(const std::string& text);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& cells);
    void commit();

private:
    std::filesystem::path final_path_, tmp_path_;
    std::ofstream out_;
    bool committed_ = false;
};

}  // namespace biostab
