#include "biostab/csv.hpp"

#include <cstdio>

#include "biostab/errors.hpp"

namespace biostab {

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.11e", v);
    return buf;
}

CsvWriter::CsvWriter(std::filesystem::path path)
    : final_path_(std::move(path)), tmp_path_(final_path_.string() + ".tmp") {
    if (final_path_.has_parent_path())
        std::filesystem::create_directories(final_path_.parent_path());
    out_.open(tmp_path_, std::ios::trunc);
    if (!out_) throw ValidationError("CsvWriter: cannot open " + tmp_path_.string());
}

CsvWriter::~CsvWriter() {
    if (!committed_) {
        out_.close();
        std::error_code ec;
        std::filesystem::remove(tmp_path_, ec);
    }
}

void CsvWriter::comment(const std::string& text) { out_ << "# " << text << "\n"; }

void CsvWriter::header(const std::vector<std::string>& columns) { row(columns); }

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ",";
        out_ << cells[i];
    }
    out_ << "\n";
}

void CsvWriter::commit() {
    out_.flush();
    if (!out_) throw ValidationError("CsvWriter: write failed for " + tmp_path_.string());
    out_.close();
    std::filesystem::rename(tmp_path_, final_path_);
    committed_ = true;
}

}  // namespace biostab
