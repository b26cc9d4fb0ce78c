#include <charconv>
#include <fstream>
#include <system_error>

#include "cgd/experiment.hpp"

namespace cgd {

std::string format_double(double value) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw IoError("failed to format a double");
    return std::string(buf, end);
}

std::vector<std::string> csv_header(const RunRecord& record) {
    std::vector<std::string> cols = {"step", "loss", "smoothed_loss"};
    for (std::size_t i = 0; i < record.param_columns; ++i) cols.push_back("q" + std::to_string(i));
    for (std::size_t i = 0; i < record.eig_columns; ++i) cols.push_back("eig" + std::to_string(i));
    return cols;
}

std::string to_csv(const RunRecord& record) {
    std::string out;
    const auto header = csv_header(record);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i > 0) out += ',';
        out += header[i];
    }
    out += '\n';
    for (const RunRow& row : record.rows) {
        out += std::to_string(row.step);
        out += ',';
        out += format_double(row.loss);
        out += ',';
        out += format_double(row.smoothed_loss);
        for (double q : row.params) {
            out += ',';
            out += format_double(q);
        }
        for (double e : row.eigenvalues) {
            out += ',';
            out += format_double(e);
        }
        out += '\n';
    }
    return out;
}

void write_csv(const RunRecord& record, const std::filesystem::path& path) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open '" + path.string() + "' for writing");
    const std::string text = to_csv(record);
    file.write(text.data(), static_cast<std::streamsize>(text.size()));
    file.flush();
    if (!file) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace cgd
