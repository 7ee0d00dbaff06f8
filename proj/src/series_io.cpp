#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

#include "ssa/series.hpp"

namespace ssa {

namespace {

std::vector<std::string_view> split_row(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            cells.push_back(line.substr(pos));
            break;
        }
        cells.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return cells;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool parse_number(std::string_view cell, double& out) {
    cell = trim(cell);
    if (cell.empty()) return false;
    if (cell.front() == '+') cell.remove_prefix(1);
    const auto* first = cell.data();
    const auto* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace

MultivariateSeries parse_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::vector<std::string> header;
    std::size_t width = 0;
    std::size_t line_no = 0;

    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty()) continue;
        const auto cells = split_row(line);

        if (rows.empty() && header.empty()) {
            bool any_numeric = false;
            bool all_text = true;
            for (auto c : cells) {
                double v;
                if (parse_number(c, v))
                    any_numeric = true;
                else if (trim(c).empty())
                    all_text = false;
            }
            if (!any_numeric && all_text) {
                for (auto c : cells) header.emplace_back(trim(c));
                width = cells.size();
                continue;
            }
        }

        if (width == 0) width = cells.size();
        if (cells.size() != width)
            throw ParseError("row " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                                 " cells, expected " + std::to_string(width),
                             line_no, std::min(cells.size(), width) + 1);
        std::vector<double> row(width);
        for (std::size_t j = 0; j < width; ++j) {
            if (!parse_number(cells[j], row[j]))
                throw ParseError("non-numeric cell '" + std::string(trim(cells[j])) + "' at row " +
                                     std::to_string(line_no) + " col " + std::to_string(j + 1),
                                 line_no, j + 1);
        }
        rows.push_back(std::move(row));
    }

    if (rows.empty()) throw ParseError("no data rows", line_no, 0);
    if (rows.size() < 2) throw ParseError("a series needs at least 2 rows", line_no, 0);

    Matrix<double> values(static_cast<Index>(rows.size()), static_cast<Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < width; ++j) values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    return MultivariateSeries(std::move(values), std::move(header));
}

MultivariateSeries read_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_csv(ss.str());
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    (void)ec;
    return std::string(buf, ptr);
}

std::string format_csv(const MultivariateSeries& series) {
    std::string out;
    const auto& names = series.names();
    for (std::size_t j = 0; j < names.size(); ++j) {
        if (j) out += ',';
        out += names[j];
    }
    out += '\n';
    const auto& v = series.values();
    for (Index i = 0; i < v.rows(); ++i) {
        for (Index j = 0; j < v.cols(); ++j) {
            if (j) out += ',';
            out += format_double(v(i, j));
        }
        out += '\n';
    }
    return out;
}

void write_csv(const MultivariateSeries& series, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write '" + path + "'");
    f << format_csv(series);
}

}  // namespace ssa
