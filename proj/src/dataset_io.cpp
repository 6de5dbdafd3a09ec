#include "dtwtc/dataset_io.hpp"

#include "dtwtc/error.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace dtwtc {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

double parse_double(const std::string& tok, const std::filesystem::path& file,
                    std::size_t line_no, std::size_t col) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + tok.size())
        throw ParseError(file.string() + ":" + std::to_string(line_no) + ":" +
                         std::to_string(col) + ": not a number: '" + tok + "'");
    return v;
}

long parse_long(const std::string& tok, const std::filesystem::path& file,
                std::size_t line_no) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    long v = std::strtol(begin, &end, 10);
    if (end != begin + tok.size())
        throw ParseError(file.string() + ":" + std::to_string(line_no) +
                         ": not an integer: '" + tok + "'");
    return v;
}

// rows x cols matrix, one sample per row.
std::vector<std::vector<double>> load_signal_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw FormatError("cannot open signal file: " + file.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t cols = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line[0] == '#') continue; // artifact header
        auto toks = split_ws(line);
        if (toks.empty()) continue; // tolerate blank lines
        if (cols == 0) cols = toks.size();
        if (toks.size() != cols)
            throw FormatError(file.string() + ":" + std::to_string(line_no) +
                              ": expected " + std::to_string(cols) + " columns, got " +
                              std::to_string(toks.size()));
        std::vector<double> row(toks.size());
        for (std::size_t c = 0; c < toks.size(); ++c)
            row[c] = parse_double(toks[c], file, line_no, c + 1);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw FormatError("empty signal file: " + file.string());
    return rows;
}

} // namespace

Dataset load_uci_layout(const std::vector<std::filesystem::path>& signal_paths,
                        const std::filesystem::path& label_path) {
    if (signal_paths.empty()) throw DomainError("load_uci_layout: no signal files");

    std::vector<std::vector<std::vector<double>>> channels;
    channels.reserve(signal_paths.size());
    for (const auto& path : signal_paths) channels.push_back(load_signal_file(path));

    const std::size_t n = channels.front().size();
    const std::size_t m = channels.front().front().size();
    for (std::size_t c = 1; c < channels.size(); ++c) {
        if (channels[c].size() != n)
            throw ConsistencyError("signal files disagree on sample count: " +
                                   signal_paths[c].string() + " has " +
                                   std::to_string(channels[c].size()) + " rows, expected " +
                                   std::to_string(n));
        if (channels[c].front().size() != m)
            throw ConsistencyError("signal files disagree on series length: " +
                                   signal_paths[c].string() + " has " +
                                   std::to_string(channels[c].front().size()) +
                                   " columns, expected " + std::to_string(m));
    }

    std::ifstream in(label_path);
    if (!in) throw FormatError("cannot open label file: " + label_path.string());
    std::vector<int> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line[0] == '#') continue;
        auto toks = split_ws(line);
        if (toks.empty()) continue;
        if (toks.size() != 1)
            throw FormatError(label_path.string() + ":" + std::to_string(line_no) +
                              ": expected a single integer label");
        labels.push_back(static_cast<int>(parse_long(toks[0], label_path, line_no)));
    }
    if (labels.size() != n)
        throw ConsistencyError("label file row count (" + std::to_string(labels.size()) +
                               ") does not match signal row count (" + std::to_string(n) + ")");

    const std::size_t p = channels.size();
    Dataset data;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> flat(m * p);
        for (std::size_t t = 0; t < m; ++t)
            for (std::size_t c = 0; c < p; ++c) flat[t * p + c] = channels[c][i][t];
        data.add(LabeledSeries{TimeSeries(std::move(flat), p), labels[i], std::nullopt});
    }
    return data;
}

void save_uci_layout(const Dataset& data,
                     const std::vector<std::filesystem::path>& signal_paths,
                     const std::filesystem::path& label_path,
                     const std::vector<std::string>& header_lines) {
    if (data.empty()) throw DomainError("save_uci_layout: empty dataset");
    if (signal_paths.size() != data.dim())
        throw DomainError("save_uci_layout: need one signal path per dimension");

    auto write_headers = [&](std::ofstream& out) {
        for (const auto& h : header_lines) out << "# " << h << '\n';
    };

    const std::size_t m = data.length();
    for (std::size_t c = 0; c < signal_paths.size(); ++c) {
        std::ofstream out(signal_paths[c]);
        if (!out) throw FormatError("cannot write signal file: " + signal_paths[c].string());
        write_headers(out);
        for (const auto& sample : data.samples()) {
            for (std::size_t t = 0; t < m; ++t) {
                if (t) out << ' ';
                out << format_g17(sample.series(t, c));
            }
            out << '\n';
        }
    }
    std::ofstream out(label_path);
    if (!out) throw FormatError("cannot write label file: " + label_path.string());
    write_headers(out);
    for (const auto& sample : data.samples()) out << sample.label << '\n';
}

} // namespace dtwtc
