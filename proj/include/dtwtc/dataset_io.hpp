#pragma once

#include "dtwtc/time_series.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace dtwtc {

/// Loads the UCI "Inertial Signals" layout: one whitespace-separated text file
/// per channel (one sample per row, fixed column count = series length) plus a
/// parallel label file with one integer per row. Sample i gets channel c from
/// row i of signal file c.
Dataset load_uci_layout(const std::vector<std::filesystem::path>& signal_paths,
                        const std::filesystem::path& label_path);

/// Writes a dataset back to the same layout. Values are formatted with 17
/// significant digits so a reload is bit-identical. Header lines, if any, are
/// emitted as leading '#' comments in every file (the loader skips them).
void save_uci_layout(const Dataset& data,
                     const std::vector<std::filesystem::path>& signal_paths,
                     const std::filesystem::path& label_path,
                     const std::vector<std::string>& header_lines = {});

// 17-significant-digit decimal formatting; round-trips any finite double.
std::string format_g17(double v);

} // namespace dtwtc
