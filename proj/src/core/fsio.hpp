#pragma once

#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace nerkit {

/// Whole-file read; MissingFile when the path does not exist, IoError on
/// anything else.
std::string read_text_file(const std::string& path);

/// Open for (over)writing; IoError on failure.
std::ofstream open_output(const std::string& path);

/// Throws IoError if a stream went bad after writing.
void finish_output(std::ofstream& out, const std::string& path);

/// Split on '\n', tolerating trailing '\r' (files may come from anywhere).
std::vector<std::string> split_lines(std::string_view text);

std::vector<std::string> split_tsv(const std::string& line);

/// TSV field escaping for free text: \t, \n, \\ are escaped; everything else
/// passes through.
std::string tsv_escape(const std::string& s);
std::string tsv_unescape(const std::string& s);

}  // namespace nerkit
