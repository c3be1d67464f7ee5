#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "rankload/message.hpp"

namespace rankload {

enum class StreamFormat { jsonl, csv };

// ".csv" -> csv, ".jsonl" -> jsonl, anything else -> nullopt.
std::optional<StreamFormat> format_from_path(const std::filesystem::path& path);

// Parses a stream from raw bytes. JSONL records look like
//   {"id": "...", "ts": "2013-06-20T14:03:00Z", "score": 0.83, "label": true, "text": "..."}
// CSV files carry the exact header `id,ts,score,label,text`. Timestamps are
// RFC 3339 strings or integer epoch seconds. Throws ParseError on duplicate
// ids, unparseable timestamps, non-finite scores, or unknown label tokens.
Stream load_stream(std::string_view bytes, StreamFormat format);

std::string serialize_stream(const Stream& stream, StreamFormat format);

Stream load_stream_file(const std::filesystem::path& path,
                        std::optional<StreamFormat> format = std::nullopt);

std::string read_file(const std::filesystem::path& path);

// Writes via a temporary file in the same directory plus rename, so partial
// runs never leave a truncated output behind.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace rankload
