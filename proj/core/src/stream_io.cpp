#include "rankload/stream_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "rankload/errors.hpp"

namespace rankload {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string at_line(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

double parse_score_text(std::string_view text, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError(at_line(line, "invalid score \"" + std::string(text) + "\""));
  }
  if (!std::isfinite(value)) throw ParseError(at_line(line, "non-finite score"));
  return value;
}

Instant parse_ts_text(std::string_view text, std::size_t line) {
  const auto ts = parse_instant(text);
  if (!ts) throw ParseError(at_line(line, "unparseable timestamp \"" + std::string(text) + "\""));
  return *ts;
}

std::string shortest_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

// --- CSV ------------------------------------------------------------------

struct CsvField {
  std::string value;
  bool quoted = false;
};

// RFC 4180 reader over the whole document; quoted fields may contain commas,
// quotes (doubled) and newlines.
class CsvReader {
public:
  explicit CsvReader(std::string_view text) : text_(text) {}

  bool done() const { return pos_ >= text_.size(); }
  std::size_t line() const { return line_; }

  std::vector<CsvField> next_row() {
    std::vector<CsvField> row;
    CsvField field;
    bool in_quotes = false;
    bool saw_any = false;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (in_quotes) {
        if (c == '"') {
          if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '"') {
            field.value += '"';
            pos_ += 2;
          } else {
            in_quotes = false;
            ++pos_;
          }
        } else {
          if (c == '\n') ++line_;
          field.value += c;
          ++pos_;
        }
        continue;
      }
      if (c == '"' && field.value.empty() && !field.quoted) {
        in_quotes = true;
        field.quoted = true;
        saw_any = true;
        ++pos_;
      } else if (c == ',') {
        row.push_back(std::move(field));
        field = {};
        saw_any = true;
        ++pos_;
      } else if (c == '\r' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '\n') {
        pos_ += 2;
        ++line_;
        break;
      } else if (c == '\n') {
        ++pos_;
        ++line_;
        break;
      } else {
        field.value += c;
        saw_any = true;
        ++pos_;
      }
    }
    if (in_quotes) throw ParseError(at_line(line_, "unterminated quoted field"));
    if (saw_any || !row.empty()) row.push_back(std::move(field));
    return row;
  }

private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

void append_csv_field(std::string& out, std::string_view value, bool force_quotes) {
  const bool needs_quotes =
      force_quotes || value.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) {
    out += value;
    return;
  }
  out += '"';
  for (const char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

constexpr std::string_view kCsvHeader = "id,ts,score,label,text";

Stream load_csv(std::string_view bytes) {
  CsvReader reader(bytes);
  if (reader.done()) return Stream{};
  const auto header = reader.next_row();
  std::string joined;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) joined += ',';
    joined += header[i].value;
  }
  if (joined != kCsvHeader) {
    throw ParseError("missing or wrong CSV header; expected \"" + std::string(kCsvHeader) + "\"");
  }
  std::vector<Message> messages;
  while (!reader.done()) {
    const std::size_t line = reader.line();
    auto row = reader.next_row();
    if (row.empty()) continue;
    if (row.size() != 5) {
      throw ParseError(at_line(line, "expected 5 fields, got " + std::to_string(row.size())));
    }
    Message m;
    m.id = std::move(row[0].value);
    if (m.id.empty()) throw ParseError(at_line(line, "empty message id"));
    m.ts = parse_ts_text(row[1].value, line);
    m.score = parse_score_text(row[2].value, line);
    if (row[3].value == "1") {
      m.relevant = true;
    } else if (row[3].value == "0") {
      m.relevant = false;
    } else {
      throw ParseError(at_line(line, "unknown label token \"" + row[3].value + "\""));
    }
    // Unquoted empty text means "absent"; a quoted empty field is a present,
    // empty text. Keeps serialize/load a lossless round trip.
    if (!row[4].value.empty() || row[4].quoted) m.text = std::move(row[4].value);
    messages.push_back(std::move(m));
  }
  return Stream::create(std::move(messages));
}

std::string serialize_csv(const Stream& stream) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const Message& m : stream.messages()) {
    append_csv_field(out, m.id, false);
    out += ',';
    out += format_rfc3339(m.ts);
    out += ',';
    out += shortest_double(m.score);
    out += ',';
    out += m.relevant ? '1' : '0';
    out += ',';
    if (m.text) append_csv_field(out, *m.text, true);
    out += '\n';
  }
  return out;
}

// --- JSONL ------------------------------------------------------------------

Stream load_jsonl(std::string_view bytes) {
  std::vector<Message> messages;
  std::size_t line = 0;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    std::size_t eol = bytes.find('\n', pos);
    if (eol == std::string_view::npos) eol = bytes.size();
    std::string_view raw = bytes.substr(pos, eol - pos);
    pos = eol + 1;
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (raw.find_first_not_of(" \t") == std::string_view::npos) continue;

    ordered_json j;
    try {
      j = ordered_json::parse(raw);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(at_line(line, std::string("invalid JSON: ") + e.what()));
    }
    if (!j.is_object()) throw ParseError(at_line(line, "record is not a JSON object"));

    Message m;
    if (!j.contains("id") || !j["id"].is_string()) {
      throw ParseError(at_line(line, "missing or non-string \"id\""));
    }
    m.id = j["id"].get<std::string>();
    if (m.id.empty()) throw ParseError(at_line(line, "empty message id"));

    if (!j.contains("ts")) throw ParseError(at_line(line, "missing \"ts\""));
    const auto& ts = j["ts"];
    if (ts.is_string()) {
      m.ts = parse_ts_text(ts.get<std::string>(), line);
    } else if (ts.is_number_integer()) {
      m.ts = ts.get<std::int64_t>();
    } else {
      throw ParseError(at_line(line, "unparseable timestamp"));
    }

    if (!j.contains("score")) throw ParseError(at_line(line, "missing \"score\""));
    const auto& score = j["score"];
    if (score.is_number()) {
      m.score = score.get<double>();
      if (!std::isfinite(m.score)) throw ParseError(at_line(line, "non-finite score"));
    } else {
      throw ParseError(at_line(line, "non-finite score"));
    }

    if (!j.contains("label") || !j["label"].is_boolean()) {
      throw ParseError(at_line(line, "unknown label token"));
    }
    m.relevant = j["label"].get<bool>();

    if (j.contains("text") && !j["text"].is_null()) {
      if (!j["text"].is_string()) throw ParseError(at_line(line, "non-string \"text\""));
      m.text = j["text"].get<std::string>();
    }
    messages.push_back(std::move(m));
  }
  return Stream::create(std::move(messages));
}

std::string serialize_jsonl(const Stream& stream) {
  std::string out;
  for (const Message& m : stream.messages()) {
    ordered_json j;
    j["id"] = m.id;
    j["ts"] = format_rfc3339(m.ts);
    j["score"] = m.score;
    j["label"] = m.relevant;
    if (m.text) j["text"] = *m.text;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace

std::optional<StreamFormat> format_from_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return StreamFormat::csv;
  if (ext == ".jsonl") return StreamFormat::jsonl;
  return std::nullopt;
}

Stream load_stream(std::string_view bytes, StreamFormat format) {
  return format == StreamFormat::csv ? load_csv(bytes) : load_jsonl(bytes);
}

std::string serialize_stream(const Stream& stream, StreamFormat format) {
  return format == StreamFormat::csv ? serialize_csv(stream) : serialize_jsonl(stream);
}

Stream load_stream_file(const std::filesystem::path& path, std::optional<StreamFormat> format) {
  const StreamFormat f = format ? *format : format_from_path(path).value_or(StreamFormat::jsonl);
  return load_stream(read_file(path), f);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open \"" + path.string() + "\" for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open \"" + tmp.string() + "\" for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("short write to \"" + tmp.string() + "\"");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace rankload
