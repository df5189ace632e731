#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "mutforge/errors.hpp"

namespace mutforge {

// Byte offsets into a file plus the 1-based line/column positions they map to.
// Columns count bytes within the line.
struct SyntaxSpan {
    std::size_t start_offset = 0;
    std::size_t end_offset = 0;
    int start_line = 1;
    int start_col = 1;
    int end_line = 1;
    int end_col = 1;

    bool operator==(const SyntaxSpan& other) const {
        return start_offset == other.start_offset && end_offset == other.end_offset;
    }
    bool contains(const SyntaxSpan& inner) const {
        return start_offset <= inner.start_offset && inner.end_offset <= end_offset;
    }
    std::size_t length() const { return end_offset - start_offset; }
};

// Maps byte offsets to 1-based (line, col). Derived solely from the text, so
// recomputation is deterministic. A line break is '\n'; '\r' counts as an
// ordinary byte within its line.
class LineIndex {
public:
    LineIndex() : line_starts_{0} {}

    explicit LineIndex(std::string_view text) : line_starts_{0} {
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (text[i] == '\n') line_starts_.push_back(i + 1);
        }
    }

    int line_of(std::size_t offset) const {
        auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
        return static_cast<int>(it - line_starts_.begin());
    }

    int col_of(std::size_t offset) const {
        int line = line_of(offset);
        return static_cast<int>(offset - line_starts_[static_cast<std::size_t>(line - 1)]) + 1;
    }

    std::size_t line_start(int line) const {
        return line_starts_[static_cast<std::size_t>(line - 1)];
    }

    int line_count() const { return static_cast<int>(line_starts_.size()); }

private:
    std::vector<std::size_t> line_starts_;
};

struct SourceFile {
    std::string path;        // relative to the project root
    std::string text;        // full UTF-8 source text
    std::string language_id; // language-profile identifier
    LineIndex lines;

    SourceFile() = default;
    SourceFile(std::string path, std::string text, std::string language_id)
        : path(std::move(path)), text(std::move(text)), language_id(std::move(language_id)),
          lines(this->text) {}

    std::string_view slice(const SyntaxSpan& span) const {
        return std::string_view(text).substr(span.start_offset, span.length());
    }

    // Builds a span over [start, end) with positions filled in from the index.
    SyntaxSpan span_at(std::size_t start, std::size_t end) const {
        SyntaxSpan s;
        s.start_offset = start;
        s.end_offset = end;
        s.start_line = lines.line_of(start);
        s.start_col = lines.col_of(start);
        s.end_line = lines.line_of(end);
        s.end_col = lines.col_of(end);
        return s;
    }
};

inline std::string read_text_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + p.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return data;
}

inline void write_text_file(const std::filesystem::path& p, std::string_view content) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write file: " + p.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("short write: " + p.string());
}

} // namespace mutforge
