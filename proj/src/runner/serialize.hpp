#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace runner {

// Shortest decimal that round-trips to the same double, the diff-friendly
// form all CSV output uses.
inline std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

class CsvBuilder {
public:
    explicit CsvBuilder(std::initializer_list<const char*> columns) {
        bool first = true;
        for (const char* c : columns) {
            if (!first) text_ += ',';
            text_ += c;
            first = false;
        }
        text_ += '\n';
        width_ = columns.size();
    }

    CsvBuilder& cell(const std::string& v) {
        if (in_row_ > 0) text_ += ',';
        text_ += v;
        ++in_row_;
        if (in_row_ == width_) {
            text_ += '\n';
            in_row_ = 0;
        }
        return *this;
    }

    CsvBuilder& cell(double v) { return cell(format_double(v)); }
    CsvBuilder& cell(int v) { return cell(std::to_string(v)); }

    const std::string& str() const { return text_; }

private:
    std::string text_;
    size_t width_ = 0;
    size_t in_row_ = 0;
};

}  // namespace runner
