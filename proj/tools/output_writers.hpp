#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace blowup::cli {

inline std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Minimal JSON emitter with caller-fixed field order and %.17g floats, so
/// identical runs produce byte-identical output.
class JsonWriter {
public:
    void begin_object() { sep(); out_ += '{'; stack_.push_back(true); }
    void end_object() { out_ += '}'; stack_.pop_back(); fresh_ = false; }
    void begin_array() { sep(); out_ += '['; stack_.push_back(true); }
    void end_array() { out_ += ']'; stack_.pop_back(); fresh_ = false; }

    void key(const std::string& k) {
        sep();
        out_ += '"';
        out_ += k;
        out_ += "\":";
        fresh_ = true;
    }
    void value(double v) { sep(); out_ += fmt_num(v); fresh_ = false; }
    void value(long v) { sep(); out_ += std::to_string(v); fresh_ = false; }
    void value(int v) { value(static_cast<long>(v)); }
    void value(bool v) { sep(); out_ += v ? "true" : "false"; fresh_ = false; }
    void value(const std::string& s) {
        sep();
        out_ += '"';
        for (char c : s) {
            if (c == '"' || c == '\\') out_ += '\\';
            out_ += c;
        }
        out_ += '"';
        fresh_ = false;
    }
    void value(const char* s) { value(std::string(s)); }

    const std::string& str() const { return out_; }

private:
    void sep() {
        if (!fresh_ && !out_.empty() && out_.back() != '{' && out_.back() != '[' &&
            out_.back() != ':')
            out_ += ',';
        fresh_ = false;
    }
    std::string out_;
    std::vector<bool> stack_;
    bool fresh_ = false;
};

/// CSV with a single '#' provenance comment, LF newlines, %.17g cells.
class CsvWriter {
public:
    void comment(const std::string& text) { out_ += "# " + text + "\n"; }
    void header(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) out_ += ',';
            out_ += cols[i];
        }
        out_ += '\n';
    }
    void row(const std::vector<double>& vals) {
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (i) out_ += ',';
            out_ += fmt_num(vals[i]);
        }
        out_ += '\n';
    }
    const std::string& str() const { return out_; }

private:
    std::string out_;
};

} // namespace blowup::cli
