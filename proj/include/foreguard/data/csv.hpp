#pragma once
// CSV ingestion and emission for plant-historian style exports: one timestamp
// column, one numeric column per tag, optional Normal/Attack label column.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "foreguard/common.hpp"
#include "foreguard/data/frame.hpp"

namespace foreguard::data {

struct CsvSchema {
    std::string timestamp_column = "timestamp";
    std::optional<std::string> label_column; // absent -> no labels expected
    std::vector<std::string> tag_columns;    // empty -> every remaining column
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') { cur += '"'; ++i; }
                else quoted = false;
            } else cur += c;
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

inline bool parse_double(const std::string& raw, double& out) {
    const std::string s = trim(raw);
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

// days-from-civil (Howard Hinnant's algorithm); proleptic Gregorian calendar.
inline std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u + static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

// Accepts numeric seconds, or "YYYY-MM-DD HH:MM:SS" / "YYYY-MM-DDTHH:MM:SS"
// (optionally with a fractional-second suffix). No timezone handling: stamps
// are treated as a monotone clock, which is all the pipeline needs.
inline bool parse_timestamp(const std::string& raw, double& out) {
    const std::string s = trim(raw);
    if (parse_double(s, out)) return true;
    int y, mo, d, h, mi;
    double sec;
    char sep;
    if (std::sscanf(s.c_str(), "%d-%d-%d%c%d:%d:%lf", &y, &mo, &d, &sep, &h, &mi, &sec) == 7 &&
        (sep == ' ' || sep == 'T')) {
        if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 || sec < 0 || sec >= 61)
            return false;
        out = static_cast<double>(days_from_civil(y, mo, d)) * 86400.0 + h * 3600.0 + mi * 60.0 + sec;
        return true;
    }
    return false;
}

inline bool parse_label(const std::string& raw, std::uint8_t& out) {
    const std::string s = lower(trim(raw));
    if (s == "normal" || s == "0" || s == "false") { out = 0; return true; }
    if (s == "attack" || s == "anomaly" || s == "1" || s == "true") { out = 1; return true; }
    return false;
}

} // namespace detail

inline TimeSeriesFrame load_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path);
    require(in.good(), ErrorKind::Io, strfmt("cannot open csv file '%s'", path.c_str()));

    std::string line;
    require(static_cast<bool>(std::getline(in, line)), ErrorKind::Parse,
            strfmt("'%s' is empty (header row required)", path.c_str()));
    const auto header = detail::split_csv_line(line);

    auto column_of = [&](const std::string& name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (detail::trim(header[i]) == name) return i;
        return std::nullopt;
    };

    const auto ts_col = column_of(schema.timestamp_column);
    require(ts_col.has_value(), ErrorKind::Config,
            strfmt("'%s' has no timestamp column '%s'", path.c_str(), schema.timestamp_column.c_str()));

    std::optional<std::size_t> label_col;
    if (schema.label_column) {
        label_col = column_of(*schema.label_column);
        require(label_col.has_value(), ErrorKind::Config,
                strfmt("'%s' has no label column '%s'", path.c_str(), schema.label_column->c_str()));
    }

    std::vector<std::size_t> tag_cols;
    TimeSeriesFrame frame;
    if (schema.tag_columns.empty()) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i == *ts_col || (label_col && i == *label_col)) continue;
            tag_cols.push_back(i);
            frame.tag_names.push_back(detail::trim(header[i]));
        }
    } else {
        for (const auto& name : schema.tag_columns) {
            const auto col = column_of(name);
            require(col.has_value(), ErrorKind::Config,
                    strfmt("'%s' has no tag column '%s'", path.c_str(), name.c_str()));
            tag_cols.push_back(*col);
            frame.tag_names.push_back(name);
        }
    }
    require(!tag_cols.empty(), ErrorKind::Config, strfmt("'%s' has no tag columns", path.c_str()));

    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_csv_line(line);
        require(fields.size() >= header.size(), ErrorKind::Parse,
                strfmt("row %zu of '%s' has %zu fields, header has %zu", row, path.c_str(),
                       fields.size(), header.size()));
        double ts;
        require(detail::parse_timestamp(fields[*ts_col], ts), ErrorKind::Parse,
                strfmt("row %zu of '%s': unparseable timestamp '%s'", row, path.c_str(),
                       fields[*ts_col].c_str()));
        frame.timestamps.push_back(ts);
        for (std::size_t i : tag_cols) {
            double v;
            require(detail::parse_double(fields[i], v), ErrorKind::Parse,
                    strfmt("row %zu of '%s': non-numeric cell '%s' in column '%s'", row,
                           path.c_str(), fields[i].c_str(), detail::trim(header[i]).c_str()));
            frame.values.push_back(v);
        }
        if (label_col) {
            std::uint8_t flag;
            require(detail::parse_label(fields[*label_col], flag), ErrorKind::Parse,
                    strfmt("row %zu of '%s': unknown label '%s'", row, path.c_str(),
                           fields[*label_col].c_str()));
            frame.labels.push_back(flag);
        }
    }
    require(frame.points() >= 2, ErrorKind::Data,
            strfmt("'%s' holds %zu data rows; at least 2 required", path.c_str(), frame.points()));
    if (!frame.labels.empty()) frame.attack_intervals = intervals_from_labels(frame.labels);
    frame.validate();
    return frame;
}

// Timestamps are written as plain numbers; labels (when present) as
// Normal/Attack to match the ingestion vocabulary.
inline void save_csv(const TimeSeriesFrame& frame, const std::string& path,
                     const std::string& timestamp_column = "timestamp",
                     const std::optional<std::string>& label_column = std::nullopt) {
    std::ofstream out(path, std::ios::binary); // binary: byte-stable newlines
    require(out.good(), ErrorKind::Io, strfmt("cannot write csv file '%s'", path.c_str()));
    out << timestamp_column;
    for (const auto& name : frame.tag_names) out << ',' << name;
    const bool with_labels = label_column.has_value() && frame.has_labels();
    if (with_labels) out << ',' << *label_column;
    out << '\n';
    for (std::size_t t = 0; t < frame.points(); ++t) {
        out << format_double(frame.timestamps[t]);
        for (std::size_t i = 0; i < frame.tags(); ++i) out << ',' << format_double(frame.at(t, i));
        if (with_labels) out << ',' << (frame.labels[t] ? "Attack" : "Normal");
        out << '\n';
    }
    require(out.good(), ErrorKind::Io, strfmt("write failed for '%s'", path.c_str()));
}

} // namespace foreguard::data
