#include "famdad/tabular.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "famdad/format.hpp"

namespace famdad {

const char* column_kind_name(ColumnKind kind) {
    switch (kind) {
        case ColumnKind::Continuous: return "continuous";
        case ColumnKind::Categorical: return "categorical";
        case ColumnKind::Label: return "label";
        case ColumnKind::Ignore: return "ignore";
    }
    return "unknown";
}

ColumnKind column_kind_from_name(const std::string& name) {
    if (name == "continuous") return ColumnKind::Continuous;
    if (name == "categorical") return ColumnKind::Categorical;
    if (name == "label") return ColumnKind::Label;
    if (name == "ignore") return ColumnKind::Ignore;
    throw Error("unknown column kind '" + name + "' (expected continuous|categorical|label|ignore)");
}

Schema::Schema(std::vector<SchemaEntry> entries) : entries_(std::move(entries)) {
    std::unordered_set<std::string> seen;
    int labels = 0;
    for (const auto& e : entries_) {
        if (!seen.insert(e.name).second) {
            throw Error("duplicate column name '" + e.name + "' in schema");
        }
        if (e.kind == ColumnKind::Label) ++labels;
    }
    if (labels > 1) throw Error("schema declares more than one label column");
}

int Schema::find(const std::string& name) const {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].name == name) return static_cast<int>(i);
    }
    return -1;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

} // namespace

Schema Schema::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open schema file '" + path + "'");
    std::vector<SchemaEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw Error("schema file '" + path + "' line " + std::to_string(line_no) +
                        ": expected name=kind");
        }
        SchemaEntry e;
        e.name = trim(stripped.substr(0, eq));
        e.kind = column_kind_from_name(trim(stripped.substr(eq + 1)));
        if (e.name.empty()) {
            throw Error("schema file '" + path + "' line " + std::to_string(line_no) +
                        ": empty column name");
        }
        entries.push_back(std::move(e));
    }
    return Schema(std::move(entries));
}

void Schema::save(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write schema file '" + path + "'");
    for (const auto& e : entries_) {
        out << e.name << '=' << column_kind_name(e.kind) << '\n';
    }
}

MixedTable::MixedTable(std::size_t n_rows,
                       std::vector<ContinuousColumn> continuous,
                       std::vector<CategoricalColumn> categorical,
                       std::optional<std::vector<std::uint8_t>> labels,
                       std::vector<ColumnRef> column_order)
    : n_rows_(n_rows),
      continuous_(std::move(continuous)),
      categorical_(std::move(categorical)),
      labels_(std::move(labels)),
      column_order_(std::move(column_order)) {
    if (n_rows_ == 0) throw Error("table has no rows");
    for (const auto& col : continuous_) {
        if (col.values.size() != n_rows_) {
            throw Error("continuous column '" + col.name + "' has wrong length");
        }
    }
    for (auto& col : categorical_) {
        if (col.codes.size() != n_rows_) {
            throw Error("categorical column '" + col.name + "' has wrong length");
        }
        // Prune levels that never occur and remap codes.
        std::vector<std::int32_t> counts(col.levels.size(), 0);
        for (std::int32_t code : col.codes) {
            if (code < 0 || static_cast<std::size_t>(code) >= col.levels.size()) {
                throw Error("categorical column '" + col.name + "' has out-of-range code");
            }
            ++counts[code];
        }
        bool any_unused = std::find(counts.begin(), counts.end(), 0) != counts.end();
        if (any_unused) {
            std::vector<std::int32_t> remap(col.levels.size(), -1);
            std::vector<std::string> kept;
            for (std::size_t i = 0; i < col.levels.size(); ++i) {
                if (counts[i] > 0) {
                    remap[i] = static_cast<std::int32_t>(kept.size());
                    kept.push_back(col.levels[i]);
                }
            }
            for (auto& code : col.codes) code = remap[code];
            col.levels = std::move(kept);
        }
        if (col.levels.empty()) {
            throw Error("categorical column '" + col.name + "' has no levels");
        }
    }
    if (labels_ && labels_->size() != n_rows_) {
        throw Error("label vector has wrong length");
    }
    if (column_order_.empty()) {
        for (std::size_t i = 0; i < continuous_.size(); ++i) {
            column_order_.push_back({ColumnKind::Continuous, i});
        }
        for (std::size_t i = 0; i < categorical_.size(); ++i) {
            column_order_.push_back({ColumnKind::Categorical, i});
        }
        if (labels_) column_order_.push_back({ColumnKind::Label, 0});
    }
}

const std::vector<std::uint8_t>& MixedTable::labels() const {
    if (!labels_) throw Error("table has no labels");
    return *labels_;
}

std::size_t MixedTable::total_categories() const {
    std::size_t b = 0;
    for (const auto& col : categorical_) b += col.levels.size();
    return b;
}

namespace {

// Minimal RFC-4180 reader: quoted fields, doubled quotes, embedded commas
// and newlines, optional CRLF line ends.
class CsvReader {
public:
    explicit CsvReader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
        if (!in_) throw Error("cannot open file '" + path + "'");
        // Skip a UTF-8 BOM if present.
        char bom[3];
        in_.read(bom, 3);
        if (in_.gcount() != 3 || bom[0] != '\xef' || bom[1] != '\xbb' || bom[2] != '\xbf') {
            in_.clear();
            in_.seekg(0);
        }
    }

    // Reads one record; false at end of input.
    bool next(std::vector<std::string>& fields) {
        fields.clear();
        int c = in_.get();
        if (c == EOF) return false;
        std::string field;
        bool quoted = false;
        for (;;) {
            if (quoted) {
                if (c == EOF) throw Error(path_ + ": unterminated quoted field");
                if (c == '"') {
                    int peek = in_.get();
                    if (peek == '"') {
                        field.push_back('"');
                    } else {
                        quoted = false;
                        c = peek;
                        continue;
                    }
                } else {
                    field.push_back(static_cast<char>(c));
                }
            } else {
                if (c == '"' && field.empty()) {
                    quoted = true;
                } else if (c == ',') {
                    fields.push_back(std::move(field));
                    field.clear();
                } else if (c == '\n' || c == EOF) {
                    break;
                } else if (c == '\r') {
                    int peek = in_.get();
                    if (peek != '\n' && peek != EOF) in_.unget();
                    break;
                } else {
                    field.push_back(static_cast<char>(c));
                }
            }
            c = in_.get();
        }
        fields.push_back(std::move(field));
        return true;
    }

private:
    std::ifstream in_;
    std::string path_;
};

bool parse_real(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + s.size();
}

bool parse_label(const std::string& raw, std::uint8_t& out) {
    std::string s = trim(raw);
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (s == "0" || s == "false") { out = 0; return true; }
    if (s == "1" || s == "true") { out = 1; return true; }
    return false;
}

} // namespace

MixedTable load_csv(const std::string& path, const Schema& schema) {
    CsvReader reader(path);
    std::vector<std::string> header;
    if (!reader.next(header)) throw Error(path + ": empty file (no header row)");

    if (header.size() != schema.size()) {
        throw Error(path + ": header has " + std::to_string(header.size()) +
                    " columns but schema declares " + std::to_string(schema.size()));
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] != schema.at(i).name) {
            throw Error(path + ": header column " + std::to_string(i + 1) + " is '" +
                        header[i] + "' but schema declares '" + schema.at(i).name + "'");
        }
    }

    std::vector<ContinuousColumn> continuous;
    std::vector<CategoricalColumn> categorical;
    std::vector<std::unordered_map<std::string, std::int32_t>> vocab_index;
    std::vector<ColumnRef> order;
    // Per schema position: which storage the cell goes to.
    std::vector<int> target(schema.size(), -1);
    bool has_label = false;
    for (std::size_t i = 0; i < schema.size(); ++i) {
        const auto& entry = schema.at(i);
        switch (entry.kind) {
            case ColumnKind::Continuous:
                target[i] = static_cast<int>(continuous.size());
                continuous.push_back({entry.name, {}});
                order.push_back({ColumnKind::Continuous, static_cast<std::size_t>(target[i])});
                break;
            case ColumnKind::Categorical:
                target[i] = static_cast<int>(categorical.size());
                categorical.push_back({entry.name, {}, {}});
                vocab_index.emplace_back();
                order.push_back({ColumnKind::Categorical, static_cast<std::size_t>(target[i])});
                break;
            case ColumnKind::Label:
                has_label = true;
                order.push_back({ColumnKind::Label, 0});
                break;
            case ColumnKind::Ignore:
                break;
        }
    }

    std::vector<std::uint8_t> labels;
    std::vector<std::string> fields;
    std::size_t row_no = 0;  // physical record index, for error context
    std::size_t n_rows = 0;  // rows actually stored
    while (reader.next(fields)) {
        ++row_no;
        if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
        ++n_rows;
        if (fields.size() != schema.size()) {
            throw Error(path + ": row " + std::to_string(row_no) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(schema.size()));
        }
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const auto& entry = schema.at(i);
            const std::string& cell = fields[i];
            switch (entry.kind) {
                case ColumnKind::Continuous: {
                    double v = 0.0;
                    if (!parse_real(cell, v)) {
                        throw Error(path + ": row " + std::to_string(row_no) + ", column '" +
                                    entry.name + "': cannot parse '" + cell + "' as a real number");
                    }
                    continuous[target[i]].values.push_back(v);
                    break;
                }
                case ColumnKind::Categorical: {
                    if (cell.empty()) {
                        throw Error(path + ": row " + std::to_string(row_no) + ", column '" +
                                    entry.name + "': missing value");
                    }
                    auto& col = categorical[target[i]];
                    auto& index = vocab_index[target[i]];
                    auto it = index.find(cell);
                    std::int32_t code;
                    if (it == index.end()) {
                        code = static_cast<std::int32_t>(col.levels.size());
                        col.levels.push_back(cell);
                        index.emplace(cell, code);
                    } else {
                        code = it->second;
                    }
                    col.codes.push_back(code);
                    break;
                }
                case ColumnKind::Label: {
                    std::uint8_t v = 0;
                    if (!parse_label(cell, v)) {
                        throw Error(path + ": row " + std::to_string(row_no) + ", column '" +
                                    entry.name + "': label value '" + cell +
                                    "' is not one of 0,1,true,false");
                    }
                    labels.push_back(v);
                    break;
                }
                case ColumnKind::Ignore:
                    break;
            }
        }
    }
    if (n_rows == 0) throw Error(path + ": table has no data rows");

    std::optional<std::vector<std::uint8_t>> label_opt;
    if (has_label) label_opt = std::move(labels);
    return MixedTable(n_rows, std::move(continuous), std::move(categorical),
                      std::move(label_opt), std::move(order));
}

Schema infer_schema(const std::string& path, const std::optional<std::string>& label_column) {
    CsvReader reader(path);
    std::vector<std::string> header;
    if (!reader.next(header)) throw Error(path + ": empty file (no header row)");

    std::vector<bool> numeric(header.size(), true);
    std::vector<std::string> fields;
    while (reader.next(fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        for (std::size_t i = 0; i < fields.size() && i < header.size(); ++i) {
            double v;
            if (!fields[i].empty() && !parse_real(fields[i], v)) numeric[i] = false;
        }
    }

    std::vector<SchemaEntry> entries;
    bool label_found = false;
    for (std::size_t i = 0; i < header.size(); ++i) {
        SchemaEntry e;
        e.name = header[i];
        if (label_column && header[i] == *label_column) {
            e.kind = ColumnKind::Label;
            label_found = true;
        } else {
            e.kind = numeric[i] ? ColumnKind::Continuous : ColumnKind::Categorical;
        }
        entries.push_back(std::move(e));
    }
    if (label_column && !label_found) {
        throw Error(path + ": label column '" + *label_column + "' not found in header");
    }
    return Schema(std::move(entries));
}

Schema table_schema(const MixedTable& table) {
    std::vector<SchemaEntry> entries;
    for (const auto& ref : table.column_order()) {
        SchemaEntry e;
        switch (ref.kind) {
            case ColumnKind::Continuous:
                e.name = table.continuous()[ref.index].name;
                e.kind = ColumnKind::Continuous;
                break;
            case ColumnKind::Categorical:
                e.name = table.categorical()[ref.index].name;
                e.kind = ColumnKind::Categorical;
                break;
            case ColumnKind::Label:
                e.name = "label";
                e.kind = ColumnKind::Label;
                break;
            case ColumnKind::Ignore:
                continue;
        }
        entries.push_back(std::move(e));
    }
    return Schema(std::move(entries));
}

void write_csv(const MixedTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw Error("cannot write file '" + path + "'");

    const auto& order = table.column_order();
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i) out << ',';
        switch (order[i].kind) {
            case ColumnKind::Continuous:
                out << csv_quote(table.continuous()[order[i].index].name);
                break;
            case ColumnKind::Categorical:
                out << csv_quote(table.categorical()[order[i].index].name);
                break;
            case ColumnKind::Label:
                out << "label";
                break;
            case ColumnKind::Ignore:
                break;
        }
    }
    out << '\n';

    for (std::size_t row = 0; row < table.rows(); ++row) {
        for (std::size_t i = 0; i < order.size(); ++i) {
            if (i) out << ',';
            switch (order[i].kind) {
                case ColumnKind::Continuous:
                    out << format_double(table.continuous()[order[i].index].values[row]);
                    break;
                case ColumnKind::Categorical: {
                    const auto& col = table.categorical()[order[i].index];
                    out << csv_quote(col.levels[col.codes[row]]);
                    break;
                }
                case ColumnKind::Label:
                    out << (table.labels()[row] ? '1' : '0');
                    break;
                case ColumnKind::Ignore:
                    break;
            }
        }
        out << '\n';
    }
    if (!out) throw Error("write failed for '" + path + "'");
}

} // namespace famdad
