#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "famdad/error.hpp"

namespace famdad {

enum class ColumnKind { Continuous, Categorical, Label, Ignore };

const char* column_kind_name(ColumnKind kind);
ColumnKind column_kind_from_name(const std::string& name);

struct SchemaEntry {
    std::string name;
    ColumnKind kind = ColumnKind::Continuous;
};

// Ordered column declarations. Names must be unique and at most one column
// may be the label.
class Schema {
public:
    Schema() = default;
    explicit Schema(std::vector<SchemaEntry> entries);

    const std::vector<SchemaEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    const SchemaEntry& at(std::size_t i) const { return entries_[i]; }
    // Index of the entry with this name, or -1.
    int find(const std::string& name) const;

    static Schema load(const std::string& path);
    void save(const std::string& path) const;

private:
    std::vector<SchemaEntry> entries_;
};

struct ContinuousColumn {
    std::string name;
    std::vector<double> values;
};

struct CategoricalColumn {
    std::string name;
    std::vector<std::string> levels;       // vocabulary, first-appearance order
    std::vector<std::int32_t> codes;       // per row, index into levels
};

// Position of a column in the original file order, used to round-trip CSVs.
struct ColumnRef {
    ColumnKind kind = ColumnKind::Continuous;
    std::size_t index = 0;                 // index within its kind's list
};

// Immutable typed table of continuous and categorical columns plus an
// optional anomaly label vector (1 = anomaly). Labels exist purely for
// evaluation; nothing in encode/embed/score reads them.
class MixedTable {
public:
    MixedTable(std::size_t n_rows,
               std::vector<ContinuousColumn> continuous,
               std::vector<CategoricalColumn> categorical,
               std::optional<std::vector<std::uint8_t>> labels,
               std::vector<ColumnRef> column_order = {});

    std::size_t rows() const { return n_rows_; }
    const std::vector<ContinuousColumn>& continuous() const { return continuous_; }
    const std::vector<CategoricalColumn>& categorical() const { return categorical_; }
    bool has_labels() const { return labels_.has_value(); }
    const std::vector<std::uint8_t>& labels() const;
    const std::vector<ColumnRef>& column_order() const { return column_order_; }

    std::size_t total_categories() const;  // sum of vocabulary sizes

private:
    std::size_t n_rows_ = 0;
    std::vector<ContinuousColumn> continuous_;
    std::vector<CategoricalColumn> categorical_;
    std::optional<std::vector<std::uint8_t>> labels_;
    std::vector<ColumnRef> column_order_;
};

// Reads an RFC-4180-style CSV (header row required, UTF-8, '.' decimals).
// Ignore columns are dropped; the Label column, if declared, is parsed from
// {0,1,true,false}. Categorical vocabularies are built in first-appearance
// order. Missing (empty) cells are an error.
MixedTable load_csv(const std::string& path, const Schema& schema);

// A column is Continuous iff every non-empty cell parses as a real number,
// otherwise Categorical. `label_column`, when given, must name a column.
Schema infer_schema(const std::string& path,
                    const std::optional<std::string>& label_column = std::nullopt);

// Writes the table in its recorded column order; labels become a 0/1 column.
void write_csv(const MixedTable& table, const std::string& path);

// Schema matching what write_csv emits for this table.
Schema table_schema(const MixedTable& table);

} // namespace famdad
