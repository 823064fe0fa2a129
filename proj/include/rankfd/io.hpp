#pragma once

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rankfd/bootstrap.hpp"
#include "rankfd/dataset.hpp"

namespace rankfd {

inline constexpr int kReportSchemaVersion = 1;

// --------------------------------------------------------------------------
// CSV primitives (RFC-4180-style: quoted fields, doubled quotes, CR/LF).
// --------------------------------------------------------------------------

inline std::vector<std::vector<std::string>> read_csv(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any = false;
    char c;
    while (in.get(c)) {
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"': quoted = true; any = true; break;
            case ',':
                row.push_back(std::move(field));
                field.clear();
                any = true;
                break;
            case '\r': break;
            case '\n':
                if (any || !field.empty() || !row.empty()) {
                    row.push_back(std::move(field));
                    field.clear();
                    rows.push_back(std::move(row));
                    row.clear();
                    any = false;
                }
                break;
            default: field += c; any = true; break;
        }
    }
    if (any || !field.empty() || !row.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

// --------------------------------------------------------------------------
// Dataset ingestion.
// --------------------------------------------------------------------------

enum class TableFormat { Wide, Long };

/// Column layout of a dataset table. Wide: one row per subject with one
/// value column per occasion. Long: one row per (subject, occasion). The
/// missing token applies to value fields only, never to labels.
struct TableSchema {
    TableFormat format = TableFormat::Wide;
    std::string group_column = "group";
    std::string subject_column = "subject";
    std::vector<std::string> occasion_columns;  // wide; empty = every other column, file order
    std::string occasion_column = "occasion";   // long
    std::string value_column = "value";         // long
    std::string missing_token = "NA";
};

namespace detail {

inline double parse_value(const std::string& text, std::size_t row, std::size_t col) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double x = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw ParseError("row " + std::to_string(row + 1) + ", column " + std::to_string(col + 1) +
                         ": cannot parse \"" + text + "\" as a number");
    }
    return x;
}

inline int find_column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == name) return static_cast<int>(c);
    }
    return -1;
}

inline int require_column(const std::vector<std::string>& header, const std::string& name) {
    const int c = find_column(header, name);
    if (c < 0) throw SchemaError("missing required column \"" + name + "\"");
    return c;
}

}  // namespace detail

/// Reads a dataset table. Groups are ordered by first appearance, subjects
/// likewise within their group. Ordinal scores ingest as their numeric
/// codes; any order-preserving coding yields identical test results because
/// the methods only use ranks.
inline IncompleteDataset read_dataset(std::istream& in, const TableSchema& schema) {
    const std::vector<std::vector<std::string>> rows = read_csv(in);
    if (rows.empty()) throw SchemaError("empty table: header row required");
    const std::vector<std::string>& header = rows.front();

    const int group_col = detail::require_column(header, schema.group_column);
    const int subject_col = detail::require_column(header, schema.subject_column);

    struct SubjectRef {
        int group;
        int index;
    };
    std::vector<std::string> group_order;
    std::map<std::string, int> group_ids;
    std::vector<std::vector<std::string>> subject_order;      // per group
    std::vector<std::map<std::string, int>> subject_ids;      // per group
    auto intern_group = [&](const std::string& label) {
        auto it = group_ids.find(label);
        if (it != group_ids.end()) return it->second;
        const int id = static_cast<int>(group_order.size());
        group_ids.emplace(label, id);
        group_order.push_back(label);
        subject_order.emplace_back();
        subject_ids.emplace_back();
        return id;
    };

    if (schema.format == TableFormat::Wide) {
        std::vector<int> occ_cols;
        if (schema.occasion_columns.empty()) {
            for (std::size_t c = 0; c < header.size(); ++c) {
                if (static_cast<int>(c) != group_col && static_cast<int>(c) != subject_col) {
                    occ_cols.push_back(static_cast<int>(c));
                }
            }
        } else {
            for (const std::string& name : schema.occasion_columns) {
                occ_cols.push_back(detail::require_column(header, name));
            }
        }
        if (occ_cols.empty()) throw SchemaError("wide table has no occasion columns");
        const int d = static_cast<int>(occ_cols.size());

        std::vector<std::vector<std::pair<Vector, std::vector<std::uint8_t>>>> values_by_group;
        for (std::size_t r = 1; r < rows.size(); ++r) {
            const std::vector<std::string>& row = rows[r];
            if (row.size() != header.size()) {
                throw ParseError("row " + std::to_string(r + 1) + ": expected " +
                                 std::to_string(header.size()) + " fields, got " +
                                 std::to_string(row.size()));
            }
            const int gi = intern_group(row[static_cast<std::size_t>(group_col)]);
            if (static_cast<std::size_t>(gi) >= values_by_group.size()) {
                values_by_group.resize(static_cast<std::size_t>(gi) + 1);
            }
            const std::string& subject = row[static_cast<std::size_t>(subject_col)];
            if (subject_ids[static_cast<std::size_t>(gi)].count(subject)) {
                throw SchemaError("duplicate subject \"" + subject + "\" in group \"" +
                                  group_order[static_cast<std::size_t>(gi)] + "\"");
            }
            subject_ids[static_cast<std::size_t>(gi)].emplace(
                subject, static_cast<int>(subject_order[static_cast<std::size_t>(gi)].size()));
            subject_order[static_cast<std::size_t>(gi)].push_back(subject);

            Vector vals = Vector::Zero(d);
            std::vector<std::uint8_t> mask(static_cast<std::size_t>(d), 0);
            for (int j = 0; j < d; ++j) {
                const std::string& text = row[static_cast<std::size_t>(occ_cols[static_cast<std::size_t>(j)])];
                if (text == schema.missing_token) continue;
                vals(j) = detail::parse_value(text, r, static_cast<std::size_t>(occ_cols[static_cast<std::size_t>(j)]));
                mask[static_cast<std::size_t>(j)] = 1;
            }
            values_by_group[static_cast<std::size_t>(gi)].emplace_back(std::move(vals), std::move(mask));
        }
        if (group_order.empty()) throw SchemaError("table has no data rows");

        IncompleteDataset data;
        for (std::size_t g = 0; g < values_by_group.size(); ++g) {
            const auto& subjects = values_by_group[g];
            GroupData gd;
            gd.values = Matrix::Zero(static_cast<Eigen::Index>(subjects.size()), d);
            gd.mask = Mask::Zero(static_cast<Eigen::Index>(subjects.size()), d);
            for (std::size_t k = 0; k < subjects.size(); ++k) {
                for (int j = 0; j < d; ++j) {
                    gd.values(static_cast<Eigen::Index>(k), j) = subjects[k].first(j);
                    gd.mask(static_cast<Eigen::Index>(k), j) = subjects[k].second[static_cast<std::size_t>(j)];
                }
            }
            data.groups.push_back(std::move(gd));
        }
        return data;
    }

    // Long format: occasions must be the integers 1..d (in any row order).
    const int occ_col = detail::require_column(header, schema.occasion_column);
    const int val_col = detail::require_column(header, schema.value_column);

    struct Cell {
        double value;
        bool observed;
    };
    std::vector<std::vector<std::map<int, Cell>>> cells;  // [group][subject] -> occasion map
    int max_occasion = 0;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const std::vector<std::string>& row = rows[r];
        if (row.size() != header.size()) {
            throw ParseError("row " + std::to_string(r + 1) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(row.size()));
        }
        const int gi = intern_group(row[static_cast<std::size_t>(group_col)]);
        if (static_cast<std::size_t>(gi) >= cells.size()) cells.resize(static_cast<std::size_t>(gi) + 1);
        const std::string& subject = row[static_cast<std::size_t>(subject_col)];
        auto& ids = subject_ids[static_cast<std::size_t>(gi)];
        int si;
        auto it = ids.find(subject);
        if (it == ids.end()) {
            si = static_cast<int>(subject_order[static_cast<std::size_t>(gi)].size());
            ids.emplace(subject, si);
            subject_order[static_cast<std::size_t>(gi)].push_back(subject);
            cells[static_cast<std::size_t>(gi)].emplace_back();
        } else {
            si = it->second;
        }

        const double occ_raw = detail::parse_value(row[static_cast<std::size_t>(occ_col)], r,
                                                   static_cast<std::size_t>(occ_col));
        const int occ = static_cast<int>(occ_raw);
        if (occ_raw != static_cast<double>(occ) || occ < 1) {
            throw ParseError("row " + std::to_string(r + 1) +
                             ": occasion must be a positive integer");
        }
        max_occasion = std::max(max_occasion, occ);

        Cell cell{0.0, false};
        const std::string& text = row[static_cast<std::size_t>(val_col)];
        if (text != schema.missing_token) {
            cell.value = detail::parse_value(text, r, static_cast<std::size_t>(val_col));
            cell.observed = true;
        }
        auto& occ_map = cells[static_cast<std::size_t>(gi)][static_cast<std::size_t>(si)];
        if (occ_map.count(occ)) {
            throw SchemaError("duplicate occasion " + std::to_string(occ) + " for subject \"" +
                              subject + "\" in group \"" + group_order[static_cast<std::size_t>(gi)] + "\"");
        }
        occ_map.emplace(occ, cell);
    }
    if (group_order.empty()) throw SchemaError("table has no data rows");

    // Require occasion labels to cover 1..d with no gaps.
    std::vector<bool> seen(static_cast<std::size_t>(max_occasion), false);
    for (const auto& group : cells) {
        for (const auto& subject : group) {
            for (const auto& [occ, cell] : subject) seen[static_cast<std::size_t>(occ - 1)] = true;
        }
    }
    for (std::size_t j = 0; j < seen.size(); ++j) {
        if (!seen[j]) {
            throw SchemaError("occasion " + std::to_string(j + 1) +
                              " never appears; occasions must be contiguous 1..d");
        }
    }
    const int d = max_occasion;

    IncompleteDataset data;
    for (std::size_t g = 0; g < cells.size(); ++g) {
        GroupData gd;
        gd.values = Matrix::Zero(static_cast<Eigen::Index>(cells[g].size()), d);
        gd.mask = Mask::Zero(static_cast<Eigen::Index>(cells[g].size()), d);
        for (std::size_t k = 0; k < cells[g].size(); ++k) {
            for (const auto& [occ, cell] : cells[g][k]) {
                if (cell.observed) {
                    gd.values(static_cast<Eigen::Index>(k), occ - 1) = cell.value;
                    gd.mask(static_cast<Eigen::Index>(k), occ - 1) = 1;
                }
            }
        }
        data.groups.push_back(std::move(gd));
    }
    return data;
}

inline IncompleteDataset read_dataset_file(const std::string& path, const TableSchema& schema) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open \"" + path + "\"");
    return read_dataset(in, schema);
}

/// Writes a dataset in wide format, suitable for re-reading with the default
/// schema. Values round-trip exactly (shortest-roundtrip formatting).
inline void write_dataset(std::ostream& os, const IncompleteDataset& data,
                          const std::string& missing_token = "NA") {
    const int d = data.num_occasions();
    os << "group,subject";
    for (int j = 1; j <= d; ++j) os << ",t" << j;
    os << "\n";
    for (int i = 0; i < data.num_groups(); ++i) {
        const GroupData& g = data.groups[static_cast<std::size_t>(i)];
        for (int k = 0; k < g.values.rows(); ++k) {
            os << "g" << (i + 1) << ",s" << (k + 1);
            for (int j = 0; j < d; ++j) {
                os << ",";
                if (g.mask(k, j)) {
                    char buf[40];
                    std::snprintf(buf, sizeof(buf), "%.17g", g.values(k, j));
                    os << buf;
                } else {
                    os << missing_token;
                }
            }
            os << "\n";
        }
    }
}

/// Reads a custom contrast matrix: plain CSV of numbers, one contrast row
/// per line, no header.
inline Matrix read_contrast_csv(std::istream& in) {
    const std::vector<std::vector<std::string>> rows = read_csv(in);
    if (rows.empty()) throw ParseError("contrast file is empty");
    const std::size_t cols = rows.front().size();
    Matrix c(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) {
            throw ParseError("contrast row " + std::to_string(r + 1) +
                             " has a different number of fields");
        }
        for (std::size_t j = 0; j < cols; ++j) {
            c(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) =
                detail::parse_value(rows[r][j], r, j);
        }
    }
    return c;
}

// --------------------------------------------------------------------------
// Test report emission.
// --------------------------------------------------------------------------

/// JSON report for a set of hypothesis tests on one dataset. Field order is
/// fixed and doubles use shortest-roundtrip formatting, so identical inputs
/// produce byte-identical documents.
inline nlohmann::ordered_json report_to_json(const std::vector<TestReport>& reports, int a,
                                             int d, const std::vector<int>& group_sizes,
                                             long long observations, double alpha) {
    nlohmann::ordered_json root;
    root["schema_version"] = kReportSchemaVersion;
    root["a"] = a;
    root["d"] = d;
    root["n"] = group_sizes;
    root["N"] = observations;
    root["alpha"] = alpha;
    root["results"] = nlohmann::ordered_json::array();
    for (const TestReport& report : reports) {
        nlohmann::ordered_json r;
        r["hypothesis"] = report.hypothesis;
        r["B"] = report.replicates;
        r["seed"] = report.seed;
        r["statistics"] = nlohmann::ordered_json::array();
        for (const StatReport& sr : report.statistics) {
            nlohmann::ordered_json s;
            s["statistic"] = stat_name(sr.observed.kind);
            s["value"] = sr.observed.value;
            if (sr.observed.dof) s["dof"] = *sr.observed.dof;
            if (sr.observed.p_asymptotic) s["p_asymptotic"] = *sr.observed.p_asymptotic;
            s["p_bootstrap"] = sr.p_bootstrap;
            s["degenerate_replicates"] = sr.degenerate_replicates;
            s["observed_degenerate"] = sr.observed_degenerate;
            r["statistics"].push_back(std::move(s));
        }
        r["warnings"] = report.warnings;
        root["results"].push_back(std::move(r));
    }
    return root;
}

/// Plain-text p-value table: rows are hypotheses, columns the asymptotic
/// T_W and T_A tests plus the three bootstrap tests. Values are rounded to
/// four decimals here; full precision lives in the JSON report.
inline std::string render_table(const std::vector<TestReport>& reports) {
    std::ostringstream os;
    auto cell = [](std::optional<double> p) {
        if (!p) return std::string("-");
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%.4f", *p);
        return std::string(buf);
    };
    os << std::left << std::setw(14) << "hypothesis" << std::right << std::setw(9) << "T_W"
       << std::setw(9) << "T_A" << std::setw(9) << "T_W*" << std::setw(9) << "T_A*"
       << std::setw(9) << "T_M*" << "\n";
    for (const TestReport& report : reports) {
        std::optional<double> wts_asym, ats_asym, wts_boot, ats_boot, mats_boot;
        for (const StatReport& sr : report.statistics) {
            switch (sr.observed.kind) {
                case StatKind::WTS:
                    wts_asym = sr.observed.p_asymptotic;
                    wts_boot = sr.p_bootstrap;
                    break;
                case StatKind::ATS:
                    ats_asym = sr.observed.p_asymptotic;
                    ats_boot = sr.p_bootstrap;
                    break;
                case StatKind::MATS: mats_boot = sr.p_bootstrap; break;
            }
        }
        os << std::left << std::setw(14) << report.hypothesis << std::right << std::setw(9)
           << cell(wts_asym) << std::setw(9) << cell(ats_asym) << std::setw(9)
           << cell(wts_boot) << std::setw(9) << cell(ats_boot) << std::setw(9)
           << cell(mats_boot) << "\n";
        for (const std::string& w : report.warnings) {
            os << "  ! " << w << "\n";
        }
    }
    return os.str();
}

}  // namespace rankfd
