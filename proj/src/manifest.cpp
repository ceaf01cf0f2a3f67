#include "manifest.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace gmsd {

namespace {

constexpr const char *kHeader = "ref_path,dist_path,subjective,distortion_type,dataset_id";

[[noreturn]] void row_fail(const std::string &path, size_t row, const std::string &cause) {
    throw IoError(path + ": row " + std::to_string(row) + ": " + cause);
}

std::vector<std::string> split_fields(const std::string &line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string resolve(const std::filesystem::path &base, const std::string &p) {
    std::filesystem::path fp(p);
    if (fp.is_absolute())
        return fp.string();
    return (base / fp).lexically_normal().string();
}

} // namespace

std::vector<DatasetRecord> load_manifest(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw IoError(path + ": cannot open manifest");
    const std::filesystem::path base = std::filesystem::path(path).parent_path();

    std::string line;
    if (!std::getline(in, line))
        throw IoError(path + ": empty manifest");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != kHeader)
        row_fail(path, 1, std::string("bad header, expected '") + kHeader + "'");

    std::vector<DatasetRecord> records;
    size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        auto fields = split_fields(line);
        if (fields.size() != 5)
            row_fail(path, row,
                     "expected 5 fields, got " + std::to_string(fields.size()));
        if (fields[0].empty() || fields[1].empty())
            row_fail(path, row, "empty image path");
        DatasetRecord rec;
        rec.ref_path = resolve(base, fields[0]);
        rec.dist_path = resolve(base, fields[1]);
        try {
            size_t used = 0;
            rec.subjective = std::stod(fields[2], &used);
            if (used != fields[2].size())
                throw std::invalid_argument("trailing characters");
        } catch (const std::exception &) {
            row_fail(path, row, "bad subjective score '" + fields[2] + "'");
        }
        if (!std::isfinite(rec.subjective))
            row_fail(path, row, "subjective score must be finite");
        rec.distortion_type = fields[3];
        rec.dataset_id = fields[4];
        records.push_back(std::move(rec));
    }
    return records;
}

} // namespace gmsd
