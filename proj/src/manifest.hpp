#ifndef GMSD_MANIFEST_HPP
#define GMSD_MANIFEST_HPP

#include <string>
#include <vector>

namespace gmsd {

// One row of an evaluation manifest: an image pair with its subjective
// score (MOS or DMOS, database units) and grouping tags.
struct DatasetRecord {
    std::string ref_path;
    std::string dist_path;
    double subjective = 0.0;
    std::string distortion_type;
    std::string dataset_id;
};

// Parses a UTF-8 CSV with header
//   ref_path,dist_path,subjective,distortion_type,dataset_id
// Relative image paths are resolved against the manifest's directory.
// Throws IoError naming the first offending row (1-based, header = row 1).
std::vector<DatasetRecord> load_manifest(const std::string &path);

} // namespace gmsd

#endif
