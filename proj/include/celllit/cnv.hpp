#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "celllit/ontology.hpp"
#include "json.hpp"

namespace celllit {

struct CnvBin {
  GenomicInterval interval;
  double gain_frequency = 0.0;
  double loss_frequency = 0.0;

  bool operator==(const CnvBin&) const = default;
};

struct CnvProfile {
  std::string cell_line_id;
  int sample_count = 0;
  std::vector<CnvBin> bins;  // sorted by (chromosome, start), non-overlapping

  bool operator==(const CnvProfile&) const = default;
};

// Throws FormatError when bins overlap, are unsorted, or frequencies fall
// outside [0, 1].
void validate_profile(const CnvProfile& profile);

// Line-delimited JSON. A header record
//   {"cell_line_id": ..., "sample_count": N}
// opens a profile; bin records
//   {"cell_line_id": ..., "chromosome": "17", "start": ..., "end": ...,
//    "gain_frequency": ..., "loss_frequency": ...}
// follow it and must name the same cell line.
std::map<std::string, CnvProfile> load_profiles(const std::filesystem::path& path);
std::map<std::string, CnvProfile> load_profiles_stream(std::istream& in);

nlohmann::json to_json(const CnvProfile& p);

}  // namespace celllit
