#include "celllit/cnv.hpp"

#include <fstream>

#include "celllit/error.hpp"

namespace celllit {

void validate_profile(const CnvProfile& profile) {
  if (profile.sample_count < 0) throw FormatError("negative sample_count for " + profile.cell_line_id);
  for (std::size_t i = 0; i < profile.bins.size(); ++i) {
    const CnvBin& b = profile.bins[i];
    if (!b.interval.valid()) throw FormatError("invalid bin interval in " + profile.cell_line_id);
    for (double f : {b.gain_frequency, b.loss_frequency}) {
      if (!(f >= 0.0 && f <= 1.0)) {
        throw FormatError("frequency outside [0,1] in " + profile.cell_line_id);
      }
    }
    if (i == 0) continue;
    const GenomicInterval& prev = profile.bins[i - 1].interval;
    const GenomicInterval& cur = b.interval;
    if (std::tie(prev.chromosome, prev.start) >= std::tie(cur.chromosome, cur.start)) {
      throw FormatError("bins not sorted by (chromosome, start) in " + profile.cell_line_id);
    }
    if (prev.overlaps(cur)) throw FormatError("overlapping bins in " + profile.cell_line_id);
  }
}

std::map<std::string, CnvProfile> load_profiles_stream(std::istream& in) {
  std::map<std::string, CnvProfile> profiles;
  CnvProfile* current = nullptr;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto where = [&] { return "profiles:" + std::to_string(line_no) + ": "; };
    try {
      auto j = nlohmann::json::parse(line);
      std::string id = j.at("cell_line_id").get<std::string>();
      if (j.contains("sample_count")) {
        auto [it, inserted] = profiles.emplace(id, CnvProfile{id, j["sample_count"].get<int>(), {}});
        if (!inserted) throw FormatError("duplicate profile header for " + id);
        current = &it->second;
        continue;
      }
      if (current == nullptr || current->cell_line_id != id) {
        throw FormatError("bin for " + id + " outside its profile block");
      }
      GenomicInterval g = interval_from_json(j);
      current->bins.push_back(
          {g, j.at("gain_frequency").get<double>(), j.at("loss_frequency").get<double>()});
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(where() + e.what());
    } catch (const FormatError& e) {
      throw FormatError(where() + e.what());
    }
  }
  for (const auto& [id, p] : profiles) validate_profile(p);
  return profiles;
}

std::map<std::string, CnvProfile> load_profiles(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open profile file " + path.string());
  return load_profiles_stream(in);
}

nlohmann::json to_json(const CnvProfile& p) {
  nlohmann::json bins = nlohmann::json::array();
  for (const auto& b : p.bins) {
    bins.push_back({{"chromosome", b.interval.chromosome.label()},
                    {"start", b.interval.start},
                    {"end", b.interval.end},
                    {"gain_frequency", b.gain_frequency},
                    {"loss_frequency", b.loss_frequency}});
  }
  return {{"cell_line_id", p.cell_line_id}, {"sample_count", p.sample_count}, {"bins", std::move(bins)}};
}

}  // namespace celllit
