#include "ramanpcr/report.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>
#include <openssl/evp.h>

#include "csv.hpp"

namespace ramanpcr {

namespace {

using Json = nlohmann::ordered_json;

// NaN -> null, infinities as strings.
Json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json numbers(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Index k = 0; k < v.size(); ++k) out.push_back(number(v[k]));
  return out;
}

Json anova_json(const AnovaResult& a) {
  Json j;
  j["scale"] = a.log10_press ? "log10" : "raw";
  j["F"] = number(a.f);
  j["p_value"] = number(a.p_value);
  j["F_critical"] = number(a.f_critical);
  j["df_treat"] = a.df_treat;
  j["df_error"] = a.df_error;
  j["SST"] = number(a.sst);
  j["SSE"] = number(a.sse);
  j["MSE"] = number(a.mse);
  j["significant"] = a.significant;
  j["group_means"] = numbers(a.group_means);
  j["group_sizes"] = a.group_sizes;
  j["notes"] = a.notes;
  return j;
}

Json boxplot_json(const std::vector<BoxplotStats>& stats) {
  Json out = Json::array();
  for (std::size_t c = 0; c < stats.size(); ++c) {
    const auto& s = stats[c];
    Json outliers = Json::array();
    for (const double o : s.outliers) outliers.push_back(number(o));
    out.push_back({{"pc", c + 1},
                   {"count", s.count},
                   {"q1", number(s.q1)},
                   {"median", number(s.median)},
                   {"q3", number(s.q3)},
                   {"lo_whisker", number(s.lo_whisker)},
                   {"hi_whisker", number(s.hi_whisker)},
                   {"outliers", outliers}});
  }
  return out;
}

Json entry_json(const CandidateEntry& e) {
  Json j;
  j["index"] = e.index;
  j["pipeline"] = e.pipeline;
  if (e.failed) {
    j["status"] = "failed";
    j["error"] = e.error;
    return j;
  }
  const auto& v = e.verdict;
  j["status"] = "ok";
  j["significant"] = v.significant;
  j["F"] = number(v.anova.f);
  j["p_value"] = number(v.anova.p_value);
  j["optimal_pc"] = v.optimal_pc;
  j["worst_pc"] = v.worst_pc;
  j["candidate_set"] = v.candidate_set;
  j["sum_press_at_optimal"] = number(e.sum_press_at_optimal);
  j["negative_predictions_at_optimal"] = e.negative_predictions_at_optimal;
  j["anova"] = anova_json(v.anova);
  if (e.raw_anova) j["anova_raw_scale"] = anova_json(*e.raw_anova);
  j["sum_press"] = numbers(v.sum_press);
  j["pairwise_p"] = numbers(v.pairwise_p);
  j["negative_predictions"] = e.press.negative_predictions;
  j["boxplot"] = boxplot_json(v.boxplot);
  j["alerts"] = v.alerts;
  return j;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::IoFailure, "sha256 failed");
  std::string hex;
  char buffer[3];
  for (unsigned int k = 0; k < length; ++k) {
    std::snprintf(buffer, sizeof buffer, "%02x", digest[k]);
    hex += buffer;
  }
  return hex;
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(detail::read_text(path)); }

std::string report_to_json(const SelectionReport& report, const std::vector<InputFile>& inputs, const SpectraSet& set,
                           const ConcentrationSet& conc) {
  Json doc;
  doc["format"] = "ramanpcr-selection-report";
  doc["version"] = 1;
  Json files = Json::array();
  for (const auto& f : inputs) files.push_back({{"role", f.role}, {"path", f.path}, {"sha256", f.sha256}});
  doc["inputs"] = {{"files", files},
                   {"samples", set.rows()},
                   {"channels", set.channels()},
                   {"axis_first", number(set.axis()[0])},
                   {"axis_last", number(set.axis()[set.channels() - 1])},
                   {"species", conc.species()}};
  doc["alpha"] = report.alpha;
  doc["anova_scale"] = report.log10_press ? "log10" : "raw";
  Json entries = Json::array();
  for (const auto& e : report.entries) entries.push_back(entry_json(e));
  doc["candidates"] = entries;
  doc["chosen"] = {{"index", report.chosen_index},
                   {"pipeline", report.chosen_pipeline},
                   {"pc", report.chosen_pc},
                   {"significant", report.significant}};
  doc["alerts"] = report.alerts;
  return doc.dump(2) + "\n";
}

void save_report(const std::filesystem::path& path, const std::string& json) { detail::write_text(path, json); }

}  // namespace ramanpcr
