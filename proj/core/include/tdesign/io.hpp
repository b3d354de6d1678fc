#pragma once

#include "tdesign/designs.hpp"
#include "tdesign/oa.hpp"
#include "tdesign/rules1d.hpp"
#include "tdesign/verify.hpp"

#include <filesystem>
#include <string>

namespace tdesign::io {

/// JSON array file, schema "oa/1". Explicit rows, the generator matrix, or
/// the grid marker are stored as-is together with the certification stamp.
void save_oa(const oa::OrthogonalArray& a, const std::filesystem::path& path);
oa::OrthogonalArray load_oa(const std::filesystem::path& path);

/// JSON rule file, schema "rule/1".
void save_rule(const rules1d::Rule1D& rule, const std::filesystem::path& path);
rules1d::Rule1D load_rule(const std::filesystem::path& path);

/// JSON design file, schema "design/1". Factored designs store their rule
/// and symbol map inline and reference the array by `oa_ref`, which is kept
/// verbatim and resolved against the design file's directory on load;
/// grid-backed designs store the marker "factorial" instead. Explicit
/// designs ignore oa_ref.
void save_design(const designs::WeightedDesign& d, const std::filesystem::path& path,
                 const std::string& oa_ref = "");

/// Loads a design; explicit weights that do not sum to one are rescaled and
/// the design is marked accordingly.
designs::WeightedDesign load_design(const std::filesystem::path& path);

/// JSON verification report, schema "report/1".
std::string report_to_json(const verify::VerificationReport& rep);
void save_report(const verify::VerificationReport& rep, const std::filesystem::path& path);

/// Row-major CSV, 17 significant digits per entry.
void save_embedding_csv(const verify::Embedding& e, const std::filesystem::path& path);

}  // namespace tdesign::io
