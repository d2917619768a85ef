#pragma once
// JSON container {lattice:{d,N}, kind, data:[[re,im],...]} for distributions,
// kernels and operators (row-major for matrices), plus atomic file output.

#include <string>

#include <json.hpp>

#include "microsing/spectral.hpp"
#include "microsing/symbol_operator.hpp"

namespace microsing {

using json = nlohmann::json;

json to_json(const SpectralDistribution& u);
json to_json(const SmoothingKernel& T);
// Stored as the dense matrix plus its declared order; angular profiles are not persisted.
json to_json(const SymbolOperator& P);

SpectralDistribution distribution_from_json(const json& j);
SmoothingKernel kernel_from_json(const json& j);
SymbolOperator operator_from_json(const json& j);
FrequencyLattice lattice_from_json(const json& j);

SpectralDistribution read_distribution_file(const std::string& path);
json read_json_file(const std::string& path);
// Writes through a sibling temporary file and renames it into place.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace microsing
