#pragma once

// File formats shared by the CLI: full-precision CSV matrices, JSON filter and
// shift-operator files, and small JSON helpers for manifests and reports.

#include <string>

#include "spectemp/diffusion.hpp"
#include "spectemp/graph.hpp"
#include "spectemp/linalg.hpp"

#include "json.hpp"

namespace spectemp {
namespace io {

// Comma-separated values, one row per line, %.17g precision so that
// write -> read is an exact round trip for doubles.
void write_matrix_csv(const std::string& path, const Mat& m);
Mat read_matrix_csv(const std::string& path);

nlohmann::json matrix_to_json(const Mat& m);
Mat matrix_from_json(const nlohmann::json& j);

void write_filter_json(const std::string& path, const GraphFilter& filter);
GraphFilter read_filter_json(const std::string& path);

void write_gso_json(const std::string& path, const Gso& gso);
Gso read_gso_json(const std::string& path);

void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

std::string kind_name(GsoKind kind);
GsoKind kind_from_name(const std::string& name);

}  // namespace io
}  // namespace spectemp
