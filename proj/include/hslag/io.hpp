#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hslag/boundary.hpp"
#include "hslag/greens.hpp"
#include "hslag/grid.hpp"
#include "hslag/immersion.hpp"
#include "hslag/singularity.hpp"
#include "hslag/variational.hpp"
#include "hslag/wente.hpp"

namespace hslag {

// One run description; JSON on disk. Emission is canonical (sorted keys,
// shortest round-trip floats), so parse -> emit -> parse is the identity.
struct RunConfig {
    SingularityConfig singularities;
    BoundaryTrace boundary;
    double h = 1.0 / 64;
    std::vector<double> schedule{0.5};
    int truncation = 16;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
};

RunConfig parse_run_config(const std::string& text);
std::string emit_run_config(const RunConfig& cfg);
RunConfig load_run_config(const std::string& path);

// All writers go through a temp file in the target directory followed by a
// rename, and create parent directories on demand.
void atomic_write_text(const std::string& path, const std::string& content);
void atomic_write_bytes(const std::string& path, const std::vector<char>& bytes);

std::string energy_csv(const std::vector<EnergyRow>& rows);
std::string margins_csv(const std::vector<WenteMarginRow>& rows);
std::string fit_json(const SweepResult& sweep);
std::string rank_json(const RankReport& report);
std::string admissibility_json(const AdmissibilityReport& report);
std::string residual_json(const std::vector<ResidualReport>& reports);

// Node dump: little-endian header (magic "HSLG", version, h, count) followed
// by (i, j, Re u, Im u) records in node-id order; the sidecar JSON carries
// the same header fields for tooling.
std::vector<char> field_bytes(const ScalarField& u);
std::string field_sidecar_json(const ScalarField& u);

enum class MeshProjection { DropImPhi2, DropRePhi2, DropImPhi1, DropRePhi1 };

void write_ply(const std::string& path, const MeshData& mesh, bool ascii = false,
               MeshProjection proj = MeshProjection::DropImPhi2);
void write_obj(const std::string& path, const MeshData& mesh,
               MeshProjection proj = MeshProjection::DropImPhi2);

// %.17g, shared by every text writer.
std::string format_double(double v);

}  // namespace hslag
