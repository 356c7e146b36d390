#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "molmom/dispersion.hpp"
#include "molmom/hahn.hpp"
#include "molmom/moments.hpp"
#include "molmom/voxel.hpp"

namespace molmom {

struct RunConfig {
    std::vector<Family> families{std::begin(kAllFamilies), std::end(kAllFamilies)};
    int max_order = kFeatureOrder;
    std::size_t n = 64;
    double hahn_mu = 0.0;
    double hahn_nu = 0.0;
    VoxelMode voxel_mode = VoxelMode::sphere;
    double margin = 0.05;
    GeometricVariant geometric_variant = GeometricVariant::zero_order;
    int repeats = 50;
    unsigned threads = 0;  // 0: hardware concurrency

    void validate() const;
    VoxelizeOptions voxelize_options() const;
    HahnParams hahn_params(std::size_t grid_n) const;
};

// File stem, used as the molecule id everywhere.
std::string molecule_id(const std::filesystem::path& path);

// binvox files are read as-is; anything else is parsed as XYZ and voxelized.
VoxelGrid load_grid(const std::filesystem::path& path, const RunConfig& cfg);

MomentSet compute_moments(const VoxelGrid& grid, Family family, const RunConfig& cfg);

// Runs fn(i) for i in [0, count) on a bounded pool of workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

struct FileError {
    std::string path;
    std::string message;
};

// --- voxelize ---

struct VoxelizeResult {
    std::vector<std::pair<std::string, std::string>> manifest;  // id -> binvox path
    std::vector<FileError> errors;
};
VoxelizeResult run_voxelize(const std::vector<std::filesystem::path>& inputs,
                            const std::filesystem::path& out_dir, const RunConfig& cfg);

// --- featurize / dataset files ---

// Feature table with exported cell text: shortest round-trip decimals for real
// families, bit-interleaved decimal integers for complex families.
struct FeatureTable {
    std::vector<std::string> columns;  // feature columns only
    std::vector<std::string> ids;
    std::vector<std::string> labels;
    std::vector<std::vector<std::string>> cells;
};

std::vector<std::string> feature_columns(const std::vector<Family>& families, int max_order);

struct FeaturizeResult {
    FeatureTable table;
    std::vector<FileError> errors;
};
// Rows keep the input order. Inputs without a label are reported as errors.
FeaturizeResult run_featurize(const std::vector<std::filesystem::path>& inputs,
                              const std::map<std::string, std::string>& labels, const RunConfig& cfg);

std::map<std::string, std::string> read_labels(const std::filesystem::path& path);

// CSV: id, feature columns..., class. RFC 4180 quoting.
std::string to_csv(const FeatureTable& table);
// ARFF: numeric feature attributes plus a nominal class over the sorted label set.
std::string to_arff(const FeatureTable& table, const std::string& relation = "molmom");

std::vector<std::vector<std::string>> parse_csv(const std::string& text);
FeatureTable parse_feature_csv(const std::string& text);

// Statistics view: real columns as-is, encoded complex columns as |c|.
LabeledDataset to_dataset(const FeatureTable& table);

// --- stats ---

// Rows: feature_index,feature,intra_qcd,inter_qcd,degenerate; then "#summary" rows
// (scope,ratio,usable,intra_lower,degenerate) for each family present and for "all".
std::string report_csv(const DispersionReport& report);

// --- reconstruct ---

inline constexpr std::size_t kMaxReconstructN = 16;

struct ReconstructResult {
    VoxelGrid reconstructed;  // real-valued reconstruction
    double max_abs_error = 0;
};
ReconstructResult run_reconstruct(const VoxelGrid& grid, const HahnParams& params);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace molmom
