#include "molmom/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "molmom/encoding.hpp"
#include "molmom/error.hpp"

namespace molmom {

namespace fs = std::filesystem;

void RunConfig::validate() const {
    if (families.empty()) throw Error("no moment family selected");
    if (max_order < 0) throw Error("max order must be >= 0");
    if (n < 2) throw Error("grid size must be >= 2");
    if (!(margin >= 0.0 && margin <= 0.45)) throw Error("margin must lie in [0, 0.45]");
    if (repeats < 1) throw Error("repeats must be >= 1");
    hahn_params(n).validate();
}

VoxelizeOptions RunConfig::voxelize_options() const {
    VoxelizeOptions o;
    o.n = n;
    o.mode = voxel_mode;
    o.margin = margin;
    return o;
}

HahnParams RunConfig::hahn_params(std::size_t grid_n) const {
    return {hahn_mu, hahn_nu, static_cast<int>(grid_n)};
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

std::string molecule_id(const fs::path& path) { return path.stem().string(); }

VoxelGrid load_grid(const fs::path& path, const RunConfig& cfg) {
    const auto text = read_file(path);
    if (text.rfind("#binvox", 0) == 0) {
        const std::span<const std::uint8_t> bytes(reinterpret_cast<const std::uint8_t*>(text.data()), text.size());
        return read_binvox(bytes);
    }
    return voxelize(parse_xyz(text), cfg.voxelize_options());
}

MomentSet compute_moments(const VoxelGrid& grid, Family family, const RunConfig& cfg) {
    switch (family) {
        case Family::geometric: return geometric_moments(grid, cfg.max_order, cfg.geometric_variant);
        case Family::complex: return complex_moments_3d(grid, cfg.max_order);
        case Family::legendre: return legendre_moments_3d(grid, cfg.max_order);
        case Family::zernike: return zernike_moments_3d(grid, cfg.max_order);
        case Family::hahn: {
            if (grid.n() != cfg.n)
                throw Error("grid-size mismatch: grid n=" + std::to_string(grid.n()) +
                            " but Hahn parameters use n=" + std::to_string(cfg.n));
            return hahn_moments_3d(grid, cfg.max_order, cfg.hahn_params(grid.n()));
        }
    }
    throw Error("unknown family");
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) fn(i);
    };
    if (threads <= 1) {
        worker();
        return;
    }
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
}

VoxelizeResult run_voxelize(const std::vector<fs::path>& inputs, const fs::path& out_dir, const RunConfig& cfg) {
    cfg.validate();
    fs::create_directories(out_dir);
    std::vector<std::optional<std::string>> written(inputs.size());
    std::vector<std::optional<std::string>> failed(inputs.size());
    parallel_for(inputs.size(), cfg.threads, [&](std::size_t i) {
        try {
            const auto grid = voxelize(parse_xyz(read_file(inputs[i])), cfg.voxelize_options());
            const auto dst = out_dir / (molecule_id(inputs[i]) + ".binvox");
            save_binvox(grid, dst.string());
            written[i] = dst.string();
        } catch (const std::exception& e) {
            failed[i] = e.what();
        }
    });
    VoxelizeResult res;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (written[i]) res.manifest.emplace_back(molecule_id(inputs[i]), *written[i]);
        if (failed[i]) res.errors.push_back({inputs[i].string(), *failed[i]});
    }
    return res;
}

namespace {

std::string shortest_decimal(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

bool needs_quotes(const std::string& s) { return s.find_first_of(",\"\r\n") != std::string::npos; }

std::string csv_field(const std::string& s) {
    if (!needs_quotes(s)) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string arff_name(const std::string& s) {
    if (s.find_first_of(" ,{}%'\"\t") == std::string::npos) return s;
    std::string out = "'";
    for (char c : s) {
        if (c == '\'' || c == '\\') out += '\\';
        out += c;
    }
    return out + "'";
}

bool encoded_column(const std::string& name) {
    return name.rfind("complex_", 0) == 0 || name.rfind("zernike_", 0) == 0;
}

}  // namespace

std::vector<std::string> feature_columns(const std::vector<Family>& families, int max_order) {
    std::vector<std::string> cols;
    for (Family f : families)
        for (const auto& idx : canonical_indices(f, max_order)) cols.push_back(feature_name(f, idx));
    return cols;
}

FeaturizeResult run_featurize(const std::vector<fs::path>& inputs, const std::map<std::string, std::string>& labels,
                              const RunConfig& cfg) {
    cfg.validate();
    FeaturizeResult res;
    res.table.columns = feature_columns(cfg.families, cfg.max_order);

    std::vector<std::optional<std::vector<std::string>>> rows(inputs.size());
    std::vector<std::optional<std::string>> failed(inputs.size());
    parallel_for(inputs.size(), cfg.threads, [&](std::size_t i) {
        try {
            if (!labels.contains(molecule_id(inputs[i])))
                throw Error("unlabeled molecule '" + molecule_id(inputs[i]) + "'");
            const auto grid = load_grid(inputs[i], cfg);
            std::vector<std::string> cells;
            for (Family f : cfg.families) {
                const auto set = compute_moments(grid, f, cfg);
                for (const auto& v : set.values)
                    cells.push_back(is_spherical(f) ? interleave(v).decimal() : shortest_decimal(v.real()));
            }
            rows[i] = std::move(cells);
        } catch (const std::exception& e) {
            failed[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (rows[i]) {
            const auto id = molecule_id(inputs[i]);
            res.table.ids.push_back(id);
            res.table.labels.push_back(labels.at(id));
            res.table.cells.push_back(std::move(*rows[i]));
        }
        if (failed[i]) res.errors.push_back({inputs[i].string(), *failed[i]});
    }
    return res;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (any || !field.empty()) {
                row.push_back(std::move(field));
                rows.push_back(std::move(row));
            }
            row.clear();
            field.clear();
            any = false;
        } else {
            field += c;
            any = true;
        }
    }
    if (quoted) throw ParseError("unterminated quoted CSV field");
    if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::map<std::string, std::string> read_labels(const fs::path& path) {
    std::map<std::string, std::string> labels;
    const auto rows = parse_csv(read_file(path));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (r == 0 && rows[r].size() == 2 && rows[r][0] == "id" && rows[r][1] == "class") continue;
        if (rows[r].size() != 2) throw ParseError("labels file needs 'id,class' rows", r + 1);
        labels[rows[r][0]] = rows[r][1];
    }
    return labels;
}

std::string to_csv(const FeatureTable& t) {
    std::string out = "id";
    for (const auto& c : t.columns) out += "," + csv_field(c);
    out += ",class\n";
    for (std::size_t r = 0; r < t.cells.size(); ++r) {
        out += csv_field(t.ids[r]);
        for (const auto& cell : t.cells[r]) out += "," + csv_field(cell);
        out += "," + csv_field(t.labels[r]) + "\n";
    }
    return out;
}

std::string to_arff(const FeatureTable& t, const std::string& relation) {
    std::set<std::string> classes(t.labels.begin(), t.labels.end());
    std::string out = "@relation " + arff_name(relation) + "\n\n";
    for (const auto& c : t.columns) out += "@attribute " + arff_name(c) + " numeric\n";
    out += "@attribute class {";
    bool first = true;
    for (const auto& c : classes) {
        out += (first ? "" : ",") + arff_name(c);
        first = false;
    }
    out += "}\n\n@data\n";
    for (std::size_t r = 0; r < t.cells.size(); ++r) {
        out += "% " + t.ids[r] + "\n";
        for (const auto& cell : t.cells[r]) out += cell + ",";
        out += arff_name(t.labels[r]) + "\n";
    }
    return out;
}

FeatureTable parse_feature_csv(const std::string& text) {
    const auto rows = parse_csv(text);
    if (rows.empty()) throw ParseError("empty dataset file");
    const auto& header = rows[0];
    if (header.size() < 3 || header.front() != "id" || header.back() != "class")
        throw ParseError("dataset header must be 'id,<features...>,class'", 1);
    FeatureTable t;
    t.columns.assign(header.begin() + 1, header.end() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != header.size())
            throw ParseError("row has " + std::to_string(rows[r].size()) + " fields, header has " +
                                 std::to_string(header.size()),
                             r + 1);
        t.ids.push_back(rows[r].front());
        t.labels.push_back(rows[r].back());
        t.cells.emplace_back(rows[r].begin() + 1, rows[r].end() - 1);
    }
    return t;
}

LabeledDataset to_dataset(const FeatureTable& t) {
    LabeledDataset d;
    d.feature_names = t.columns;
    d.labels = t.labels;
    d.ids = t.ids;
    std::vector<bool> encoded;
    for (const auto& c : t.columns) encoded.push_back(encoded_column(c));
    for (std::size_t r = 0; r < t.cells.size(); ++r) {
        std::vector<double> row;
        row.reserve(t.cells[r].size());
        for (std::size_t c = 0; c < t.cells[r].size(); ++c) {
            const auto& cell = t.cells[r][c];
            if (encoded[c]) {
                row.push_back(std::abs(decode_feature(cell)));
                continue;
            }
            double v = 0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v))
                throw ParseError("non-numeric value '" + cell + "' in column " + t.columns[c], r + 2);
            row.push_back(v);
        }
        d.rows.push_back(std::move(row));
    }
    return d;
}

namespace {

std::string_view degeneracy_name(Degeneracy d) {
    switch (d) {
        case Degeneracy::none: return "0";
        case Degeneracy::zero_reference: return "zero_reference";
        case Degeneracy::zero_dispersion: return "zero_dispersion";
    }
    return "?";
}

std::string summary_row(const std::string& scope, const DispersionReport& r) {
    return "#summary," + scope + "," +
           (r.intra_class_variance_ratio ? shortest_decimal(*r.intra_class_variance_ratio) : std::string("nan")) +
           "," + std::to_string(r.usable) + "," + std::to_string(r.intra_lower) + "," +
           std::to_string(r.features.size() - r.usable) + "\n";
}

}  // namespace

std::string report_csv(const DispersionReport& report) {
    std::string out = "feature_index,feature,intra_qcd,inter_qcd,degenerate\n";
    for (std::size_t i = 0; i < report.features.size(); ++i) {
        const auto& f = report.features[i];
        out += std::to_string(i) + "," + csv_field(f.name) + "," + shortest_decimal(f.intra_qcd) + "," +
               shortest_decimal(f.inter_qcd) + "," + std::string(degeneracy_name(f.degenerate)) + "\n";
    }
    out += "#summary,scope,ratio,usable,intra_lower,degenerate\n";
    for (Family fam : kAllFamilies) {
        const auto sub = subset_report(report, std::string(family_name(fam)) + "_");
        if (!sub.features.empty()) out += summary_row(std::string(family_name(fam)), sub);
    }
    out += summary_row("all", report);
    return out;
}

ReconstructResult run_reconstruct(const VoxelGrid& grid, const HahnParams& params) {
    if (grid.n() > kMaxReconstructN)
        throw Error("complete Hahn reconstruction needs n <= " + std::to_string(kMaxReconstructN) + " (got n=" +
                    std::to_string(grid.n()) + "); it computes all n^3 coefficients. Downsample the grid first.");
    const auto moments = hahn_moments_complete(grid, params);
    ReconstructResult res{reconstruct_hahn(moments), 0.0};
    for (std::size_t i = 0; i < grid.size(); ++i)
        res.max_abs_error = std::max(res.max_abs_error, std::abs(res.reconstructed.values()[i] - grid.values()[i]));
    return res;
}

}  // namespace molmom
