#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "molmom/bench.hpp"
#include "molmom/error.hpp"
#include "molmom/pipeline.hpp"

namespace fs = std::filesystem;
using namespace molmom;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitUsage = 2;

// Thrown for invalid flag combinations detected after parsing.
struct UsageError : Error {
    using Error::Error;
};

struct Options {
    std::vector<std::string> inputs;
    std::string family = "all";
    std::string voxel_mode = "sphere";
    std::string geometric_variant = "zero_order";
    std::string nmad_mode = "class_pooled";
    std::string labels;
    std::string out;
    std::string csv;
    std::string arff;
    std::string manifest;
    RunConfig cfg;
};

void add_grid_flags(CLI::App& cmd, Options& o) {
    cmd.add_option("--n", o.cfg.n, "Grid size per axis for XYZ inputs")->capture_default_str();
    cmd.add_option("--voxel-mode", o.voxel_mode, "Voxelization mode: sphere or point")
        ->check(CLI::IsMember({"sphere", "point"}))
        ->capture_default_str();
    cmd.add_option("--margin", o.cfg.margin, "Empty border as a fraction of the grid per side")
        ->capture_default_str();
    cmd.add_option("--threads", o.cfg.threads, "Worker threads (0 = hardware concurrency)")
        ->capture_default_str();
}

void add_moment_flags(CLI::App& cmd, Options& o) {
    cmd.add_option("--family", o.family,
                   "Moment family: geometric, complex, legendre, zernike, hahn or all")
        ->capture_default_str();
    cmd.add_option("--max-order", o.cfg.max_order, "Maximum moment order")->capture_default_str();
    cmd.add_option("--hahn-mu", o.cfg.hahn_mu, "Hahn shape parameter mu (> -1)")->capture_default_str();
    cmd.add_option("--hahn-nu", o.cfg.hahn_nu, "Hahn shape parameter nu (> -1)")->capture_default_str();
    cmd.add_option("--geometric-variant", o.geometric_variant,
                   "Geometric moments: zero_order (voxel centres) or precise (exact voxel integrals)")
        ->check(CLI::IsMember({"zero_order", "precise"}))
        ->capture_default_str();
}

void finalize(Options& o) {
    o.cfg.voxel_mode = o.voxel_mode == "point" ? VoxelMode::point : VoxelMode::sphere;
    o.cfg.geometric_variant =
        o.geometric_variant == "precise" ? GeometricVariant::precise : GeometricVariant::zero_order;
    if (o.family == "all") {
        o.cfg.families.assign(std::begin(kAllFamilies), std::end(kAllFamilies));
    } else {
        try {
            o.cfg.families = {parse_family(o.family)};
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
    }
    try {
        o.cfg.validate();
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

std::vector<fs::path> paths(const std::vector<std::string>& in) { return {in.begin(), in.end()}; }

int report_errors(const std::vector<FileError>& errors) {
    for (const auto& e : errors) std::cerr << "error: " << e.path << ": " << e.message << "\n";
    return errors.empty() ? kExitOk : kExitPartial;
}

int cmd_voxelize(Options& o) {
    finalize(o);
    const fs::path out_dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
    const auto res = run_voxelize(paths(o.inputs), out_dir, o.cfg);
    std::string manifest = "id,file\n";
    for (const auto& [id, file] : res.manifest) manifest += id + "," + file + "\n";
    write_file(o.manifest.empty() ? out_dir / "manifest.csv" : fs::path(o.manifest), manifest);
    std::cout << res.manifest.size() << " grid(s) written to " << out_dir.string() << "\n";
    return report_errors(res.errors);
}

int cmd_featurize(Options& o) {
    finalize(o);
    if (o.csv.empty() && o.arff.empty()) throw UsageError("give --csv and/or --arff");
    const auto labels = read_labels(o.labels);
    const auto res = run_featurize(paths(o.inputs), labels, o.cfg);
    if (!o.csv.empty()) write_file(o.csv, to_csv(res.table));
    if (!o.arff.empty()) write_file(o.arff, to_arff(res.table));
    std::cout << res.table.ids.size() << " row(s) x " << res.table.columns.size() << " feature(s)\n";
    return report_errors(res.errors);
}

int cmd_stats(Options& o) {
    const NmadMode mode = o.nmad_mode == "leave_one_out" ? NmadMode::leave_one_out : NmadMode::class_pooled;
    const auto report = class_dispersion(to_dataset(parse_feature_csv(read_file(o.inputs.front()))), mode);
    const auto text = report_csv(report);
    if (o.out.empty())
        std::cout << text;
    else
        write_file(o.out, text);
    return kExitOk;
}

int cmd_bench(Options& o) {
    finalize(o);
    std::vector<VoxelGrid> grids;
    for (const auto& p : o.inputs) grids.push_back(load_grid(p, o.cfg));
    BenchOptions b;
    b.families = o.cfg.families;
    b.max_order = o.cfg.max_order;
    b.repeats = o.cfg.repeats;
    b.hahn_mu = o.cfg.hahn_mu;
    b.hahn_nu = o.cfg.hahn_nu;
    const auto text = bench_report_csv(run_bench(grids, b), b.repeats);
    if (o.out.empty())
        std::cout << text;
    else
        write_file(o.out, text);
    return kExitOk;
}

int cmd_reconstruct(Options& o) {
    const auto grid = load_binvox(o.inputs.front());
    const HahnParams params{o.cfg.hahn_mu, o.cfg.hahn_nu, static_cast<int>(grid.n())};
    try {
        params.validate();
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    if (grid.n() > kMaxReconstructN)
        throw UsageError("complete Hahn reconstruction needs n <= " + std::to_string(kMaxReconstructN) +
                         " (got n=" + std::to_string(grid.n()) +
                         "); it computes all n^3 coefficients. Downsample the grid or use featurize.");
    const auto res = run_reconstruct(grid, params);
    if (!o.out.empty()) save_binvox(res.reconstructed, o.out);
    std::cout << "max_abs_error " << res.max_abs_error << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"3D moment descriptors for voxelized molecules"};
    app.set_config("--config", "", "TOML/INI file with flag values (sections per subcommand)");
    app.require_subcommand(1);
    Options o;

    auto* vox = app.add_subcommand("voxelize", "Voxelize XYZ files into binvox grids");
    vox->add_option("inputs", o.inputs, "XYZ files")->required()->check(CLI::ExistingFile);
    vox->add_option("-o,--out", o.out, "Output directory")->capture_default_str();
    vox->add_option("--manifest", o.manifest, "Manifest path (default <out>/manifest.csv)");
    add_grid_flags(*vox, o);

    auto* feat = app.add_subcommand("featurize", "Compute order-limited moment features for a labelled set");
    feat->add_option("inputs", o.inputs, "binvox or XYZ files")->required()->check(CLI::ExistingFile);
    feat->add_option("--labels", o.labels, "CSV of id,class")->required()->check(CLI::ExistingFile);
    feat->add_option("--csv", o.csv, "CSV output path");
    feat->add_option("--arff", o.arff, "ARFF output path");
    add_grid_flags(*feat, o);
    add_moment_flags(*feat, o);

    auto* stats = app.add_subcommand("stats", "Intra/inter-class dispersion report for a featurized CSV");
    stats->add_option("dataset", o.inputs, "Feature CSV produced by featurize")
        ->required()
        ->expected(1)
        ->check(CLI::ExistingFile);
    stats->add_option("-o,--out", o.out, "Report path (default stdout)");
    stats->add_option("--nmad-mode", o.nmad_mode,
                      "Comparison sets: class_pooled (class incl. self / whole dataset) or "
                      "leave_one_out (class without self / other classes)")
        ->check(CLI::IsMember({"class_pooled", "leave_one_out"}))
        ->capture_default_str();

    auto* bench = app.add_subcommand("bench", "Time and memory per voxel for each family (machine dependent)");
    bench->add_option("inputs", o.inputs, "binvox or XYZ files")->required()->check(CLI::ExistingFile);
    bench->add_option("--repeats", o.cfg.repeats, "Timed runs per family and grid")->capture_default_str();
    bench->add_option("-o,--out", o.out, "Report path (default stdout)");
    add_grid_flags(*bench, o);
    add_moment_flags(*bench, o);

    auto* rec = app.add_subcommand("reconstruct", "Complete Hahn forward/inverse round trip of a small grid");
    rec->add_option("grid", o.inputs, "binvox file with n <= 16")->required()->expected(1)->check(CLI::ExistingFile);
    rec->add_option("-o,--out", o.out, "Reconstructed binvox path");
    rec->add_option("--hahn-mu", o.cfg.hahn_mu, "Hahn shape parameter mu (> -1)")->capture_default_str();
    rec->add_option("--hahn-nu", o.cfg.hahn_nu, "Hahn shape parameter nu (> -1)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (vox->parsed()) return cmd_voxelize(o);
        if (feat->parsed()) return cmd_featurize(o);
        if (stats->parsed()) return cmd_stats(o);
        if (bench->parsed()) return cmd_bench(o);
        if (rec->parsed()) return cmd_reconstruct(o);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPartial;
    }
    return kExitUsage;
}
