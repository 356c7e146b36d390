#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace molmom {

double median(std::span<const double> xs);
// median(|x - median(x)|)
double mad(std::span<const double> xs);
// mad / |reference| * 100; nullopt for a zero reference.
std::optional<double> nmad(double mad_value, double reference);
// Linear interpolation at 0.25(n-1) and 0.75(n-1) of the sorted values; needs n >= 2.
std::pair<double, double> quartiles(std::span<const double> xs);
// (Q3 - Q1) / (Q3 + Q1); nullopt when Q3 + Q1 == 0.
std::optional<double> qcd(std::span<const double> xs);

struct LabeledDataset {
    std::vector<std::string> feature_names;
    std::vector<std::vector<double>> rows;  // one per molecule
    std::vector<std::string> labels;
    std::vector<std::string> ids;

    void validate() const;
};

// Which molecules form the comparison set X_i for reference molecule r.
enum class NmadMode {
    // intra: every molecule of r's class; inter: every molecule in the dataset
    class_pooled,
    // intra: r's class without r; inter: molecules of the other classes
    leave_one_out,
};

enum class Degeneracy {
    none,
    zero_reference,  // some molecule has feature value 0, NMAD undefined
    zero_dispersion  // both intra and inter NMAD quartiles sum to zero
};

struct FeatureDispersion {
    std::string name;
    double intra_qcd = 0;
    double inter_qcd = 0;
    Degeneracy degenerate = Degeneracy::none;
    bool intra_lower() const { return degenerate == Degeneracy::none && intra_qcd < inter_qcd; }
};

struct DispersionReport {
    std::vector<FeatureDispersion> features;
    std::size_t usable = 0;       // non-degenerate features
    std::size_t intra_lower = 0;  // usable features with intra QCD < inter QCD
    // intra_lower / usable; nullopt when every feature is degenerate
    std::optional<double> intra_class_variance_ratio;
};

// Per feature, NMAD of every molecule against its intra and inter comparison
// sets, then QCD over those per-molecule NMADs. A QCD whose quartiles are both
// zero counts as 0 (no dispersion) as long as the other side is defined.
DispersionReport class_dispersion(const LabeledDataset& data, NmadMode mode = NmadMode::class_pooled);

// Restricts a report to the features whose names start with prefix and recomputes the ratio.
DispersionReport subset_report(const DispersionReport& report, const std::string& prefix);

}  // namespace molmom
