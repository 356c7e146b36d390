#include "molmom/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "molmom/error.hpp"

namespace molmom {

double median(std::span<const double> xs) {
    if (xs.empty()) throw Error("median of an empty list");
    std::vector<double> v(xs.begin(), xs.end());
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mad(std::span<const double> xs) {
    const double med = median(xs);
    std::vector<double> dev;
    dev.reserve(xs.size());
    for (double x : xs) dev.push_back(std::abs(x - med));
    return median(dev);
}

std::optional<double> nmad(double mad_value, double reference) {
    if (reference == 0.0) return std::nullopt;
    return mad_value / std::abs(reference) * 100.0;
}

std::pair<double, double> quartiles(std::span<const double> xs) {
    if (xs.size() < 2) throw Error("quartiles need at least two values");
    std::vector<double> v(xs.begin(), xs.end());
    std::sort(v.begin(), v.end());
    auto at = [&](double pos) {
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, v.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return v[lo] + frac * (v[hi] - v[lo]);
    };
    const double last = static_cast<double>(v.size() - 1);
    return {at(0.25 * last), at(0.75 * last)};
}

std::optional<double> qcd(std::span<const double> xs) {
    const auto [q1, q3] = quartiles(xs);
    if (q1 + q3 == 0.0) return std::nullopt;
    return (q3 - q1) / (q3 + q1);
}

void LabeledDataset::validate() const {
    if (rows.size() != labels.size()) throw Error("dataset has " + std::to_string(rows.size()) + " rows but " +
                                                  std::to_string(labels.size()) + " labels");
    if (!ids.empty() && ids.size() != rows.size()) throw Error("dataset id count does not match rows");
    for (const auto& r : rows)
        if (r.size() != feature_names.size()) throw Error("dataset row width does not match feature count");
}

DispersionReport class_dispersion(const LabeledDataset& data, NmadMode mode) {
    data.validate();
    std::map<std::string, std::vector<std::size_t>> classes;
    for (std::size_t r = 0; r < data.labels.size(); ++r) classes[data.labels[r]].push_back(r);
    if (classes.size() < 2) throw Error("inter-class undefined: dataset has a single class");
    for (const auto& [label, members] : classes)
        if (members.size() < 2)
            throw Error("class '" + label + "' has fewer than 2 members");

    const auto rows = data.rows.size();
    DispersionReport report;
    report.features.reserve(data.feature_names.size());
    std::vector<double> intra_nmad, inter_nmad, set;
    for (std::size_t f = 0; f < data.feature_names.size(); ++f) {
        FeatureDispersion fd{data.feature_names[f]};
        intra_nmad.clear();
        inter_nmad.clear();
        for (std::size_t r = 0; r < rows && fd.degenerate == Degeneracy::none; ++r) {
            const double ref = data.rows[r][f];
            const auto& own = classes[data.labels[r]];

            set.clear();
            for (std::size_t j : own)
                if (mode == NmadMode::class_pooled || j != r) set.push_back(data.rows[j][f]);
            const auto intra = nmad(mad(set), ref);

            set.clear();
            for (std::size_t j = 0; j < rows; ++j)
                if (mode == NmadMode::class_pooled || data.labels[j] != data.labels[r]) set.push_back(data.rows[j][f]);
            const auto inter = nmad(mad(set), ref);

            if (!intra || !inter) {
                fd.degenerate = Degeneracy::zero_reference;
                break;
            }
            intra_nmad.push_back(*intra);
            inter_nmad.push_back(*inter);
        }
        if (fd.degenerate == Degeneracy::none) {
            const auto a = qcd(intra_nmad), b = qcd(inter_nmad);
            if (!a && !b) fd.degenerate = Degeneracy::zero_dispersion;
            fd.intra_qcd = a.value_or(0.0);
            fd.inter_qcd = b.value_or(0.0);
        }
        report.features.push_back(std::move(fd));
    }
    return subset_report(report, "");
}

DispersionReport subset_report(const DispersionReport& report, const std::string& prefix) {
    DispersionReport out;
    for (const auto& f : report.features) {
        if (f.name.compare(0, prefix.size(), prefix) != 0) continue;
        out.features.push_back(f);
        if (f.degenerate != Degeneracy::none) continue;
        ++out.usable;
        if (f.intra_lower()) ++out.intra_lower;
    }
    if (out.usable) out.intra_class_variance_ratio = static_cast<double>(out.intra_lower) / static_cast<double>(out.usable);
    return out;
}

}  // namespace molmom
