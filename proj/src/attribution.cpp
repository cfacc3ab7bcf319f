// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#include "likeness/attribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "likeness/error.hpp"

namespace lj {

std::vector<double> attribution_weights(const ClfParams& p, WeightSource source) {
    std::vector<double> w(p.dims);
    const auto human = p.row(kHumanRow);
    const auto machine = p.row(kMachineRow);
    for (std::size_t k = 0; k < p.dims; ++k) {
        w[k] = source == WeightSource::difference ? machine[k] - human[k] : machine[k];
    }
    return w;
}

std::vector<double> contributions(std::span<const double> z, const ClfParams& p,
                                  WeightSource source) {
    if (!p.standardizer.fitted()) {
        throw ValidationError("contributions: classifier standardizer has not been fitted");
    }
    auto c = p.standardizer.apply(z);
    const auto w = attribution_weights(p, source);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= w[k];
    return c;
}

AttributionReport top_k_report(std::span<const double> c, std::size_t k) {
    AttributionReport r;
    r.contributions.assign(c.begin(), c.end());
    std::vector<int> order(c.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return std::abs(c[a]) > std::abs(c[b]); });
    order.resize(std::min(k, order.size()));
    for (int dim : order) {
        r.top.push_back({dim, c[dim], c[dim] > 0.0 ? Evidence::machine : Evidence::human});
    }
    return r;
}

AttributionReport explain(std::string id, std::span<const double> z, const ClfParams& p,
                          std::size_t k, WeightSource source) {
    auto r = top_k_report(contributions(z, p, source), k);
    const auto d = classify(z, p);
    r.id = std::move(id);
    r.decision = d.label;
    r.prob_machine = d.prob_machine;
    r.margin = d.margin;
    return r;
}

nlohmann::ordered_json to_json(const AttributionReport& r, const DimensionRegistry& reg) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["decision"] = to_string(r.decision);
    j["prob_machine"] = r.prob_machine;
    j["margin"] = r.margin;
    j["contributions"] = r.contributions;
    auto top = nlohmann::ordered_json::array();
    for (const auto& e : r.top) {
        nlohmann::ordered_json t;
        t["dim"] = e.dim;
        if (static_cast<std::size_t>(e.dim) < reg.size()) {
            t["code"] = reg.at(e.dim).code;
            t["name"] = reg.at(e.dim).name;
        }
        t["contribution"] = e.contribution;
        t["evidence"] = e.evidence == Evidence::machine ? "machine" : "human";
        top.push_back(std::move(t));
    }
    j["top"] = std::move(top);
    return j;
}

std::string format_table(const AttributionReport& r, const DimensionRegistry& reg) {
    std::string out = fmt::format("dialogue {}  decision {}  p(machine) {:.4f}  margin {:+.4f}\n",
                                  r.id, to_string(r.decision), r.prob_machine, r.margin);
    out += fmt::format("{:>4}  {:<4}  {:<28}  {:>10}  {}\n", "rank", "code", "dimension",
                       "c_k", "evidence");
    int rank = 1;
    for (const auto& e : r.top) {
        std::string_view code = "?";
        std::string_view name = "?";
        if (static_cast<std::size_t>(e.dim) < reg.size()) {
            code = reg.at(e.dim).code;
            name = reg.at(e.dim).name;
        }
        out += fmt::format("{:>4}  {:<4}  {:<28}  {:>+10.4f}  {}\n", rank++, code, name,
                           e.contribution, e.evidence == Evidence::machine ? "machine" : "human");
    }
    return out;
}

} // namespace lj
