#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hartogs/cartan.hpp"
#include "hartogs/errors.hpp"

namespace hartogs {

struct CatalogEntry {
    std::string name;
    int r = 0;
    int a = 0;
    int b = 0;
    std::optional<int> expected_gamma;
    std::optional<int> expected_n;
};

struct CatalogIssue {
    std::string name;
    std::string message;
};

struct CatalogReport {
    std::size_t entries = 0;
    std::vector<CatalogIssue> issues;
    bool valid() const { return issues.empty(); }
};

/// Parses a JSON catalog: an array of { name, r, a, b, expected_gamma?,
/// expected_n? }.  Malformed documents throw InvalidArgument.
inline std::vector<CatalogEntry> load_catalog(std::istream& in) {
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw InvalidArgument(std::string("malformed catalog JSON: ") + e.what());
    }
    if (!doc.is_array()) throw InvalidArgument("catalog root must be a JSON array");
    std::vector<CatalogEntry> entries;
    for (const auto& item : doc) {
        if (!item.is_object() || !item.contains("name") || !item.contains("r") ||
            !item.contains("a") || !item.contains("b"))
            throw InvalidArgument("catalog entries need name, r, a, b");
        CatalogEntry e;
        try {
            e.name = item.at("name").get<std::string>();
            e.r = item.at("r").get<int>();
            e.a = item.at("a").get<int>();
            e.b = item.at("b").get<int>();
            if (item.contains("expected_gamma")) e.expected_gamma = item.at("expected_gamma").get<int>();
            if (item.contains("expected_n")) e.expected_n = item.at("expected_n").get<int>();
        } catch (const std::exception& ex) {
            throw InvalidArgument(std::string("malformed catalog entry: ") + ex.what());
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

/// Checks every entry's (r,a,b,gamma,n) against the genus and dimension
/// formulas; mismatches and invalid triples are listed, never thrown.
inline CatalogReport validate_catalog(const std::vector<CatalogEntry>& entries) {
    CatalogReport report;
    report.entries = entries.size();
    for (const auto& e : entries) {
        CartanParams p;
        try {
            p = make_params(e.r, e.a, e.b);
        } catch (const InvalidArgument& ex) {
            report.issues.push_back({e.name, ex.what()});
            continue;
        }
        if (e.expected_gamma && *e.expected_gamma != p.gamma)
            report.issues.push_back(
                {e.name, "gamma should be " + std::to_string(p.gamma) + ", catalog says " +
                             std::to_string(*e.expected_gamma)});
        if (e.expected_n && *e.expected_n != p.n)
            report.issues.push_back(
                {e.name, "n should be " + std::to_string(p.n) + ", catalog says " +
                             std::to_string(*e.expected_n)});
    }
    return report;
}

} // namespace hartogs
