#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "psmine/miner.hpp"

namespace psmine {

std::string format_real(double value) {
    if (std::isinf(value)) return value < 0 ? "-inf" : "inf";
    if (std::isnan(value)) return "nan";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

namespace {

double parse_real(const std::string& field) {
    if (field == "-inf") return -std::numeric_limits<double>::infinity();
    if (field == "inf") return std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ContractViolation("invalid number '" + field + "' in catalog");
    return v;
}

}  // namespace

void write_catalog_tsv(std::ostream& out, const PSCatalog& catalog) {
    out << "# score\tmeanFitness\tsimplicity\tatomicity\tpattern\n";
    for (const auto& e : catalog.entries)
        out << format_real(e.score) << '\t' << format_real(e.metrics.mean_fitness) << '\t' << e.metrics.simplicity
            << '\t' << format_real(e.metrics.atomicity) << '\t' << to_string(e.ps) << '\n';
}

PSCatalog read_catalog_tsv(std::istream& in) {
    PSCatalog catalog;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, '\t')) fields.push_back(field);
        if (fields.size() != 5)
            throw ContractViolation("catalog line " + std::to_string(line_no) + ": expected 5 tab-separated fields");
        CatalogEntry e;
        e.score = parse_real(fields[0]);
        e.metrics.mean_fitness = parse_real(fields[1]);
        e.metrics.simplicity = static_cast<std::size_t>(std::stoul(fields[2]));
        e.metrics.atomicity = parse_real(fields[3]);
        e.ps = parse_partial(fields[4]);
        if (catalog.contains(e.ps))
            throw ContractViolation("catalog line " + std::to_string(line_no) + ": duplicate pattern");
        catalog.entries.push_back(std::move(e));
    }
    return catalog;
}

std::string catalog_to_json(const PSCatalog& catalog) {
    nlohmann::ordered_json doc;
    doc["evals_used"] = catalog.evals_used;
    auto& entries = doc["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : catalog.entries) {
        nlohmann::ordered_json j;
        j["pattern"] = to_string(e.ps);
        j["score"] = e.score;
        // JSON has no infinity; WORST is written as null
        if (is_worst(e.metrics.mean_fitness))
            j["mean_fitness"] = nullptr;
        else
            j["mean_fitness"] = e.metrics.mean_fitness;
        j["simplicity"] = e.metrics.simplicity;
        j["atomicity"] = e.metrics.atomicity;
        entries.push_back(std::move(j));
    }
    return doc.dump(2);
}

PSCatalog catalog_from_json(std::string_view text) {
    const auto doc = nlohmann::json::parse(text.begin(), text.end());
    PSCatalog catalog;
    catalog.evals_used = doc.value("evals_used", std::size_t{0});
    for (const auto& j : doc.at("entries")) {
        CatalogEntry e;
        e.ps = parse_partial(j.at("pattern").get<std::string>());
        e.score = j.at("score").get<double>();
        e.metrics.mean_fitness = j.at("mean_fitness").is_null() ? kWorstMeanFitness : j.at("mean_fitness").get<double>();
        e.metrics.simplicity = j.at("simplicity").get<std::size_t>();
        e.metrics.atomicity = j.at("atomicity").get<double>();
        catalog.entries.push_back(std::move(e));
    }
    return catalog;
}

}  // namespace psmine
