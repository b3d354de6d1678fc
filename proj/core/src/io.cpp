#include "tdesign/io.hpp"

#include "tdesign/errors.hpp"
#include "tdesign/numeric.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <utility>

namespace tdesign::io {
namespace {

using nlohmann::json;

json parse_file(const std::filesystem::path& path, const char* expected_schema) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("io: cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("io: " + path.string() + " is not valid JSON (" + e.what() +
                                 ")");
    }
    if (!j.is_object() || j.value("schema", "") != expected_schema)
        throw std::runtime_error("io: " + path.string() + " does not carry schema \"" +
                                 expected_schema + "\"");
    return j;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("io: cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("io: short write to " + path.string());
}

template <typename F>
auto read_fields(const std::filesystem::path& path, F&& body) {
    try {
        return body();
    } catch (const json::exception& e) {
        throw std::runtime_error("io: " + path.string() +
                                 " is missing a field or mistypes one (" + e.what() + ")");
    }
}

json measure_to_json(const rules1d::MeasureTag& m) {
    switch (m.kind()) {
        case rules1d::MeasureKind::gaussian: return json{{"kind", "gaussian"}};
        case rules1d::MeasureKind::chebyshev: return json{{"kind", "chebyshev"}};
        case rules1d::MeasureKind::custom: {
            json moments = json::array();
            for (const auto& r : m.custom_moments()) moments.push_back(rational_to_string(r));
            return json{{"kind", "custom"}, {"moments", std::move(moments)}};
        }
    }
    throw std::logic_error("io: unreachable measure kind");
}

rules1d::MeasureTag measure_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "gaussian") return rules1d::MeasureTag::gaussian();
    if (kind == "chebyshev") return rules1d::MeasureTag::chebyshev();
    if (kind == "custom") {
        std::vector<Rational> moments;
        for (const auto& s : j.at("moments"))
            moments.push_back(rational_from_string(s.get<std::string>()));
        return rules1d::MeasureTag::custom(std::move(moments));
    }
    throw std::runtime_error("io: unknown measure kind \"" + kind + "\"");
}

json rule_to_json(const rules1d::Rule1D& rule) {
    json j{{"measure", measure_to_json(rule.measure)},
           {"degree", rule.exactness_degree},
           {"nodes", rule.nodes},
           {"weights", rule.weights}};
    if (rule.rational_weights)
        j["rational_weights"] = json{{"q", rule.rational_weights->denom},
                                     {"parts", rule.rational_weights->parts}};
    return j;
}

rules1d::Rule1D rule_from_json(const json& j) {
    rules1d::Rule1D rule;
    rule.measure = measure_from_json(j.at("measure"));
    rule.exactness_degree = j.at("degree").get<int>();
    rule.nodes = j.at("nodes").get<std::vector<double>>();
    rule.weights = j.at("weights").get<std::vector<double>>();
    if (rule.nodes.size() != rule.weights.size() || rule.nodes.empty())
        throw std::runtime_error("io: rule nodes and weights do not line up");
    if (j.contains("rational_weights")) {
        const auto& rw = j.at("rational_weights");
        rule.rational_weights =
            rules1d::RationalWeights{rw.at("q").get<std::int64_t>(),
                                     rw.at("parts").get<std::vector<std::int64_t>>()};
    }
    return rule;
}

oa::Certification certification_from_name(const std::string& s) {
    if (s == "none") return oa::Certification::none;
    if (s == "exhaustive") return oa::Certification::exhaustive;
    if (s == "linear") return oa::Certification::linear;
    throw std::runtime_error("io: unknown certification \"" + s + "\"");
}

}  // namespace

void save_oa(const oa::OrthogonalArray& a, const std::filesystem::path& path) {
    json j{{"schema", "oa/1"},
           {"q", a.q},
           {"k", a.k},
           {"N", a.runs},
           {"strength", a.certified_strength},
           {"certification", oa::to_string(a.certification)}};

    if (const auto* rows = std::get_if<oa::ExplicitRows>(&a.storage)) {
        json table = json::array();
        for (std::size_t r = 0; r < a.runs; ++r) {
            json row = json::array();
            for (std::size_t c = 0; c < a.k; ++c) row.push_back(rows->data[r * a.k + c]);
            table.push_back(std::move(row));
        }
        j["rows"] = std::move(table);
    } else if (const auto* g = std::get_if<codes::GeneratorMatrix>(&a.storage)) {
        j["generator_rows"] = g->rows;
        j["field"] = json{{"p", g->field->p()}, {"e", g->field->e()}};
        j["strength_target"] = g->strength_target;
    } else {
        j["factorial"] = true;
    }
    write_file(path, j.dump(2) + "\n");
}

oa::OrthogonalArray load_oa(const std::filesystem::path& path) {
    const json j = parse_file(path, "oa/1");
    return read_fields(path, [&] {
        const auto q = j.at("q").get<std::int64_t>();
        const auto k = j.at("k").get<std::size_t>();

        oa::OrthogonalArray a;
        if (j.contains("rows")) {
            std::vector<int> data;
            for (const auto& row : j.at("rows")) {
                if (row.size() != k) throw std::runtime_error("io: ragged array rows");
                for (const auto& v : row) data.push_back(v.get<int>());
            }
            a = oa::from_rows(q, k, std::move(data));
        } else if (j.contains("generator_rows")) {
            const auto& fj = j.at("field");
            auto field = std::make_shared<gf::Field>(
                gf::Field::make(fj.at("p").get<std::int64_t>(), fj.at("e").get<int>()));
            auto g = codes::make_generator_matrix(
                std::move(field), k,
                j.at("generator_rows").get<std::vector<std::vector<std::int64_t>>>(),
                j.value("strength_target", 0));
            if (g.q() != q)
                throw std::runtime_error("io: generator field does not match the declared q");
            a = oa::from_generator(std::move(g));
        } else if (j.value("factorial", false)) {
            a = oa::full_factorial(q, k);
        } else {
            throw std::runtime_error("io: array carries neither rows, generator_rows, nor the "
                                     "factorial marker");
        }
        if (a.runs != j.at("N").get<std::uint64_t>())
            throw std::runtime_error("io: declared run count does not match the storage");
        a.certified_strength = j.at("strength").get<int>();
        a.certification = certification_from_name(j.at("certification").get<std::string>());
        return a;
    });
}

void save_rule(const rules1d::Rule1D& rule, const std::filesystem::path& path) {
    json j = rule_to_json(rule);
    j["schema"] = "rule/1";
    write_file(path, j.dump(2) + "\n");
}

rules1d::Rule1D load_rule(const std::filesystem::path& path) {
    const json j = parse_file(path, "rule/1");
    return read_fields(path, [&] { return rule_from_json(j); });
}

void save_design(const designs::WeightedDesign& d, const std::filesystem::path& path,
                 const std::string& oa_ref) {
    json j{{"schema", "design/1"},
           {"dim", d.dim},
           {"measure", measure_to_json(d.measure)},
           {"claimed_degree", d.claimed_degree}};

    if (const auto* ex = std::get_if<designs::ExplicitStorage>(&d.storage)) {
        j["storage"] = "explicit";
        json points = json::array();
        for (std::size_t i = 0; i < ex->weights.size(); ++i) {
            json row = json::array();
            for (std::size_t c = 0; c < d.dim; ++c) row.push_back(ex->coords[i * d.dim + c]);
            points.push_back(std::move(row));
        }
        j["points"] = std::move(points);
        j["weights"] = ex->weights;
    } else {
        const auto& fs = std::get<designs::FactoredStorage>(d.storage);
        const bool grid = std::holds_alternative<oa::FactorialGrid>(fs.array->storage);
        if (!grid && oa_ref.empty())
            throw std::invalid_argument("io: factored design needs an array reference");
        j["storage"] = "factored";
        j["rule"] = rule_to_json(fs.rule);
        j["oa_ref"] = grid ? "factorial" : oa_ref;
        j["symbol_map"] = fs.symbol_map;
        if (fs.product_weights) j["product_weights"] = true;
    }
    write_file(path, j.dump(2) + "\n");
}

designs::WeightedDesign load_design(const std::filesystem::path& path) {
    const json j = parse_file(path, "design/1");
    return read_fields(path, [&] {
        const auto dim = j.at("dim").get<std::size_t>();
        const std::string storage = j.at("storage").get<std::string>();

        designs::WeightedDesign d;
        d.dim = dim;
        d.measure = measure_from_json(j.at("measure"));
        d.claimed_degree = j.at("claimed_degree").get<int>();

        if (storage == "explicit") {
            std::vector<double> coords;
            for (const auto& row : j.at("points")) {
                if (row.size() != dim) throw std::runtime_error("io: ragged design points");
                for (const auto& v : row) coords.push_back(v.get<double>());
            }
            std::vector<double> weights = j.at("weights").get<std::vector<double>>();
            if (weights.empty() || coords.size() != weights.size() * dim)
                throw std::runtime_error("io: design points and weights do not line up");
            NeumaierSum total;
            for (double w : weights) {
                if (!(w > 0.0)) throw std::runtime_error("io: design weights must be positive");
                total.add(w);
            }
            const double sum = total.value();
            if (std::abs(sum - 1.0) > 1e-12) {
                for (double& w : weights) w /= sum;
                d.weights_rescaled = true;
            }
            d.storage = designs::ExplicitStorage{std::move(coords), std::move(weights)};
        } else if (storage == "factored") {
            designs::FactoredStorage fs;
            fs.rule = rule_from_json(j.at("rule"));
            fs.symbol_map = j.at("symbol_map").get<std::vector<double>>();
            fs.product_weights = j.value("product_weights", false);
            const std::string ref = j.at("oa_ref").get<std::string>();
            if (ref == "factorial") {
                fs.array = std::make_shared<oa::OrthogonalArray>(oa::full_factorial(
                    static_cast<std::int64_t>(fs.symbol_map.size()), dim));
            } else {
                fs.array = std::make_shared<oa::OrthogonalArray>(
                    load_oa(path.parent_path() / ref));
            }
            if (fs.array->q != static_cast<std::int64_t>(fs.symbol_map.size()))
                throw std::runtime_error(
                    "io: symbol map length does not match the array levels");
            if (fs.array->k != dim)
                throw std::runtime_error("io: array width does not match the design dimension");
            d.claimed_degree = std::min(d.claimed_degree, fs.array->certified_strength);
            d.storage = std::move(fs);
        } else {
            throw std::runtime_error("io: unknown design storage \"" + storage + "\"");
        }
        return d;
    });
}

std::string report_to_json(const verify::VerificationReport& rep) {
    json worst = json::array();
    for (const auto& w : rep.worst)
        worst.push_back(json{{"exponents", w.exponents},
                             {"exact", w.exact},
                             {"observed", w.observed},
                             {"abs_error", w.abs_error},
                             {"rel_error", w.rel_error}});
    const json j{{"schema", "report/1"},
                 {"degree", rep.degree_checked},
                 {"monomials_checked", rep.monomials_checked},
                 {"exhaustive", rep.exhaustive},
                 {"weights_rescaled", rep.weights_rescaled},
                 {"max_abs_error", rep.max_abs_error},
                 {"max_rel_error", rep.max_rel_error},
                 {"passed", rep.passed},
                 {"policy", json{{"rel_tol", rep.policy.rel_tol},
                                 {"abs_tol", rep.policy.abs_tol}}},
                 {"worst", worst}};
    return j.dump(2) + "\n";
}

void save_report(const verify::VerificationReport& rep, const std::filesystem::path& path) {
    write_file(path, report_to_json(rep));
}

void save_embedding_csv(const verify::Embedding& e, const std::filesystem::path& path) {
    std::string text;
    char buf[64];
    const std::size_t n = e.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < e.dim; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", e.rows[i * e.dim + j]);
            if (j) text += ',';
            text += buf;
        }
        text += '\n';
    }
    write_file(path, text);
}

}  // namespace tdesign::io
