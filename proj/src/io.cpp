#include "derham/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace derham {

namespace {

Simplex simplex_from_json(const Json& j) {
    if (!j.is_array()) throw std::invalid_argument("simplex must be an array of vertex ids");
    Simplex s;
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw std::invalid_argument("vertex ids must be integers");
        s.push_back(v.get<int>());
    }
    std::sort(s.begin(), s.end());
    return s;
}

Rational rational_from_json(const Json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number()) return from_double(j.get<double>());
    throw std::invalid_argument("rational value must be a string or a number");
}

std::pair<int, int> edge_key(const std::string& key) {
    const auto dash = key.find('-', 1);
    if (dash == std::string::npos) throw std::invalid_argument("edge length key must read \"i-j\": " + key);
    try {
        int a = std::stoi(key.substr(0, dash));
        int b = std::stoi(key.substr(dash + 1));
        if (a > b) std::swap(a, b);
        return {a, b};
    } catch (const std::logic_error&) {
        throw std::invalid_argument("edge length key must read \"i-j\": " + key);
    }
}

}  // namespace

Json complex_to_json(const SimplicialComplex& k) {
    Json j;
    j["vertices"] = k.vertices();
    Json tops = Json::array();
    for (const auto& s : k.maximal_simplices()) tops.push_back(s);
    j["maximal_simplices"] = tops;
    if (!k.edge_lengths().empty()) {
        Json lengths = Json::object();
        for (const auto& [e, len] : k.edge_lengths()) lengths[std::to_string(e.first) + "-" + std::to_string(e.second)] = len;
        j["edge_lengths"] = lengths;
    }
    if (k.declared_L()) j["L"] = *k.declared_L();
    return j;
}

ComplexDescription complex_description_from_json(const Json& j) {
    if (!j.is_object()) throw std::invalid_argument("complex must be a JSON object");
    ComplexDescription d;
    if (j.contains("vertices")) {
        if (!j["vertices"].is_array()) throw std::invalid_argument("\"vertices\" must be an array");
        for (const auto& v : j["vertices"]) {
            if (!v.is_number_integer()) throw std::invalid_argument("vertex ids must be integers");
            d.vertices.push_back(v.get<int>());
        }
    }
    if (!j.contains("maximal_simplices") || !j["maximal_simplices"].is_array())
        throw std::invalid_argument("complex needs a \"maximal_simplices\" array");
    for (const auto& s : j["maximal_simplices"]) d.maximal_simplices.push_back(simplex_from_json(s));
    if (j.contains("edge_lengths")) {
        if (!j["edge_lengths"].is_object()) throw std::invalid_argument("\"edge_lengths\" must be an object");
        for (const auto& [key, value] : j["edge_lengths"].items()) {
            if (!value.is_number()) throw std::invalid_argument("edge lengths must be numbers");
            d.edge_lengths[edge_key(key)] = value.get<double>();
        }
    }
    if (j.contains("L")) {
        if (!j["L"].is_number()) throw std::invalid_argument("\"L\" must be a number");
        d.L = j["L"].get<double>();
    }
    return d;
}

std::shared_ptr<const SimplicialComplex> complex_from_json(const Json& j) {
    return std::make_shared<const SimplicialComplex>(complex_description_from_json(j));
}

Json form_to_json(const PiecewiseForm& w) {
    Json j;
    j["degree"] = w.degree();
    Json pieces = Json::array();
    for (const auto& [s, piece] : w.pieces()) {
        if (piece.is_zero()) continue;
        pieces.push_back(Json{{"simplex", s}, {"form", piece.to_string()}});
    }
    j["pieces"] = pieces;
    return j;
}

PiecewiseForm form_from_json(const Json& j, std::shared_ptr<const SimplicialComplex> k) {
    if (!j.is_object() || !j.contains("degree") || !j["degree"].is_number_integer())
        throw std::invalid_argument("form needs an integer \"degree\"");
    const int degree = j["degree"].get<int>();
    if (degree < 0 || degree > k->dim()) throw std::invalid_argument("form degree outside [0, dim K]");
    PiecewiseForm w(k, degree);
    if (!j.contains("pieces")) return w;
    if (!j["pieces"].is_array()) throw std::invalid_argument("\"pieces\" must be an array");
    for (const auto& entry : j["pieces"]) {
        if (!entry.is_object() || !entry.contains("simplex") || !entry.contains("form") || !entry["form"].is_string())
            throw std::invalid_argument("each piece needs \"simplex\" and a \"form\" string");
        const Simplex s = simplex_from_json(entry["simplex"]);
        const int m = static_cast<int>(s.size()) - 1;
        if (m < degree) throw std::invalid_argument("piece on a simplex below the form degree");
        w.set_piece(s, parse_poly_form(entry["form"].get<std::string>(), m, degree));
    }
    return w;
}

Json cochain_to_json(const Cochain& c) {
    Json j;
    j["degree"] = c.degree;
    Json values = Json::array();
    const auto& sims = c.complex->simplices(c.degree);
    for (std::size_t i = 0; i < sims.size(); ++i) {
        if (c.values[i] == 0) continue;
        values.push_back(Json{{"simplex", sims[i]}, {"value", to_string(c.values[i])}});
    }
    j["values"] = values;
    return j;
}

Cochain cochain_from_json(const Json& j, std::shared_ptr<const SimplicialComplex> k) {
    if (!j.is_object() || !j.contains("degree") || !j["degree"].is_number_integer())
        throw std::invalid_argument("cochain needs an integer \"degree\"");
    const int degree = j["degree"].get<int>();
    if (degree < 0 || degree > k->dim()) throw std::invalid_argument("cochain degree outside [0, dim K]");
    Cochain c(k, degree);
    if (!j.contains("values")) return c;
    if (!j["values"].is_array()) throw std::invalid_argument("\"values\" must be an array");
    for (const auto& entry : j["values"]) {
        if (!entry.is_object() || !entry.contains("simplex") || !entry.contains("value"))
            throw std::invalid_argument("each value needs \"simplex\" and \"value\"");
        const Simplex s = simplex_from_json(entry["simplex"]);
        if (static_cast<int>(s.size()) - 1 != degree) throw std::invalid_argument("cochain value on a simplex of the wrong dimension");
        const int idx = k->index_of(s);
        if (idx < 0) throw std::invalid_argument("cochain simplex is not in the complex");
        c.values[idx] = rational_from_json(entry["value"]);
    }
    return c;
}

Json real_cochain_to_json(const RealCochain& c) {
    Json j;
    j["degree"] = c.degree;
    Json values = Json::array();
    const auto& sims = c.complex->simplices(c.degree);
    for (std::size_t i = 0; i < sims.size(); ++i) values.push_back(Json{{"simplex", sims[i]}, {"value", c.values[i]}});
    j["values"] = values;
    return j;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return Json::parse(buffer.str());
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
    }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace derham
