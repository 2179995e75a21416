#pragma once

#include "derham/whitney.hpp"

#include "json.hpp"

#include <memory>
#include <string>

namespace derham {

using Json = nlohmann::ordered_json;

/// {"vertices": [ids], "maximal_simplices": [[ids]], "edge_lengths": {"i-j": x}, "L": x};
/// the last two are optional.
Json complex_to_json(const SimplicialComplex& k);
ComplexDescription complex_description_from_json(const Json& j);
std::shared_ptr<const SimplicialComplex> complex_from_json(const Json& j);

/// {"degree": k, "pieces": [{"simplex": [ids], "form": "text"}]}, one entry
/// per maximal simplex with a nonzero piece, in simplex order.
Json form_to_json(const PiecewiseForm& w);
PiecewiseForm form_from_json(const Json& j, std::shared_ptr<const SimplicialComplex> k);

/// {"degree": k, "values": [{"simplex": [ids], "value": "p/q"}]}; simplices
/// that are missing from the list carry 0.
Json cochain_to_json(const Cochain& c);
Cochain cochain_from_json(const Json& j, std::shared_ptr<const SimplicialComplex> k);
/// Same layout with floating values.
Json real_cochain_to_json(const RealCochain& c);

/// Parse a file; std::invalid_argument on I/O or syntax errors.
Json read_json_file(const std::string& path);
/// Two-space indented text with a trailing newline.
std::string dump_json(const Json& j);

}  // namespace derham
