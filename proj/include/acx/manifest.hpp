#pragma once

#include "acx/metric.hpp"

#include "json.hpp"

namespace acx {

struct ParseError : std::runtime_error {
    ParseError(std::string field, const std::string& what)
        : std::runtime_error(field.empty() ? what : field + ": " + what), field(std::move(field)) {}
    std::string field; // JSON path of the offending value, or "line L column C" for syntax errors
};

struct ValidationError : std::runtime_error {
    ValidationError(std::string invariant, const std::string& what)
        : std::runtime_error(invariant + ": " + what), invariant(std::move(invariant)) {}
    std::string invariant; // type whose invariant failed
};

struct ManifoldSpec {
    std::string name;
    LieAlgebraSpec algebra;
    AlmostComplexStructure J;
    HermitianMetric metric;
    bool metric_given = false;
    CoefficientModel coefficients;
    std::vector<std::string> tasks;

    size_t n() const { return algebra.real_dim / 2; }
};

// Brackets use 1-based frame indices: {"i": 2, "j": 3, "k": 4, "value": "1"} is [V2, V3] = V4.
// Rationals are strings "p/q"; metric entries are Gaussian rationals "p/q+r/s*i".
ManifoldSpec parse_manifest_text(const std::string& text);
ManifoldSpec parse_manifest(const std::string& path);
// Throws ValidationError naming the failing invariant.
void validate_spec(const ManifoldSpec& spec);
nlohmann::json manifest_json(const ManifoldSpec& spec);

// Inverse of form_text: "(1/2)*t1*tb2 + (i)*1*e[1,0]".
Form parse_form(const std::string& text, size_t n);

} // namespace acx
