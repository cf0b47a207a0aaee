#include "acx/manifest.hpp"

#include <fstream>
#include <sstream>

namespace acx {

using nlohmann::json;

namespace {

const json& member(const json& obj, const std::string& key, const std::string& path)
{
    if (!obj.is_object())
        throw ParseError(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end())
        throw ParseError(path.empty() ? key : path + "." + key, "missing field");
    return *it;
}

std::string join(const std::string& path, const std::string& key)
{
    return path.empty() ? key : path + "." + key;
}

std::string index_path(const std::string& path, size_t k)
{
    return path + "[" + std::to_string(k) + "]";
}

const json& array_of(const json& v, const std::string& path)
{
    if (!v.is_array())
        throw ParseError(path, "expected an array");
    return v;
}

Rational rational_of(const json& v, const std::string& path)
{
    if (!v.is_string())
        throw ParseError(path, "expected a rational string such as \"-1/4\"");
    try {
        return parse_rational(v.get<std::string>());
    } catch (const std::exception& e) {
        throw ParseError(path, e.what());
    }
}

Scalar scalar_of(const json& v, const std::string& path)
{
    if (!v.is_string())
        throw ParseError(path, "expected a Gaussian rational string such as \"1/2+3/4*i\"");
    try {
        return Scalar::parse(v.get<std::string>());
    } catch (const std::exception& e) {
        throw ParseError(path, e.what());
    }
}

long integer_of(const json& v, const std::string& path)
{
    if (!v.is_number_integer())
        throw ParseError(path, "expected an integer");
    return v.get<long>();
}

std::vector<std::vector<Rational>> rational_matrix(const json& v, const std::string& path)
{
    std::vector<std::vector<Rational>> out;
    const json& rows = array_of(v, path);
    for (size_t r = 0; r < rows.size(); ++r) {
        std::string rp = index_path(path, r);
        const json& row = array_of(rows[r], rp);
        std::vector<Rational> vals;
        for (size_t c = 0; c < row.size(); ++c)
            vals.push_back(rational_of(row[c], index_path(rp, c)));
        out.push_back(vals);
    }
    return out;
}

std::string line_column(const std::string& text, size_t byte)
{
    size_t line = 1, col = 1;
    for (size_t k = 0; k + 1 < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + " column " + std::to_string(col);
}

json rational_rows(const std::vector<std::vector<Rational>>& m)
{
    json out = json::array();
    for (const auto& row : m) {
        json r = json::array();
        for (const auto& v : row)
            r.push_back(v.get_str());
        out.push_back(r);
    }
    return out;
}

} // namespace

ManifoldSpec parse_manifest_text(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(line_column(text, e.byte), "malformed JSON");
    }

    ManifoldSpec spec;
    spec.name = doc.contains("name") && doc["name"].is_string() ? doc["name"].get<std::string>() : "";
    long dim = integer_of(member(doc, "real_dim", ""), "real_dim");
    if (dim <= 0)
        throw ParseError("real_dim", "must be positive");
    spec.algebra.real_dim = size_t(dim);

    const json& brackets = array_of(member(doc, "brackets", ""), "brackets");
    for (size_t b = 0; b < brackets.size(); ++b) {
        std::string bp = index_path("brackets", b);
        long idx[3];
        const char* keys[] = {"i", "j", "k"};
        for (int t = 0; t < 3; ++t) {
            idx[t] = integer_of(member(brackets[b], keys[t], bp), join(bp, keys[t]));
            if (idx[t] < 1 || idx[t] > dim)
                throw ParseError(join(bp, keys[t]), "frame index out of range 1.." + std::to_string(dim));
        }
        Rational value = rational_of(member(brackets[b], "value", bp), join(bp, "value"));
        spec.algebra.brackets.push_back({size_t(idx[0] - 1), size_t(idx[1] - 1), size_t(idx[2] - 1), value});
    }

    spec.J.matrix = rational_matrix(member(doc, "J", ""), "J");
    if (spec.J.matrix.size() != size_t(dim))
        throw ParseError("J", "expected " + std::to_string(dim) + " rows");
    for (size_t r = 0; r < spec.J.matrix.size(); ++r)
        if (spec.J.matrix[r].size() != size_t(dim))
            throw ParseError(index_path("J", r), "expected " + std::to_string(dim) + " entries");

    size_t n = spec.n();
    if (doc.contains("metric")) {
        spec.metric_given = true;
        const json& rows = array_of(doc["metric"], "metric");
        if (rows.size() != n)
            throw ParseError("metric", "expected " + std::to_string(n) + " rows");
        for (size_t r = 0; r < n; ++r) {
            std::string rp = index_path("metric", r);
            const json& row = array_of(rows[r], rp);
            if (row.size() != n)
                throw ParseError(rp, "expected " + std::to_string(n) + " entries");
            std::vector<Scalar> vals;
            for (size_t c = 0; c < n; ++c)
                vals.push_back(scalar_of(row[c], index_path(rp, c)));
            spec.metric.g.push_back(vals);
        }
    } else {
        spec.metric = HermitianMetric::identity(n);
    }

    if (doc.contains("coefficients")) {
        const json& co = doc["coefficients"];
        std::string kind = member(co, "type", "coefficients").is_string() ? co["type"].get<std::string>() : "";
        if (kind == "torus_fourier") {
            spec.coefficients.actions = rational_matrix(member(co, "actions", "coefficients"), "coefficients.actions");
            spec.coefficients.rank = spec.coefficients.actions.empty() ? 0 : spec.coefficients.actions[0].size();
            spec.coefficients.truncation =
                int(integer_of(member(co, "truncation", "coefficients"), "coefficients.truncation"));
            if (spec.coefficients.rank == 0)
                throw ParseError("coefficients.actions", "a Fourier model needs at least one torus coordinate");
        } else if (kind != "invariant") {
            throw ParseError("coefficients.type", "expected \"invariant\" or \"torus_fourier\"");
        }
    }

    if (doc.contains("tasks")) {
        const json& tasks = array_of(doc["tasks"], "tasks");
        for (size_t t = 0; t < tasks.size(); ++t) {
            if (!tasks[t].is_string())
                throw ParseError(index_path("tasks", t), "expected a string");
            spec.tasks.push_back(tasks[t].get<std::string>());
        }
    }

    validate_spec(spec);
    return spec;
}

ManifoldSpec parse_manifest(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("", "cannot read manifest " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_manifest_text(buf.str());
}

void validate_spec(const ManifoldSpec& spec)
{
    ValidationReport rep = validate(spec.algebra, spec.J);
    for (const auto& item : rep.items) {
        if (item.pass)
            continue;
        std::string owner = item.check == "j_squared" ? "AlmostComplexStructure" : "LieAlgebraSpec";
        throw ValidationError(owner, item.check + (item.detail.empty() ? "" : " (" + item.detail + ")"));
    }
    try {
        spec.metric.check();
    } catch (const std::exception& e) {
        throw ValidationError("HermitianMetric", e.what());
    }
    const CoefficientModel& co = spec.coefficients;
    if (!co.invariant()) {
        if (co.truncation < 0)
            throw ValidationError("CoefficientModel", "negative truncation");
        if (co.actions.size() != spec.algebra.real_dim)
            throw ValidationError("CoefficientModel", "need one action row per real frame vector");
        for (const auto& row : co.actions)
            if (row.size() != co.rank)
                throw ValidationError("CoefficientModel", "action rows of different length");
        try {
            GradedComplex(build_frame(spec.algebra, spec.J), CoefficientModel{co.rank, co.actions, 0});
        } catch (const InconsistentModel& e) {
            throw ValidationError("CoefficientModel", e.what());
        }
    }
}

json manifest_json(const ManifoldSpec& spec)
{
    json out;
    out["name"] = spec.name;
    out["real_dim"] = spec.algebra.real_dim;
    json br = json::array();
    for (const auto& b : spec.algebra.brackets)
        br.push_back({{"i", b.i + 1}, {"j", b.j + 1}, {"k", b.k + 1}, {"value", b.value.get_str()}});
    out["brackets"] = br;
    out["J"] = rational_rows(spec.J.matrix);
    json metric = json::array();
    for (const auto& row : spec.metric.g) {
        json r = json::array();
        for (const auto& v : row)
            r.push_back(v.str());
        metric.push_back(r);
    }
    out["metric"] = metric;
    if (spec.coefficients.invariant())
        out["coefficients"] = {{"type", "invariant"}};
    else
        out["coefficients"] = {{"type", "torus_fourier"},
                               {"actions", rational_rows(spec.coefficients.actions)},
                               {"truncation", spec.coefficients.truncation}};
    out["tasks"] = spec.tasks;
    return out;
}

Form parse_form(const std::string& text, size_t n)
{
    Form f;
    f.n = n;
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            t += c;
    if (t == "0")
        return f;

    // split at depth-zero '+' and '*'
    auto split = [](const std::string& s, char sep) {
        std::vector<std::string> parts;
        int depth = 0;
        std::string cur;
        for (char c : s) {
            if (c == '(' || c == '[')
                ++depth;
            if (c == ')' || c == ']')
                --depth;
            if (c == sep && depth == 0) {
                parts.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        parts.push_back(cur);
        return parts;
    };

    for (const std::string& term : split(t, '+')) {
        if (term.empty())
            throw ParseError("psi", "empty term in \"" + text + "\"");
        Scalar coef(1);
        Mask mask = 0;
        int sign = 1;
        Weight weight;
        for (const std::string& tok : split(term, '*')) {
            try {
                if (tok.size() >= 2 && tok.front() == '(' && tok.back() == ')') {
                    coef *= Scalar::parse(tok.substr(1, tok.size() - 2));
                } else if (tok.rfind("e[", 0) == 0 && tok.back() == ']') {
                    std::stringstream ss(tok.substr(2, tok.size() - 3));
                    std::string part;
                    while (std::getline(ss, part, ','))
                        weight.push_back(std::stoi(part));
                } else if (tok.size() >= 2 && tok[0] == 't' && std::isdigit(static_cast<unsigned char>(tok.back()))) {
                    bool bar = tok.rfind("tb", 0) == 0;
                    size_t k = std::stoul(tok.substr(bar ? 2 : 1));
                    if (k < 1 || k > n)
                        throw ParseError("psi", "coframe index out of range in \"" + tok + "\"");
                    Mask slot = 1u << ((bar ? n : 0) + k - 1);
                    sign *= wedge_sign(mask, slot);
                    mask |= slot;
                } else {
                    coef *= Scalar::parse(tok);
                }
            } catch (const ParseError&) {
                throw;
            } catch (const std::exception& e) {
                throw ParseError("psi", "cannot read \"" + tok + "\": " + e.what());
            }
        }
        if (sign != 0)
            f.add({weight, mask}, coef * Scalar(sign));
    }
    return f;
}

} // namespace acx
