#include "fracgreen/spec_io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "fracgreen/errors.hpp"

namespace fracgreen {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& pointer, const std::string& what) {
    throw SchemaError(pointer + ": " + what);
}

void reject_unknown(const json& obj, const std::string& pointer,
                    const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) fail(pointer + "/" + it.key(), "unknown key");
}

double need_number(const json& obj, const std::string& pointer, const std::string& key) {
    if (!obj.contains(key)) fail(pointer + "/" + key, "missing");
    if (!obj[key].is_number()) fail(pointer + "/" + key, "expected a number");
    return obj[key].get<double>();
}

int need_int(const json& obj, const std::string& pointer, const std::string& key) {
    if (!obj.contains(key)) fail(pointer + "/" + key, "missing");
    if (!obj[key].is_number_integer()) fail(pointer + "/" + key, "expected an integer");
    return obj[key].get<int>();
}

// "const:<v>" or "file:<path>" into nodal values.
GridField parse_field_ref(const std::string& ref, const std::string& pointer,
                          std::shared_ptr<const Grid> grid) {
    if (ref.rfind("const:", 0) == 0) {
        double v = 0.0;
        const char* b = ref.data() + 6;
        const char* e = ref.data() + ref.size();
        auto [p, ec] = std::from_chars(b, e, v);
        if (ec != std::errc() || p != e) fail(pointer, "bad constant in '" + ref + "'");
        return make_field(grid, v);
    }
    if (ref.rfind("file:", 0) == 0) {
        const std::string path = ref.substr(5);
        std::ifstream in(path);
        if (!in) fail(pointer, "cannot open field file '" + path + "'");
        GridField f = make_field(grid, 0.0);
        for (int i = 0; i < grid->size(); ++i)
            if (!(in >> f[i])) fail(pointer, "field file '" + path + "' too short");
        double extra;
        if (in >> extra) fail(pointer, "field file '" + path + "' has surplus values");
        return f;
    }
    fail(pointer, "expected 'const:<v>' or 'file:<path>', got '" + ref + "'");
}

RadonMeasure parse_measure(const json& node, const std::string& pointer,
                           Support support, std::shared_ptr<const Grid> grid, int dim) {
    if (!node.is_object()) fail(pointer, "expected an object");
    reject_unknown(node, pointer, {"atoms", "density", "separation"});
    RadonMeasure m;
    m.support = support;
    if (node.contains("atoms")) {
        if (!node["atoms"].is_array()) fail(pointer + "/atoms", "expected an array");
        int idx = 0;
        for (const auto& entry : node["atoms"]) {
            const std::string p = pointer + "/atoms/" + std::to_string(idx++);
            if (!entry.is_array() || static_cast<int>(entry.size()) != dim + 1)
                fail(p, "expected [coordinates..., mass] with " + std::to_string(dim) +
                            " coordinate(s)");
            MeasureAtom atom;
            atom.point[0] = entry[0].get<double>();
            if (dim == 2) atom.point[1] = entry[1].get<double>();
            atom.mass = entry[dim].get<double>();
            m.atoms.push_back(atom);
        }
    }
    if (node.contains("density")) {
        if (!node["density"].is_string())
            fail(pointer + "/density", "expected a field reference string");
        m.density = parse_field_ref(node["density"].get<std::string>(),
                                    pointer + "/density", grid);
    }
    if (node.contains("separation")) {
        if (!node["separation"].is_number())
            fail(pointer + "/separation", "expected a number");
        m.separation = node["separation"].get<double>();
    }
    return m;
}

} // namespace

ProblemSpec parse_spec(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("document is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("", "root must be an object");
    reject_unknown(doc, "",
                   {"params", "grid", "g", "sigma", "rho", "nu", "mu", "eta", "solver"});
    for (const char* key : {"params", "grid", "g", "nu", "mu", "solver"})
        if (!doc.contains(key)) fail(std::string("/") + key, "missing");

    const json& jp = doc["params"];
    reject_unknown(jp, "/params", {"N", "alpha"});
    const int dim = need_int(jp, "/params", "N");
    const double alpha = need_number(jp, "/params", "alpha");

    const json& jg = doc["grid"];
    reject_unknown(jg, "/grid", {"n"});
    const int n = need_int(jg, "/grid", "n");

    ProblemSpec spec;
    try {
        spec.params = make_params(dim, alpha);
        spec.grid = make_grid(dim, n);
    } catch (const ParameterError& e) {
        throw ValidationError(e.what());
    }

    const json& jgr = doc["g"];
    reject_unknown(jgr, "/g", {"c", "p", "eps", "f"});
    spec.g.c = need_number(jgr, "/g", "c");
    spec.g.p = need_number(jgr, "/g", "p");
    spec.g.eps = need_number(jgr, "/g", "eps");
    if (!jgr.contains("f")) fail("/g/f", "missing");
    if (!jgr["f"].is_string()) fail("/g/f", "expected a field reference string");
    spec.g.f = parse_field_ref(jgr["f"].get<std::string>(), "/g/f", spec.grid);

    spec.sigma = need_number(doc, "", "sigma");
    spec.rho = need_number(doc, "", "rho");

    spec.nu = parse_measure(doc["nu"], "/nu", Support::Interior, spec.grid, dim);
    spec.mu = parse_measure(doc["mu"], "/mu", Support::Exterior, spec.grid, dim);
    if (doc.contains("eta"))
        spec.eta = parse_measure(doc["eta"], "/eta", Support::Boundary, spec.grid, dim);

    const json& js = doc["solver"];
    reject_unknown(js, "/solver", {"tol", "max_iter", "theta"});
    spec.solver.tol = need_number(js, "/solver", "tol");
    spec.solver.max_iter = need_int(js, "/solver", "max_iter");
    spec.solver.theta = need_number(js, "/solver", "theta");

    return validate_problem(std::move(spec));
}

std::string format_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

} // namespace fracgreen
