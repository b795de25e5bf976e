#include "nambu/specfile.hpp"

#include "nambu/gallery.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace nambu {

namespace {

using nlohmann::json;

[[noreturn]] void semantic_error(const std::string& path, const std::string& what) {
    throw ParseError("spec error at " + path + ": " + what, 0);
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> known) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) ok = true;
        if (!ok) semantic_error(path + "/" + it.key(), "unknown key");
    }
}

Rat parse_rat(const json& v, const std::string& path) {
    if (v.is_number_integer()) return Rat(v.get<long>());
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        ExactPoly p = parse_poly(s, 0);
        if (!p.is_constant()) semantic_error(path, "expected a rational constant");
        return p.constant_value();
    }
    semantic_error(path, "expected an integer or a rational string");
}

RatMat parse_matrix(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) semantic_error(path, "expected a nonempty matrix");
    RatMat m;
    std::size_t cols = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const json& row = v[i];
        if (!row.is_array()) semantic_error(path, "matrix rows must be arrays");
        if (i == 0) cols = row.size();
        if (row.size() != cols) semantic_error(path, "ragged matrix");
        std::vector<Rat> r;
        for (std::size_t j = 0; j < row.size(); ++j)
            r.push_back(parse_rat(row[j], path + "[" + std::to_string(i) + "][" +
                                              std::to_string(j) + "]"));
        m.push_back(std::move(r));
    }
    return m;
}

Box parse_box(const json& v, int n, const std::string& path) {
    reject_unknown(v, path, {"lo", "hi"});
    if (!v.contains("lo") || !v.contains("hi")) semantic_error(path, "box needs lo and hi");
    Box b;
    for (const auto& x : v["lo"]) b.lo.push_back(x.get<double>());
    for (const auto& x : v["hi"]) b.hi.push_back(x.get<double>());
    if (b.n() != n || static_cast<int>(b.hi.size()) != n)
        semantic_error(path, "box dimension mismatch");
    for (int i = 0; i < n; ++i)
        if (!(b.lo[static_cast<std::size_t>(i)] < b.hi[static_cast<std::size_t>(i)]))
            semantic_error(path, "box must have positive extent");
    return b;
}

MultiIndex parse_key(const std::string& key, int n, int r, const std::string& path) {
    std::vector<int> idx;
    std::istringstream is(key);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        try {
            idx.push_back(std::stoi(tok));
        } catch (...) {
            semantic_error(path, "bad multi-index '" + key + "'");
        }
    }
    if (static_cast<int>(idx.size()) != r)
        semantic_error(path, "multi-index '" + key + "' must have length r");
    for (std::size_t i = 0; i + 1 < idx.size(); ++i)
        if (idx[i] >= idx[i + 1])
            semantic_error(path, idx[i] == idx[i + 1]
                                     ? "repeated index in '" + key + "'"
                                     : "indices must increase in '" + key + "'");
    if (idx.front() < 1 || idx.back() > n)
        semantic_error(path, "index out of range in '" + key + "'");
    return MultiIndex(std::move(idx));
}

NambuStructure parse_structure(const json& v, const std::string& path) {
    reject_unknown(v, path, {"n", "r", "tensor", "restriction", "box"});
    if (!v.contains("n") || !v.contains("r") || !v.contains("tensor"))
        semantic_error(path, "structure needs n, r and tensor");
    const int n = v["n"].get<int>();
    const int r = v["r"].get<int>();
    if (n < 1 || n > kMaxVars) semantic_error(path + "/n", "dimension out of range");
    if (r < 2 || r > n) semantic_error(path + "/r", "order out of range");
    MultiVectorField lam(n, r, Variance::Vector);
    for (auto it = v["tensor"].begin(); it != v["tensor"].end(); ++it) {
        MultiIndex I = parse_key(it.key(), n, r, path + "/tensor");
        if (!it.value().is_string())
            semantic_error(path + "/tensor", "coefficients are polynomial strings");
        ExactPoly p;
        try {
            p = parse_poly(it.value().get<std::string>(), n);
        } catch (const ParseError& e) {
            semantic_error(path + "/tensor/" + it.key(),
                           std::string(e.what()) + " at offset " + std::to_string(e.position));
        }
        lam.set(I, ScalarField(n, std::move(p)));
    }
    Box box = v.contains("box") ? parse_box(v["box"], n, path + "/box") : Box::cube(n, 2.0);
    if (v.contains("restriction")) {
        RatMat b = parse_matrix(v["restriction"], path + "/restriction");
        if (static_cast<int>(b[0].size()) != n)
            semantic_error(path + "/restriction", "row length must equal n");
        return {n, r, std::move(lam), std::move(b), std::move(box)};
    }
    return {n, r, std::move(lam), std::move(box)};
}

NambuStructure build_gallery(const json& v, const std::string& path, std::string* name_out) {
    reject_unknown(v, path, {"name", "n", "r", "h", "N", "I"});
    if (!v.contains("name")) semantic_error(path, "gallery reference needs a name");
    const std::string name = v["name"].get<std::string>();
    *name_out = name;
    if (name == "canonical") {
        if (!v.contains("n") || !v.contains("r")) semantic_error(path, "canonical needs n and r");
        return canonical_structure(v["n"].get<int>(), v["r"].get<int>());
    }
    if (name == "scaled") {
        if (!v.contains("n") || !v.contains("r") || !v.contains("h"))
            semantic_error(path, "scaled needs n, r and h");
        const int n = v["n"].get<int>();
        return scaled_structure(n, v["r"].get<int>(),
                                ScalarField(n, parse_poly(v["h"].get<std::string>(), n)));
    }
    if (name == "l1") {
        if (!v.contains("N") || !v.contains("I")) semantic_error(path, "l1 needs N and I");
        std::vector<int> I;
        for (const auto& x : v["I"]) I.push_back(x.get<int>());
        return l1_truncated(v["N"].get<int>(), I).structure;
    }
    if (name == "seqpoisson") {
        if (!v.contains("N")) semantic_error(path, "seqpoisson needs N");
        return sequence_poisson(v["N"].get<int>());
    }
    // census names (heisenberg-full etc.)
    try {
        return gallery_item(name).structure;
    } catch (const ConfigError&) {
        semantic_error(path + "/name", "unknown gallery name '" + name + "'");
    }
}

TowerSpec parse_tower(const json& v, const std::string& path) {
    reject_unknown(v, path, {"kind", "levels", "links"});
    if (!v.contains("kind") || !v.contains("levels"))
        semantic_error(path, "tower needs kind and levels");
    const std::string kind_s = v["kind"].get<std::string>();
    TowerKind kind;
    if (kind_s == "projective")
        kind = TowerKind::Projective;
    else if (kind_s == "direct")
        kind = TowerKind::Direct;
    else
        semantic_error(path + "/kind", "kind must be 'projective' or 'direct'");
    std::vector<NambuStructure> levels;
    for (std::size_t i = 0; i < v["levels"].size(); ++i) {
        const json& lv = v["levels"][i];
        const std::string lp = path + "/levels[" + std::to_string(i) + "]";
        if (lv.contains("gallery")) {
            reject_unknown(lv, lp, {"gallery"});
            std::string dummy;
            levels.push_back(build_gallery(lv["gallery"], lp + "/gallery", &dummy));
        } else {
            levels.push_back(parse_structure(lv, lp));
        }
    }
    std::vector<RatMat> links;
    if (v.contains("links"))
        for (std::size_t i = 0; i < v["links"].size(); ++i)
            links.push_back(parse_matrix(v["links"][i], path + "/links[" + std::to_string(i) + "]"));
    try {
        return {kind, std::move(levels), std::move(links)};
    } catch (const StructuralError& e) {
        semantic_error(path, e.what());
    }
}

}  // namespace

SpecFile parse_spec_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("JSON syntax error: ") + e.what(), e.byte);
    }
    if (!root.is_object()) throw ParseError("spec root must be an object", 0);
    reject_unknown(root, "", {"version", "structure", "gallery", "tower", "expect"});
    SpecFile out;
    if (!root.contains("version")) semantic_error("/version", "missing");
    out.version = root["version"].get<int>();
    if (out.version != 1) semantic_error("/version", "unsupported version");
    int sources = 0;
    if (root.contains("structure")) ++sources;
    if (root.contains("gallery")) ++sources;
    if (root.contains("tower")) ++sources;
    if (sources != 1)
        semantic_error("", "exactly one of structure, gallery or tower is required");
    if (root.contains("structure")) out.structure = parse_structure(root["structure"], "/structure");
    if (root.contains("gallery")) {
        std::string name;
        out.structure = build_gallery(root["gallery"], "/gallery", &name);
        out.gallery_name = name;
    }
    if (root.contains("tower")) out.tower = parse_tower(root["tower"], "/tower");
    if (root.contains("expect")) {
        for (auto it = root["expect"].begin(); it != root["expect"].end(); ++it) {
            const std::string v = it.value().get<std::string>();
            if (v != "pass" && v != "fail")
                semantic_error("/expect/" + it.key(), "expected 'pass' or 'fail'");
            out.expectations[it.key()] = v;
        }
    }
    return out;
}

SpecFile parse_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open spec file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_spec_text(buf.str());
}

namespace {

json emit_structure(const NambuStructure& S) {
    json s;
    s["n"] = S.n();
    s["r"] = S.order();
    json tensor = json::object();
    for (const auto& [I, f] : S.tensor().coeffs())
        tensor[I.to_string()] = f.poly().to_string();
    s["tensor"] = tensor;
    if (!S.is_full()) {
        json rows = json::array();
        for (const auto& row : S.restriction()) {
            json r = json::array();
            for (const auto& c : row) r.push_back(rat_to_string(c));
            rows.push_back(r);
        }
        s["restriction"] = rows;
    }
    json box;
    box["lo"] = S.box().lo;
    box["hi"] = S.box().hi;
    s["box"] = box;
    return s;
}

}  // namespace

std::string SpecFile::emit() const {
    json root;
    root["version"] = version;
    if (structure) root["structure"] = emit_structure(*structure);
    if (tower) {
        json t;
        t["kind"] = tower->kind() == TowerKind::Projective ? "projective" : "direct";
        json levels = json::array();
        for (int i = 1; i <= tower->depth(); ++i) levels.push_back(emit_structure(tower->level(i)));
        t["levels"] = levels;
        json links = json::array();
        for (int i = 1; i < tower->depth(); ++i) {
            json m = json::array();
            for (const auto& row : tower->link(i)) {
                json r = json::array();
                for (const auto& c : row) r.push_back(rat_to_string(c));
                m.push_back(r);
            }
            links.push_back(m);
        }
        t["links"] = links;
        root["tower"] = t;
    }
    if (!expectations.empty()) {
        json e = json::object();
        for (const auto& [k, v] : expectations) e[k] = v;
        root["expect"] = e;
    }
    return root.dump(2);
}

}  // namespace nambu
