#include <algorithm>
#include <sstream>

#include "ellfib/report_json.hpp"

namespace ellfib {

namespace json {

Json valuation(const Valuation& v) {
    if (v.is_infinite()) return "inf";
    return v.value();
}

Json profile(const ValuationProfile& p) {
    return Json{{"va", valuation(p.va)}, {"vb", valuation(p.vb)}, {"vdelta", p.vdelta}};
}

Json branch(const BranchGerm& g) {
    return Json{{"name", g.name}, {"type", g.fibre_type.to_string()}, {"profile", profile(g.profile)}};
}

Json matrix(const IntMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const Integer& v = m(i, j);
            if (v.fits_slong_p())
                row.push_back(v.get_si());
            else
                row.push_back(v.get_str());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Json lattice(const FibreLattice& lat) {
    return Json{{"type", lat.fibre_type.to_string()},
                {"components", lat.component_count},
                {"multiplicities", lat.multiplicities},
                {"gram", matrix(lat.gram)},
                {"euler_number", lat.fibre_type.euler_number()},
                {"discriminant_group", discriminant_group(lat.fibre_type).to_string()}};
}

Json tree(const std::string& collision, const BlowupTree& t) {
    Json nodes = Json::array();
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        const auto& n = t.nodes[i];
        Json node{{"id", i},
                  {"depth", n.depth},
                  {"left", branch(n.collision.left)},
                  {"right", branch(n.collision.right)},
                  {"status", std::string(to_string(n.status))}};
        if (n.exceptional) {
            node["exceptional"] = branch(*n.exceptional);
            node["exceptional_twists"] = n.exceptional_twists;
            node["children"] = Json::array({*n.left_child, *n.right_child});
        } else {
            node["exceptional"] = nullptr;
            node["children"] = Json::array();
        }
        nodes.push_back(std::move(node));
    }
    return Json{{"collision", collision}, {"blowups", t.blowup_count()}, {"nodes", std::move(nodes)}};
}

Json report(const AnalysisReport& r) {
    Json out;
    out["format_version"] = 1;
    out["mode"] = r.polynomial_mode ? "weierstrass" : "branches";
    if (r.weierstrass) {
        out["weierstrass"] = Json{{"a", r.weierstrass->a.to_string()},
                                  {"b", r.weierstrass->b.to_string()},
                                  {"discriminant", r.discriminant ? Json(r.discriminant->to_string()) : Json(nullptr)}};
    }

    Json groups = Json::array();
    auto group = [&](const std::string& source, const std::string& quantity, const DivisibleGroup& g) {
        groups.push_back(Json{{"source", source}, {"quantity", quantity}, {"value", g.to_string()}});
        return g.to_string();
    };

    Json branches = Json::array();
    for (const auto& b : r.branches) {
        branches.push_back(Json{
            {"name", b.name},
            {"declared_profile", profile(b.declared)},
            {"twist_count", b.twist_count},
            {"profile", profile(b.profile)},
            {"type", b.fibre_type.to_string()},
            {"euler_number", b.fibre_type.euler_number()},
            {"j_valuation", b.j_valuation ? Json(*b.j_valuation) : Json("inf")},
            {"discriminant_group", group(b.name, "discriminant_group", b.discriminant_group)},
            {"sha_punctured", Json{{"group", group(b.name, "sha_punctured", b.sha_punctured)},
                                   {"hypotheses", std::string(punctured_sha_hypotheses)}}},
        });
    }
    out["branches"] = std::move(branches);

    Json collisions = Json::array();
    Json trees = Json::array();
    Json verdicts = Json::array();
    for (const auto& c : r.collisions) {
        Json entry{{"name", c.name},
                   {"left", branch(c.root.left)},
                   {"right", branch(c.root.right)},
                   {"miranda_allowed", c.allowed}};
        if (c.tree) {
            entry["blowups"] = c.tree->blowup_count();
            Json finals = Json::array();
            for (const auto& leaf : c.leaves) {
                const std::string at = leaf.collision.left.name + "+" + leaf.collision.right.name;
                Json f{{"left", branch(leaf.collision.left)},
                       {"right", branch(leaf.collision.right)},
                       {"status", std::string(to_string(leaf.status))}};
                if (leaf.registry_sha) f["local_sha"] = group(c.name + " @ " + at, "local_sha_registry", *leaf.registry_sha);
                finals.push_back(std::move(f));
                if (leaf.verdict)
                    verdicts.push_back(Json{{"collision", c.name},
                                            {"at", at},
                                            {"types", leaf.collision.left.fibre_type.to_string() + "+" +
                                                          leaf.collision.right.fibre_type.to_string()},
                                            {"verdict", std::string(to_string(leaf.verdict->kind))},
                                            {"group", leaf.verdict->group.to_string()}});
            }
            entry["final_collisions"] = std::move(finals);
            trees.push_back(tree(c.name, *c.tree));
        } else {
            entry["blowups"] = nullptr;
            entry["final_collisions"] = Json::array();
        }
        if (c.presentation) {
            const auto& p = *c.presentation;
            Json witnesses = Json::array();
            for (const auto& w : p.witnesses) witnesses.push_back(to_string(w));
            entry["presentation"] = Json{
                {"source", p.source},
                {"computed", group(c.name, "local_sha_computed", p.computed)},
                {"registry", p.registry ? Json(p.registry->to_string()) : Json(nullptr)},
                {"agreement", p.agrees ? "registry and computation agree" : "registry and computation DISAGREE"},
                {"generator_witnesses", std::move(witnesses)}};
        } else {
            entry["presentation"] = nullptr;
        }
        collisions.push_back(std::move(entry));
    }
    out["collisions"] = std::move(collisions);
    out["blowup_trees"] = std::move(trees);
    out["verdicts"] = std::move(verdicts);
    out["groups"] = std::move(groups);

    Json global;
    if (r.origin) {
        global["origin"] = Json{{"exceptional_profile", profile(r.origin->exceptional)},
                                {"monomial_prediction", r.origin->monomial_prediction
                                                            ? profile(*r.origin->monomial_prediction)
                                                            : Json(nullptr)},
                                {"monomial", r.origin->agrees}};
    }
    global["corank"] = r.corank ? Json(*r.corank) : Json(nullptr);
    global["delta_eta_gcd"] = r.delta_eta_gcd ? Json(*r.delta_eta_gcd) : Json(nullptr);
    out["global"] = std::move(global);
    out["notes"] = r.notes;

    Json errors = Json::array();
    for (const auto& e : r.errors)
        errors.push_back(Json{{"source", e.source}, {"kind", std::string(to_string(e.kind))}, {"message", e.message}});
    out["errors"] = std::move(errors);
    return out;
}

}  // namespace json

namespace {

// Left-aligned columns, two spaces apart.
std::string table(const std::vector<std::vector<std::string>>& rows, const std::string& indent) {
    std::vector<std::size_t> width;
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (width.size() <= i) width.push_back(0);
            width[i] = std::max(width[i], row[i].size());
        }
    std::ostringstream os;
    for (const auto& row : rows) {
        std::string line = indent;
        for (std::size_t i = 0; i < row.size(); ++i) {
            line += row[i];
            if (i + 1 < row.size()) line += std::string(width[i] - row[i].size() + 2, ' ');
        }
        os << line << "\n";
    }
    return os.str();
}

std::string render_text(const AnalysisReport& r) {
    std::ostringstream os;
    if (r.weierstrass) {
        os << "Weierstrass model\n";
        os << "  a = " << r.weierstrass->a.to_string() << "\n";
        os << "  b = " << r.weierstrass->b.to_string() << "\n";
        if (r.discriminant) os << "  discriminant = " << r.discriminant->to_string() << "\n";
        os << "\n";
    }

    os << "Branches\n";
    std::vector<std::vector<std::string>> rows{
        {"name", "declared", "twists", "minimal", "type", "v(j)", "discriminant group", "punctured Sha"}};
    for (const auto& b : r.branches)
        rows.push_back({b.name, b.declared.to_string(), std::to_string(b.twist_count), b.profile.to_string(),
                        b.fibre_type.to_string(), b.j_valuation ? std::to_string(*b.j_valuation) : "inf",
                        b.discriminant_group.to_string(), b.sha_punctured.to_string()});
    os << table(rows, "  ");
    os << "  (punctured Sha " << punctured_sha_hypotheses << ")\n";

    if (!r.collisions.empty()) os << "\nCollisions\n";
    for (const auto& c : r.collisions) {
        os << "  " << c.root.label() << ": " << (c.allowed ? "Miranda-allowed" : "not Miranda-allowed");
        if (c.tree) os << ", " << c.tree->blowup_count() << " blow-up(s)";
        os << "\n";
        std::vector<std::vector<std::string>> leaf_rows;
        for (const auto& leaf : c.leaves)
            leaf_rows.push_back({"final", leaf.collision.label(), std::string(to_string(leaf.status)),
                                 leaf.verdict ? leaf.verdict->to_string() : "-",
                                 leaf.registry_sha ? "local Sha " + leaf.registry_sha->to_string() : ""});
        os << table(leaf_rows, "    ");
        if (c.presentation) {
            const auto& p = *c.presentation;
            os << "    presentation " << p.source << ": computed " << p.computed.to_string() << ", registry "
               << (p.registry ? p.registry->to_string() : "-") << " ("
               << (p.agrees ? "registry and computation agree" : "registry and computation DISAGREE") << ")\n";
            for (const auto& w : p.witnesses) os << "    generator witness " << to_string(w) << "\n";
        }
        if (c.tree && c.tree->blowup_count() > 0) {
            os << "    blow-up tree:\n";
            for (std::size_t i = 0; i < c.tree->nodes.size(); ++i) {
                const auto& n = c.tree->nodes[i];
                os << "      [" << i << "] depth " << n.depth << "  " << n.collision.label() << "  "
                   << to_string(n.status);
                if (n.exceptional)
                    os << " -> " << n.exceptional->name << " " << n.exceptional->profile.to_string() << " "
                       << n.exceptional->fibre_type.to_string() << ", children " << *n.left_child << ", "
                       << *n.right_child;
                os << "\n";
            }
        }
    }

    if (r.origin || r.corank || r.delta_eta_gcd) {
        os << "\nGlobal\n";
        if (r.origin)
            os << "  origin blow-up profile " << r.origin->exceptional.to_string()
               << (r.origin->agrees ? " (monomial model)" : " (not monomial)") << "\n";
        if (r.corank) os << "  corank of Sha " << *r.corank << "\n";
        if (r.delta_eta_gcd) os << "  fibre-degree gcd witness " << *r.delta_eta_gcd << "\n";
    }
    if (!r.notes.empty()) {
        os << "\nNotes\n";
        for (const auto& n : r.notes) os << "  - " << n << "\n";
    }
    if (!r.errors.empty()) {
        os << "\nErrors\n";
        for (const auto& e : r.errors) os << "  " << e.source << ": " << to_string(e.kind) << ": " << e.message << "\n";
    }
    return os.str();
}

}  // namespace

std::string render(const AnalysisReport& report, OutputFormat format) {
    if (format == OutputFormat::Json) return json::report(report).dump(2) + "\n";
    return render_text(report);
}

}  // namespace ellfib
