#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "ellfib/fibration.hpp"

namespace ellfib {

namespace {

const char* const kIrreducibleNote =
    "every fibre is irreducible: removing a transverse curve C leaves the local group unchanged, so no torsor has "
    "multiple fibres over the generic point of C together with isolated multiple fibres elsewhere";

CollisionPresentation load_presentation(const std::string& name, const AnalyzeOptions& options) {
    if (name == builtin_presentation_name) return builtin_i2_i0star_presentation();
    std::filesystem::path path(name);
    std::vector<std::filesystem::path> candidates;
    if (path.is_absolute()) {
        candidates.push_back(path);
    } else {
        for (const auto& dir : options.presentation_dirs) candidates.push_back(dir / path);
        candidates.push_back(path);
    }
    for (const auto& candidate : candidates) {
        std::ifstream in(candidate);
        if (!in) continue;
        std::stringstream buffer;
        buffer << in.rdbuf();
        return parse_presentation(buffer.str());
    }
    throw Error(ErrorKind::ValidationError, "presentation file '" + name + "' not found");
}

bool same_types(const CollisionPresentation& p, const CollisionPoint& c) {
    if (p.branches.size() != 2 || !p.branches[0].fibre_type || !p.branches[1].fibre_type) return true;
    const KodairaType& a = *p.branches[0].fibre_type;
    const KodairaType& b = *p.branches[1].fibre_type;
    const KodairaType& l = c.left.fibre_type;
    const KodairaType& r = c.right.fibre_type;
    return (a == l && b == r) || (a == r && b == l);
}

}  // namespace

AnalysisReport analyze(const FibrationDescription& d, const AnalyzeOptions& options) {
    AnalysisReport report;
    report.polynomial_mode = d.polynomial_mode();
    report.weierstrass = d.weierstrass;
    auto record = [&](const std::string& source, const Error& e) {
        report.errors.push_back({source, e.kind(), e.what()});
    };

    if (d.weierstrass) {
        try {
            report.discriminant = discriminant(*d.weierstrass);
        } catch (const Error& e) {
            record("weierstrass", e);
        }
    }

    std::map<std::string, BranchGerm> germs;
    for (const auto& decl : d.branches) {
        try {
            BranchReport b;
            b.name = decl.name;
            b.declared = decl.profile;
            const auto minimal = minimalize(decl.profile);
            b.twist_count = minimal.twist_count;
            b.profile = minimal.profile;
            b.fibre_type = classify(b.profile);
            b.j_valuation = j_valuation(b.profile);
            b.discriminant_group = discriminant_group(b.fibre_type);
            b.sha_punctured = sha_punctured_transverse(b.fibre_type);
            germs.emplace(b.name, BranchGerm{b.name, b.profile, b.fibre_type});
            report.branches.push_back(std::move(b));
        } catch (const Error& e) {
            record("branch " + decl.name, e);
        }
    }

    for (const auto& decl : d.collisions) {
        const std::string source = "collision " + decl.name();
        auto l = germs.find(decl.left);
        auto r = germs.find(decl.right);
        if (l == germs.end() || r == germs.end()) {
            record(source, Error(ErrorKind::ValidationError, "a branch of this collision could not be analyzed"));
            continue;
        }
        CollisionReport c;
        c.name = decl.name();
        c.root = {l->second, r->second};
        c.allowed = is_miranda_allowed(c.root.left.fibre_type, c.root.right.fibre_type);
        try {
            c.tree = miranda_reduce(c.root, options.max_depth);
            for (const BlowupNode* leaf : c.tree->leaves()) {
                LeafReport lr{leaf->collision, leaf->status, std::nullopt, std::nullopt};
                if (leaf->status == NodeStatus::Allowed) {
                    lr.verdict = multiple_fibre_verdict(leaf->collision.left.fibre_type, leaf->collision.right.fibre_type);
                    lr.registry_sha = expected_local_sha(leaf->collision.left.fibre_type, leaf->collision.right.fibre_type);
                }
                c.leaves.push_back(std::move(lr));
            }
        } catch (const Error& e) {
            record(source, e);
        }

        if (decl.presentation) {
            try {
                const auto presentation = load_presentation(*decl.presentation, options);
                if (!c.allowed)
                    throw Error(ErrorKind::ValidationError,
                                "presentation attached to " + c.root.label() + ", which is not Miranda-allowed");
                if (!same_types(presentation, c.root))
                    throw Error(ErrorKind::PresentationInconsistent,
                                "presentation branch types do not match " + c.root.label());
                const auto kernel = local_sha_with_witnesses(presentation);
                PresentationReport pr;
                pr.source = *decl.presentation;
                pr.computed = kernel.group;
                pr.registry = expected_local_sha(c.root.left.fibre_type, c.root.right.fibre_type);
                pr.agrees = pr.computed == *pr.registry;
                pr.witnesses = kernel.generators;
                if (pr.computed.divisible_rank() > 0)
                    report.notes.push_back(c.name + ": the computed local group has positive divisible rank, which is "
                                                    "unusual for a Miranda collision; check the presentation");
                c.presentation = std::move(pr);
            } catch (const Error& e) {
                record(source + " presentation", e);
            }
        }
        report.collisions.push_back(std::move(c));
    }

    if (d.weierstrass && !d.collisions.empty()) {
        try {
            OriginReport o;
            o.exceptional = origin_profile(*d.weierstrass);
            const auto s = axis_profile(*d.weierstrass, Axis::S);
            const auto t = axis_profile(*d.weierstrass, Axis::T);
            o.monomial_prediction = ValuationProfile{s.va + t.va, s.vb + t.vb, s.vdelta + t.vdelta};
            o.agrees = *o.monomial_prediction == o.exceptional;
            if (!o.agrees)
                report.notes.push_back("the model is not monomial at the origin: the exceptional profile " +
                                       o.exceptional.to_string() + " differs from the summed branch profiles " +
                                       o.monomial_prediction->to_string());
            report.origin = o;
        } catch (const Error& e) {
            record("origin", e);
        }
    }

    if (d.topology) {
        try {
            report.corank = corank(d.topology->b2_X, d.topology->rho_X, d.topology->b2_S, d.topology->rho_S);
        } catch (const Error& e) {
            record("topology", e);
        }
    }
    if (d.picard_degrees) {
        try {
            report.delta_eta_gcd = delta_eta_gcd(*d.picard_degrees);
        } catch (const Error& e) {
            record("picard-degrees", e);
        }
    }

    const bool all_irreducible =
        !report.branches.empty() && report.branches.size() == d.branches.size() &&
        std::all_of(report.branches.begin(), report.branches.end(),
                    [](const BranchReport& b) { return lattice_data(b.fibre_type).component_count == 1; });
    if (all_irreducible) report.notes.push_back(kIrreducibleNote);
    return report;
}

}  // namespace ellfib
