// fibration: command-line front end for the elliptic fibration toolkit.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ellfib/report_json.hpp"

using namespace ellfib;
using ellfib::json::Json;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitEngine = 2;

struct Options {
    std::string format = "text";
    std::size_t max_depth = default_max_depth;
    std::vector<std::string> presentation_dirs;
    std::vector<std::string> args;
    std::string file;
    std::string presentation;
};

bool as_json(const Options& o) { return o.format == "json"; }

void emit(const Options& o, const Json& j, const std::string& text) {
    if (as_json(o))
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

[[noreturn]] void usage_error(const std::string& message) { throw Error(ErrorKind::ValidationError, message); }

ValuationProfile profile_arg(const std::vector<std::string>& args, std::size_t first) {
    if (args.size() != first + 3) usage_error("expected three valuations: VA VB VDELTA");
    auto va = Valuation::parse(args[first]);
    auto vb = Valuation::parse(args[first + 1]);
    auto vd = Valuation::parse(args[first + 2]);
    if (!va || !vb || !vd || vd->is_infinite())
        usage_error("valuations must be natural numbers (va and vb may be 'inf')");
    return {*va, *vb, vd->value()};
}

KodairaType type_arg(const std::string& text) {
    auto t = KodairaType::parse(text);
    if (!t) usage_error("unknown fibre type '" + text + "' (use I0, I5, I2*, II, III, IV, IV*, III*, II*)");
    return *t;
}

// "va,vb,vdelta" or a fibre type name standing for its canonical profile.
BranchGerm germ_arg(const std::string& text, const std::string& name) {
    if (text.find(',') == std::string::npos) return BranchGerm::make(name, canonical_profile(type_arg(text)));
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
    return BranchGerm::make(name, minimalize(profile_arg(parts, 0)).profile);
}

long long_arg(const std::string& text) {
    try {
        std::size_t used = 0;
        long v = std::stol(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    usage_error("expected an integer, got '" + text + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) usage_error("cannot read " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int run_classify(const Options& o) {
    const auto p = profile_arg(o.args, 0);
    const auto t = classify(p);
    emit(o, Json{{"profile", json::profile(p)}, {"type", t.to_string()}, {"euler_number", t.euler_number()}},
         t.to_string() + "\n");
    return 0;
}

int run_minimalize(const Options& o) {
    const auto r = minimalize(profile_arg(o.args, 0));
    emit(o, Json{{"profile", json::profile(r.profile)}, {"twist_count", r.twist_count}},
         r.profile.to_string() + " twist_count=" + std::to_string(r.twist_count) + "\n");
    return 0;
}

int run_lattice(const Options& o) {
    if (o.args.size() != 1) usage_error("lattice expects one fibre type");
    const auto lat = lattice_data(type_arg(o.args[0]));
    std::ostringstream text;
    text << lat.fibre_type.to_string() << ": " << lat.component_count << " component(s), Euler number "
         << lat.fibre_type.euler_number() << "\n";
    text << "multiplicities:";
    for (long m : lat.multiplicities) text << " " << m;
    text << "\ngram: " << lat.gram.to_string() << "\n";
    text << "discriminant group: " << discriminant_group(lat.fibre_type).to_string() << "\n";
    emit(o, json::lattice(lat), text.str());
    return 0;
}

int run_blowup(const Options& o) {
    if (o.args.size() != 2) usage_error("blowup expects LEFT RIGHT (profiles va,vb,vdelta or fibre types)");
    const CollisionPoint c{germ_arg(o.args[0], "L"), germ_arg(o.args[1], "R")};
    const auto r = blow_up(c, "E");
    auto child = [](const CollisionPoint& p) {
        return Json{{"left", json::branch(p.left)}, {"right", json::branch(p.right)}, {"collision", p.is_collision()},
                    {"miranda_allowed", p.is_collision() && is_miranda_allowed(p.left.fibre_type, p.right.fibre_type)}};
    };
    std::ostringstream text;
    text << "exceptional " << r.exceptional.profile.to_string() << " " << r.exceptional.fibre_type.to_string()
         << " (twists " << r.exceptional_twists << ")\n";
    for (const auto* p : {&r.new_left, &r.new_right})
        text << "child " << p->label() << ": "
             << (!p->is_collision() ? "dissolved"
                                    : is_miranda_allowed(p->left.fibre_type, p->right.fibre_type) ? "allowed"
                                                                                                   : "not allowed")
             << "\n";
    emit(o,
         Json{{"exceptional", json::branch(r.exceptional)},
              {"exceptional_twists", r.exceptional_twists},
              {"children", Json::array({child(r.new_left), child(r.new_right)})}},
         text.str());
    return 0;
}

int run_reduce(const Options& o) {
    if (o.args.size() != 2) usage_error("reduce expects LEFT RIGHT (profiles va,vb,vdelta or fibre types)");
    const CollisionPoint c{germ_arg(o.args[0], "L"), germ_arg(o.args[1], "R")};
    const auto tree = miranda_reduce(c, o.max_depth);
    std::ostringstream text;
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const auto& n = tree.nodes[i];
        text << "[" << i << "] depth " << n.depth << "  " << n.collision.label() << "  " << to_string(n.status);
        if (n.exceptional)
            text << " -> " << n.exceptional->name << " " << n.exceptional->fibre_type.to_string() << ", children "
                 << *n.left_child << ", " << *n.right_child;
        text << "\n";
    }
    emit(o, json::tree(c.label(), tree), text.str());
    return 0;
}

int run_sha_local(const Options& o) {
    if (!o.presentation.empty()) {
        if (!o.args.empty()) usage_error("sha-local takes either --presentation FILE or two fibre types");
        const auto p = o.presentation == builtin_presentation_name ? builtin_i2_i0star_presentation()
                                                                    : parse_presentation(read_file(o.presentation));
        const auto k = local_sha_with_witnesses(p);
        Json witnesses = Json::array();
        std::string text = k.group.to_string() + "\n";
        for (const auto& w : k.generators) {
            witnesses.push_back(to_string(w));
            text += "generator witness " + to_string(w) + "\n";
        }
        emit(o, Json{{"group", k.group.to_string()}, {"generator_witnesses", witnesses}}, text);
        return 0;
    }
    if (o.args.size() != 2) usage_error("sha-local expects two fibre types or --presentation FILE");
    const auto l = type_arg(o.args[0]);
    const auto r = type_arg(o.args[1]);
    const auto g = expected_local_sha(l, r);
    const auto v = multiple_fibre_verdict(l, r);
    emit(o, Json{{"group", g.to_string()}, {"verdict", std::string(to_string(v.kind))}},
         g.to_string() + "\nverdict " + v.to_string() + "\n");
    return 0;
}

int run_sha_punctured(const Options& o) {
    if (o.args.size() != 1) usage_error("sha-punctured expects one fibre type");
    const auto g = sha_punctured_transverse(type_arg(o.args[0]));
    emit(o, Json{{"group", g.to_string()}, {"hypotheses", std::string(punctured_sha_hypotheses)}},
         g.to_string() + "\n(" + std::string(punctured_sha_hypotheses) + ")\n");
    return 0;
}

int run_corank(const Options& o) {
    if (o.args.size() != 4) usage_error("corank expects B2_X RHO_X B2_S RHO_S");
    const long r = corank(long_arg(o.args[0]), long_arg(o.args[1]), long_arg(o.args[2]), long_arg(o.args[3]));
    emit(o, Json{{"corank", r}}, std::to_string(r) + "\n");
    return 0;
}

int run_delta_gcd(const Options& o) {
    std::vector<long> degrees;
    for (const auto& a : o.args) degrees.push_back(long_arg(a));
    const long g = delta_eta_gcd(degrees);
    emit(o, Json{{"delta_eta_gcd", g}}, std::to_string(g) + "\n");
    return 0;
}

int run_report(const Options& o) {
    const auto description = parse(read_file(o.file));
    AnalyzeOptions options;
    options.max_depth = o.max_depth;
    for (const auto& dir : o.presentation_dirs) options.presentation_dirs.emplace_back(dir);
    // Relative presentation names also resolve next to the input file.
    options.presentation_dirs.push_back(std::filesystem::path(o.file).parent_path());
    const auto report = analyze(description, options);
    std::cout << render(report, as_json(o) ? OutputFormat::Json : OutputFormat::Text);
    return report.errors.empty() ? 0 : kExitEngine;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical invariants of elliptic fibrations over surfaces"};
    app.require_subcommand(1);
    Options o;

    auto add = [&](const std::string& name, const std::string& help, bool positional = true) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
        if (positional) sub->add_option("args", o.args, "Arguments")->allow_extra_args();
        return sub;
    };

    auto* classify_cmd = add("classify", "Kodaira type of a minimal profile VA VB VDELTA");
    auto* minimalize_cmd = add("minimalize", "Minimal model of a profile VA VB VDELTA");
    auto* lattice_cmd = add("lattice", "Components, multiplicities and Gram matrix of a fibre type");
    auto* blowup_cmd = add("blowup", "Blow up one collision LEFT RIGHT");
    blowup_cmd->footer("LEFT/RIGHT are va,vb,vdelta triples or fibre type names.");
    auto* reduce_cmd = add("reduce", "Blow up until the collision is Miranda-allowed");
    reduce_cmd->add_option("--max-depth", o.max_depth, "Maximum nesting of blow-ups");
    auto* sha_local_cmd = add("sha-local", "Local Tate-Shafarevich group at a collision");
    sha_local_cmd->add_option("--presentation", o.presentation, "Presentation file (or builtin:I2+I0*)");
    auto* sha_punctured_cmd = add("sha-punctured", "Tate-Shafarevich group with a transverse curve removed");
    auto* report_cmd = add("report", "Analyze a fibration description file", false);
    report_cmd->add_option("file", o.file, "Description file")->required();
    report_cmd->add_option("--max-depth", o.max_depth, "Maximum nesting of blow-ups");
    report_cmd->add_option("--presentations", o.presentation_dirs, "Directory of presentation files");
    auto* corank_cmd = add("corank", "Corank of Sha from B2_X RHO_X B2_S RHO_S");
    auto* delta_cmd = add("delta-gcd", "gcd of fibre degrees of Picard generators");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (*classify_cmd) return run_classify(o);
        if (*minimalize_cmd) return run_minimalize(o);
        if (*lattice_cmd) return run_lattice(o);
        if (*blowup_cmd) return run_blowup(o);
        if (*reduce_cmd) return run_reduce(o);
        if (*sha_local_cmd) return run_sha_local(o);
        if (*sha_punctured_cmd) return run_sha_punctured(o);
        if (*report_cmd) return run_report(o);
        if (*corank_cmd) return run_corank(o);
        if (*delta_cmd) return run_delta_gcd(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        const bool input = e.kind() == ErrorKind::ParseError || e.kind() == ErrorKind::ValidationError;
        return input ? kExitValidation : kExitEngine;
    }
    return kExitValidation;
}
