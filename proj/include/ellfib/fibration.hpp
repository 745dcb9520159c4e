#pragma once

// Fibration descriptions: the text input format, the analysis pipeline and
// report rendering used by the command-line tool.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ellfib/collision.hpp"
#include "ellfib/kodaira_lattice.hpp"
#include "ellfib/weierstrass.hpp"

namespace ellfib {

struct Diagnostic {
    std::size_t line = 0;    // 1-based; 0 when not tied to a line
    std::size_t column = 0;  // 1-based
    std::string message;

    std::string to_string() const;
};

/// ParseError or ValidationError with every problem found in the input.
class InputError : public Error {
public:
    InputError(ErrorKind kind, std::vector<Diagnostic> diagnostics);
    const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

/// Parses a polynomial literal in s and t, e.g. "4*s^3 + 27*s^2" or
/// "-1/2*s*t". Throws InputError(ParseError); columns are offset by
/// `column_offset` and reported on `line`.
BivariatePoly parse_polynomial(std::string_view text, std::size_t line = 1, std::size_t column_offset = 0);

struct BranchDecl {
    std::string name;
    ValuationProfile profile;  // as declared, possibly not minimal

    friend bool operator==(const BranchDecl&, const BranchDecl&) = default;
};

struct CollisionDecl {
    std::string left;
    std::string right;
    std::optional<std::string> presentation;

    std::string name() const { return left + "+" + right; }
    friend bool operator==(const CollisionDecl&, const CollisionDecl&) = default;
};

struct Topology {
    long b2_X = 0;
    long rho_X = 0;
    long b2_S = 0;
    long rho_S = 0;

    friend bool operator==(const Topology&, const Topology&) = default;
};

/// Either explicit branches, or a Weierstrass model whose s- and t-axis
/// branches are derived (named "s" and "t").
struct FibrationDescription {
    std::optional<WeierstrassPolyModel> weierstrass;
    std::vector<BranchDecl> branches;
    std::vector<CollisionDecl> collisions;
    std::optional<Topology> topology;
    std::optional<std::vector<long>> picard_degrees;

    bool polynomial_mode() const { return weierstrass.has_value(); }
    friend bool operator==(const FibrationDescription&, const FibrationDescription&) = default;
};

/// Throws InputError (ParseError for syntax, ValidationError for semantic
/// problems) listing every positioned diagnostic.
FibrationDescription parse(std::string_view input);

/// Re-emits a description in the input format.
std::string render_as_input(const FibrationDescription& description);

// ---------------------------------------------------------------------------
// Collision presentation files

/// Line-oriented presentation file:
///   central 1 1 2 2 1 1
///   branch I2
///   divisor C1 m=1 r=1 incidence=1,1,2,0,0,0
CollisionPresentation parse_presentation(std::string_view text);
std::string render_presentation(const CollisionPresentation& presentation);

/// Name under which the built-in I2 + I0* presentation can be attached.
inline constexpr std::string_view builtin_presentation_name = "builtin:I2+I0*";

// ---------------------------------------------------------------------------
// Analysis

struct AnalyzeOptions {
    std::size_t max_depth = default_max_depth;
    /// Searched in order for relative presentation file names.
    std::vector<std::filesystem::path> presentation_dirs;
};

/// Standing assumptions under which the punctured-base group is reported.
inline constexpr std::string_view punctured_sha_hypotheses =
    "assumes a strictly local base with smooth discriminant along this branch and a curve meeting it transversally";

struct BranchReport {
    std::string name;
    ValuationProfile declared;
    std::uint32_t twist_count = 0;
    ValuationProfile profile;
    KodairaType fibre_type;
    std::optional<std::int64_t> j_valuation;
    DivisibleGroup discriminant_group;
    DivisibleGroup sha_punctured;
};

struct LeafReport {
    CollisionPoint collision;
    NodeStatus status = NodeStatus::Allowed;
    std::optional<MultipleFibreVerdict> verdict;
    std::optional<DivisibleGroup> registry_sha;
};

struct PresentationReport {
    std::string source;
    DivisibleGroup computed;
    std::optional<DivisibleGroup> registry;
    bool agrees = false;
    std::vector<RationalVector> witnesses;
};

struct CollisionReport {
    std::string name;
    CollisionPoint root;
    bool allowed = false;
    std::optional<BlowupTree> tree;
    std::vector<LeafReport> leaves;
    std::optional<PresentationReport> presentation;
};

struct OriginReport {
    ValuationProfile exceptional;  // orders along the blown-up origin
    std::optional<ValuationProfile> monomial_prediction;
    bool agrees = false;
};

struct ReportError {
    std::string source;
    ErrorKind kind;
    std::string message;
};

struct AnalysisReport {
    bool polynomial_mode = false;
    std::optional<WeierstrassPolyModel> weierstrass;
    std::optional<BivariatePoly> discriminant;
    std::vector<BranchReport> branches;
    std::vector<CollisionReport> collisions;
    std::optional<OriginReport> origin;
    std::optional<long> corank;
    std::optional<long> delta_eta_gcd;
    std::vector<std::string> notes;
    std::vector<ReportError> errors;
};

/// Runs the full pipeline. Engine failures are recorded in `errors`, tagged
/// with the branch or collision that raised them; the rest of the report is
/// still produced.
AnalysisReport analyze(const FibrationDescription& description, const AnalyzeOptions& options = {});

enum class OutputFormat { Text, Json };

std::string render(const AnalysisReport& report, OutputFormat format);

}  // namespace ellfib
