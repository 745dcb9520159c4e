#pragma once

// JSON encodings shared by the report renderer and the command-line tool.
// Groups are always emitted in their canonical text form.

#include <json.hpp>

#include "ellfib/fibration.hpp"

namespace ellfib::json {

using Json = nlohmann::ordered_json;

Json valuation(const Valuation& v);
Json profile(const ValuationProfile& p);
Json branch(const BranchGerm& g);
Json lattice(const FibreLattice& lattice);
Json matrix(const IntMatrix& m);
Json tree(const std::string& collision, const BlowupTree& tree);
Json report(const AnalysisReport& report);

}  // namespace ellfib::json
