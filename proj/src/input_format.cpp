#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "ellfib/fibration.hpp"

namespace ellfib {

std::string Diagnostic::to_string() const {
    if (line == 0) return message;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
}

namespace {

std::string summarize(ErrorKind kind, const std::vector<Diagnostic>& diagnostics) {
    std::string s(to_string(kind));
    for (const auto& d : diagnostics) s += "\n  " + d.to_string();
    return s;
}

}  // namespace

InputError::InputError(ErrorKind kind, std::vector<Diagnostic> diagnostics)
    : Error(kind, summarize(kind, diagnostics)), diagnostics_(std::move(diagnostics)) {}

// ---------------------------------------------------------------------------
// Polynomial literals

namespace {

class PolynomialParser {
public:
    PolynomialParser(std::string_view text, std::size_t line, std::size_t column_offset)
        : text_(text), line_(line), offset_(column_offset) {}

    BivariatePoly parse() {
        skip_space();
        if (at_end()) fail("empty polynomial");
        BivariatePoly p = expression();
        skip_space();
        if (!at_end()) fail(std::string("unexpected '") + text_[pos_] + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& message) const {
        throw InputError(ErrorKind::ParseError, {{line_, offset_ + pos_ + 1, message}});
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }
    void skip_space() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip_space();
        if (peek() != c) return false;
        ++pos_;
        return true;
    }

    BivariatePoly expression() {
        BivariatePoly sum = term();
        for (;;) {
            if (accept('+'))
                sum += term();
            else if (accept('-'))
                sum -= term();
            else
                return sum;
        }
    }

    // A leading sign applies to the whole term, so -s^2 is -(s^2).
    BivariatePoly term() {
        if (accept('-')) return -term();
        if (accept('+')) return term();
        BivariatePoly product = factor();
        while (accept('*')) product = product * factor();
        return product;
    }

    BivariatePoly factor() {
        BivariatePoly base = primary();
        if (!accept('^')) return base;
        skip_space();
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a natural exponent after '^'");
        const Integer e = integer();
        if (e > 64) fail("exponent " + e.get_str() + " is too large");
        return base.pow(static_cast<unsigned>(e.get_ui()));
    }

    BivariatePoly primary() {
        skip_space();
        const char c = peek();
        if (c == '(') {
            ++pos_;
            BivariatePoly inner = expression();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (c == 's' || c == 't') {
            ++pos_;
            if (!at_end() && std::isalnum(static_cast<unsigned char>(peek()))) fail("unknown variable");
            return c == 's' ? BivariatePoly::s() : BivariatePoly::t();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Rational value(integer());
            const std::size_t save = pos_;
            skip_space();
            if (peek() == '/') {
                ++pos_;
                skip_space();
                if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an integer denominator");
                const Integer den = integer();
                if (den == 0) fail("zero denominator");
                value = Rational(value.get_num(), den);
                value.canonicalize();
            } else {
                pos_ = save;
            }
            return BivariatePoly::constant(value);
        }
        if (at_end()) fail("unexpected end of polynomial");
        fail(std::string("unexpected '") + c + "'");
    }

    Integer integer() {
        const std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        return Integer(std::string(text_.substr(start, pos_ - start)));
    }

    std::string_view text_;
    std::size_t line_;
    std::size_t offset_;
    std::size_t pos_ = 0;
};

}  // namespace

BivariatePoly parse_polynomial(std::string_view text, std::size_t line, std::size_t column_offset) {
    return PolynomialParser(text, line, column_offset).parse();
}

// ---------------------------------------------------------------------------
// Description files

namespace {

struct Token {
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;
};

struct Fragment {
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;  // of text[0]
};

struct Section {
    std::string kind;
    std::string argument;
    std::size_t line = 0;
    std::size_t column = 0;
    std::vector<Fragment> body;
};

std::vector<Token> tokenize(const std::vector<Fragment>& body) {
    std::vector<Token> out;
    for (const auto& f : body) {
        std::size_t i = 0;
        while (i < f.text.size()) {
            while (i < f.text.size() && std::isspace(static_cast<unsigned char>(f.text[i]))) ++i;
            const std::size_t start = i;
            while (i < f.text.size() && !std::isspace(static_cast<unsigned char>(f.text[i]))) ++i;
            if (i > start) out.push_back({f.text.substr(start, i - start), f.line, f.column + start});
        }
    }
    return out;
}

std::string_view strip_comment(std::string_view line) {
    const auto hash = line.find('#');
    return hash == std::string_view::npos ? line : line.substr(0, hash);
}

bool blank(std::string_view s) {
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    return true;
}

bool valid_name(std::string_view name) {
    if (name.empty()) return false;
    for (char c : name)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' || c == '\''))
            return false;
    return true;
}

class DescriptionParser {
public:
    explicit DescriptionParser(std::string_view input) : input_(input) {}

    FibrationDescription run() {
        split_sections();
        if (!syntax_.empty()) throw InputError(ErrorKind::ParseError, syntax_);
        for (const auto& s : sections_) interpret(s);
        if (!syntax_.empty()) throw InputError(ErrorKind::ParseError, syntax_);
        validate();
        if (!semantic_.empty()) throw InputError(ErrorKind::ValidationError, semantic_);
        return std::move(d_);
    }

private:
    void syntax(std::size_t line, std::size_t column, std::string message) {
        syntax_.push_back({line, column, std::move(message)});
    }
    void semantic(std::size_t line, std::size_t column, std::string message) {
        semantic_.push_back({line, column, std::move(message)});
    }

    void split_sections() {
        std::size_t line_no = 0;
        std::size_t start = 0;
        while (start <= input_.size()) {
            std::size_t end = input_.find('\n', start);
            if (end == std::string_view::npos) end = input_.size();
            std::string_view raw = input_.substr(start, end - start);
            if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
            ++line_no;
            handle_line(strip_comment(raw), line_no);
            if (end == input_.size()) break;
            start = end + 1;
        }
    }

    void handle_line(std::string_view text, std::size_t line_no) {
        std::size_t i = 0;
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i == text.size()) return;
        if (text[i] != '[') {
            if (sections_.empty()) {
                syntax(line_no, i + 1, "content before the first [section] header");
                return;
            }
            sections_.back().body.push_back({std::string(text.substr(i)), line_no, i + 1});
            return;
        }
        const std::size_t close = text.find(']', i);
        if (close == std::string_view::npos) {
            syntax(line_no, i + 1, "unterminated section header");
            return;
        }
        const auto header = tokenize({{std::string(text.substr(i + 1, close - i - 1)), line_no, i + 2}});
        if (header.empty()) {
            syntax(line_no, i + 1, "empty section header");
            return;
        }
        Section s;
        s.kind = header[0].text;
        s.line = line_no;
        s.column = i + 1;
        if (header.size() > 2) syntax(line_no, header[2].column, "unexpected text in section header");
        if (header.size() >= 2) s.argument = header[1].text;
        std::string_view rest = text.substr(close + 1);
        if (!blank(rest)) s.body.push_back({std::string(rest), line_no, close + 2});
        sections_.push_back(std::move(s));
    }

    void interpret(const Section& s) {
        if (s.kind == "branch") return branch(s);
        if (s.kind == "weierstrass") return weierstrass(s);
        if (s.kind == "collision") return collision(s);
        if (s.kind == "topology") return topology(s);
        if (s.kind == "picard-degrees") return picard(s);
        syntax(s.line, s.column, "unknown section [" + s.kind + "]");
    }

    void no_argument(const Section& s) {
        if (!s.argument.empty()) syntax(s.line, s.column, "[" + s.kind + "] takes no name");
    }

    // key=value tokens; every key in `keys` is required exactly once.
    std::map<std::string, Token> key_values(const Section& s, const std::set<std::string>& keys) {
        std::map<std::string, Token> out;
        for (const auto& tok : tokenize(s.body)) {
            const auto eq = tok.text.find('=');
            if (eq == std::string::npos || eq == 0 || eq + 1 == tok.text.size()) {
                syntax(tok.line, tok.column, "expected key=value, got '" + tok.text + "'");
                continue;
            }
            std::string key = tok.text.substr(0, eq);
            if (!keys.count(key)) {
                syntax(tok.line, tok.column, "unknown key '" + key + "' in [" + s.kind + "]");
                continue;
            }
            if (out.count(key)) {
                syntax(tok.line, tok.column, "duplicate key '" + key + "'");
                continue;
            }
            out.emplace(key, Token{tok.text.substr(eq + 1), tok.line, tok.column + eq + 1});
        }
        for (const auto& k : keys)
            if (!out.count(k)) syntax(s.line, s.column, "[" + s.kind + "] is missing '" + k + "'");
        return out;
    }

    std::optional<long> integer(const Token& tok, bool allow_negative) {
        try {
            std::size_t used = 0;
            long v = std::stol(tok.text, &used);
            if (used == tok.text.size() && (allow_negative || v >= 0)) return v;
        } catch (const std::exception&) {
        }
        syntax(tok.line, tok.column, std::string("expected ") + (allow_negative ? "an integer" : "a natural number") +
                                         ", got '" + tok.text + "'");
        return std::nullopt;
    }

    void branch(const Section& s) {
        if (!valid_name(s.argument)) {
            syntax(s.line, s.column, "[branch NAME] needs a name made of letters, digits, _ - . '");
            return;
        }
        auto kv = key_values(s, {"va", "vb", "vdelta"});
        if (kv.size() != 3) return;
        auto va = Valuation::parse(kv["va"].text);
        auto vb = Valuation::parse(kv["vb"].text);
        auto vd = Valuation::parse(kv["vdelta"].text);
        if (!va) syntax(kv["va"].line, kv["va"].column, "va must be a natural number or inf");
        if (!vb) syntax(kv["vb"].line, kv["vb"].column, "vb must be a natural number or inf");
        if (!vd || vd->is_infinite())
            syntax(kv["vdelta"].line, kv["vdelta"].column, "vdelta must be a natural number");
        if (!va || !vb || !vd || vd->is_infinite()) return;
        d_.branches.push_back({s.argument, {*va, *vb, vd->value()}});
        branch_lines_.push_back({s.line, s.column});
    }

    void weierstrass(const Section& s) {
        no_argument(s);
        if (weierstrass_seen_) {
            semantic(s.line, s.column, "more than one [weierstrass] section");
            return;
        }
        weierstrass_seen_ = true;
        weierstrass_pos_ = {s.line, s.column};
        std::optional<BivariatePoly> a, b;
        for (const auto& f : s.body) {
            // Assignments "a = ..." / "b = ..."; several may share a line.
            std::vector<std::pair<std::size_t, char>> starts;
            for (std::size_t i = 0; i < f.text.size(); ++i) {
                const char c = f.text[i];
                if (c != 'a' && c != 'b') continue;
                if (i > 0 && (std::isalnum(static_cast<unsigned char>(f.text[i - 1])) || f.text[i - 1] == '_')) continue;
                std::size_t j = i + 1;
                while (j < f.text.size() && std::isspace(static_cast<unsigned char>(f.text[j]))) ++j;
                if (j < f.text.size() && f.text[j] == '=') starts.emplace_back(i, c);
            }
            if (starts.empty() || !blank(std::string_view(f.text).substr(0, starts.front().first))) {
                syntax(f.line, f.column, "expected 'a = <polynomial>' or 'b = <polynomial>'");
                continue;
            }
            for (std::size_t k = 0; k < starts.size(); ++k) {
                const auto [at, var] = starts[k];
                const std::size_t eq = f.text.find('=', at);
                const std::size_t stop = k + 1 < starts.size() ? starts[k + 1].first : f.text.size();
                auto& slot = var == 'a' ? a : b;
                if (slot) {
                    syntax(f.line, f.column + at, std::string("duplicate assignment to ") + var);
                    continue;
                }
                try {
                    slot = parse_polynomial(std::string_view(f.text).substr(eq + 1, stop - eq - 1), f.line,
                                            f.column + eq);
                } catch (const InputError& e) {
                    for (const auto& diag : e.diagnostics()) syntax_.push_back(diag);
                }
            }
        }
        if (!a) syntax(s.line, s.column, "[weierstrass] is missing 'a = <polynomial>'");
        if (!b) syntax(s.line, s.column, "[weierstrass] is missing 'b = <polynomial>'");
        if (a && b) d_.weierstrass = WeierstrassPolyModel{std::move(*a), std::move(*b)};
    }

    void collision(const Section& s) {
        no_argument(s);
        const auto toks = tokenize(s.body);
        if (toks.size() < 2 || toks.size() > 3) {
            syntax(s.line, s.column, "[collision] expects LEFT RIGHT [presentation=FILE]");
            return;
        }
        CollisionDecl c{toks[0].text, toks[1].text, std::nullopt};
        if (toks.size() == 3) {
            const std::string prefix = "presentation=";
            if (toks[2].text.rfind(prefix, 0) != 0 || toks[2].text.size() == prefix.size()) {
                syntax(toks[2].line, toks[2].column, "expected presentation=FILE");
                return;
            }
            c.presentation = toks[2].text.substr(prefix.size());
        }
        d_.collisions.push_back(std::move(c));
        collision_tokens_.push_back({toks[0], toks[1]});
    }

    void topology(const Section& s) {
        no_argument(s);
        if (d_.topology) {
            semantic(s.line, s.column, "more than one [topology] section");
            return;
        }
        auto kv = key_values(s, {"b2_X", "rho_X", "b2_S", "rho_S"});
        if (kv.size() != 4) return;
        auto b2x = integer(kv["b2_X"], false), rx = integer(kv["rho_X"], false);
        auto b2s = integer(kv["b2_S"], false), rs = integer(kv["rho_S"], false);
        if (!b2x || !rx || !b2s || !rs) return;
        if (*rx > *b2x) semantic(kv["rho_X"].line, kv["rho_X"].column, "rho_X exceeds b2_X");
        if (*rs > *b2s) semantic(kv["rho_S"].line, kv["rho_S"].column, "rho_S exceeds b2_S");
        d_.topology = Topology{*b2x, *rx, *b2s, *rs};
    }

    void picard(const Section& s) {
        no_argument(s);
        if (d_.picard_degrees) {
            semantic(s.line, s.column, "more than one [picard-degrees] section");
            return;
        }
        std::vector<long> degrees;
        for (const auto& tok : tokenize(s.body))
            if (auto v = integer(tok, true)) degrees.push_back(*v);
        if (degrees.empty()) syntax(s.line, s.column, "[picard-degrees] needs at least one integer");
        d_.picard_degrees = std::move(degrees);
    }

    void validate() {
        const bool poly = d_.weierstrass.has_value() || weierstrass_seen_;
        if (poly && !d_.branches.empty())
            semantic(branch_lines_.front().first, branch_lines_.front().second,
                     "[branch] sections cannot be combined with [weierstrass]");
        if (!poly && d_.branches.empty()) semantic(0, 0, "the description declares no [branch] and no [weierstrass]");
        if (!semantic_.empty()) return;

        if (poly) {
            try {
                d_.branches = {{"s", axis_profile(*d_.weierstrass, Axis::S)}, {"t", axis_profile(*d_.weierstrass, Axis::T)}};
            } catch (const Error& e) {
                semantic(weierstrass_pos_.first, weierstrass_pos_.second, e.what());
                return;
            }
        } else {
            std::set<std::string> seen;
            for (std::size_t i = 0; i < d_.branches.size(); ++i) {
                const auto& b = d_.branches[i];
                const auto [line, col] = branch_lines_[i];
                if (!seen.insert(b.name).second) semantic(line, col, "branch " + b.name + " is declared twice");
                if (auto why = b.profile.violation()) semantic(line, col, "branch " + b.name + ": " + *why);
            }
        }

        std::map<std::string, ValuationProfile> minimal;
        for (const auto& b : d_.branches)
            if (b.profile.is_consistent()) minimal[b.name] = minimalize(b.profile).profile;

        for (std::size_t i = 0; i < d_.collisions.size(); ++i) {
            const auto& c = d_.collisions[i];
            const auto& [lt, rt] = collision_tokens_[i];
            if (poly && !((c.left == "s" && c.right == "t") || (c.left == "t" && c.right == "s"))) {
                semantic(lt.line, lt.column, "collision " + c.name() +
                                                 ": in [weierstrass] mode only the origin collision 's t' exists");
                continue;
            }
            bool known = true;
            for (const Token* tok : {&lt, &rt})
                if (!std::any_of(d_.branches.begin(), d_.branches.end(),
                                 [&](const BranchDecl& b) { return b.name == tok->text; })) {
                    semantic(tok->line, tok->column, "collision " + c.name() + " names undeclared branch " + tok->text);
                    known = false;
                }
            if (!known) continue;
            if (c.left == c.right) {
                semantic(lt.line, lt.column, "collision " + c.name() + " needs two distinct branches");
                continue;
            }
            for (const Token* tok : {&lt, &rt}) {
                auto it = minimal.find(tok->text);
                if (it != minimal.end() && it->second.vdelta == 0)
                    semantic(tok->line, tok->column, "collision " + c.name() + ": branch " + tok->text +
                                                         " is not on the discriminant (minimal vdelta = 0)");
            }
        }
    }

    std::string_view input_;
    std::vector<Section> sections_;
    FibrationDescription d_;
    std::vector<Diagnostic> syntax_;
    std::vector<Diagnostic> semantic_;
    std::vector<std::pair<std::size_t, std::size_t>> branch_lines_;
    std::vector<std::pair<Token, Token>> collision_tokens_;
    bool weierstrass_seen_ = false;
    std::pair<std::size_t, std::size_t> weierstrass_pos_{0, 0};
};

}  // namespace

FibrationDescription parse(std::string_view input) { return DescriptionParser(input).run(); }

std::string render_as_input(const FibrationDescription& d) {
    std::ostringstream os;
    if (d.weierstrass) {
        os << "[weierstrass]\n";
        os << "a = " << d.weierstrass->a.to_string() << "\n";
        os << "b = " << d.weierstrass->b.to_string() << "\n";
    } else {
        for (const auto& b : d.branches)
            os << "[branch " << b.name << "] va=" << b.profile.va.to_string() << " vb=" << b.profile.vb.to_string()
               << " vdelta=" << b.profile.vdelta << "\n";
    }
    for (const auto& c : d.collisions) {
        os << "[collision] " << c.left << " " << c.right;
        if (c.presentation) os << " presentation=" << *c.presentation;
        os << "\n";
    }
    if (d.topology)
        os << "[topology] b2_X=" << d.topology->b2_X << " rho_X=" << d.topology->rho_X << " b2_S=" << d.topology->b2_S
           << " rho_S=" << d.topology->rho_S << "\n";
    if (d.picard_degrees) {
        os << "[picard-degrees]";
        for (long v : *d.picard_degrees) os << " " << v;
        os << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Presentation files

CollisionPresentation parse_presentation(std::string_view text) {
    CollisionPresentation p;
    std::vector<Diagnostic> errors;
    bool have_central = false;

    auto integers = [&](const std::string& list, std::size_t line, std::size_t column) {
        std::vector<long> out;
        std::size_t start = 0;
        while (start <= list.size()) {
            std::size_t comma = list.find(',', start);
            if (comma == std::string::npos) comma = list.size();
            const std::string item = list.substr(start, comma - start);
            try {
                std::size_t used = 0;
                long v = std::stol(item, &used);
                if (used != item.size()) throw std::invalid_argument(item);
                out.push_back(v);
            } catch (const std::exception&) {
                errors.push_back({line, column + start, "expected an integer, got '" + item + "'"});
            }
            start = comma + 1;
            if (comma == list.size()) break;
        }
        return out;
    };

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        const auto toks = tokenize({{std::string(strip_comment(text.substr(start, end - start))), line_no, 1}});
        start = end + 1;
        if (!toks.empty()) {
            const std::string& head = toks[0].text;
            if (head == "central") {
                if (have_central) errors.push_back({line_no, toks[0].column, "duplicate 'central' line"});
                have_central = true;
                for (std::size_t i = 1; i < toks.size(); ++i)
                    for (long v : integers(toks[i].text, toks[i].line, toks[i].column))
                        p.central_multiplicities.push_back(v);
            } else if (head == "branch") {
                PresentationBranch b;
                if (toks.size() > 2) errors.push_back({line_no, toks[2].column, "branch takes at most a fibre type"});
                if (toks.size() >= 2) {
                    b.fibre_type = KodairaType::parse(toks[1].text);
                    if (!b.fibre_type)
                        errors.push_back({line_no, toks[1].column, "unknown fibre type '" + toks[1].text + "'"});
                }
                p.branches.push_back(std::move(b));
            } else if (head == "divisor") {
                if (p.branches.empty()) {
                    errors.push_back({line_no, toks[0].column, "divisor before any branch"});
                } else if (toks.size() < 2) {
                    errors.push_back({line_no, toks[0].column, "divisor needs a name"});
                } else {
                    PresentationDivisor d;
                    d.name = toks[1].text;
                    bool has_incidence = false;
                    for (std::size_t i = 2; i < toks.size(); ++i) {
                        const auto eq = toks[i].text.find('=');
                        const std::string key = toks[i].text.substr(0, eq);
                        const std::string value = eq == std::string::npos ? "" : toks[i].text.substr(eq + 1);
                        const std::size_t col = toks[i].column + (eq == std::string::npos ? 0 : eq + 1);
                        auto values = integers(value, line_no, col);
                        if (key == "incidence") {
                            d.incidence = values;
                            has_incidence = true;
                        } else if ((key == "m" || key == "r") && values.size() == 1) {
                            (key == "m" ? d.multiplicity : d.ramification) = values[0];
                        } else {
                            errors.push_back({line_no, toks[i].column, "unknown divisor field '" + toks[i].text + "'"});
                        }
                    }
                    if (!has_incidence) errors.push_back({line_no, toks[0].column, "divisor needs incidence=..."});
                    p.branches.back().divisors.push_back(std::move(d));
                }
            } else {
                errors.push_back({line_no, toks[0].column, "unknown directive '" + head + "'"});
            }
        }
        if (end == text.size()) break;
    }
    if (!have_central) errors.push_back({0, 0, "presentation has no 'central' line"});
    if (!errors.empty()) throw InputError(ErrorKind::ParseError, errors);
    return p;
}

std::string render_presentation(const CollisionPresentation& p) {
    std::ostringstream os;
    auto list = [&](const std::vector<long>& v, char sep) {
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? std::string(1, sep) : "") << v[i];
    };
    os << "central ";
    list(p.central_multiplicities, ' ');
    os << "\n";
    for (const auto& b : p.branches) {
        os << "branch";
        if (b.fibre_type) os << " " << b.fibre_type->to_string();
        os << "\n";
        for (const auto& d : b.divisors) {
            os << "divisor " << d.name << " m=" << d.multiplicity << " r=" << d.ramification << " incidence=";
            list(d.incidence, ',');
            os << "\n";
        }
    }
    return os.str();
}

}  // namespace ellfib
