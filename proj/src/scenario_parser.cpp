#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include "qeraser/scenario.hpp"

namespace qeraser {

std::string_view to_string(AuditKind kind) {
    switch (kind) {
        case AuditKind::NoSignaling: return "no-signaling";
        case AuditKind::CutInvariance: return "cut-invariance";
        case AuditKind::Consistency: return "consistency";
        case AuditKind::FilterEquivalence: return "filter-equivalence";
        case AuditKind::Retro: return "retro";
    }
    return "unknown";
}

std::optional<AuditKind> audit_kind_from_string(std::string_view s) {
    for (auto k : {AuditKind::NoSignaling, AuditKind::CutInvariance, AuditKind::Consistency,
                   AuditKind::FilterEquivalence, AuditKind::Retro})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

namespace {

std::string position_prefix(int line, int column) {
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": ";
}

}  // namespace

ParseError::ParseError(ErrorKind kind, int line, int column, const std::string& message,
                       std::vector<std::string> expected)
    : Error(kind, position_prefix(line, column) + message),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

namespace {

const std::set<std::string, std::less<>> kReserved = {"as",     "then", "else",
                                                      "expect", "true", "false"};

bool ident_start(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
bool digit(char c) { return c >= '0' && c <= '9'; }
bool word_char(char c) {
    return ident_char(c) || c == '-' || c == '.' || c == '/';
}

[[noreturn]] void semantic(int line, int column, const std::string& message) {
    throw ParseError(ErrorKind::SemanticError, line, column, message);
}

std::string join_expected(const std::vector<std::string>& expected) {
    std::string out;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i) out += (i + 1 == expected.size()) ? " or " : ", ";
        out += expected[i];
    }
    return out;
}

/// Cursor over one source line.
class Cursor {
public:
    Cursor(std::string_view text, int line) : text_(text), line_(line) {}

    int line() const { return line_; }
    int column() const { return static_cast<int>(pos_) + 1; }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    bool done() {
        skip_ws();
        return pos_ >= text_.size();
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool starts_with(std::string_view tok) {
        skip_ws();
        return text_.substr(pos_).starts_with(tok);
    }

    bool accept(std::string_view tok) {
        if (!starts_with(tok)) return false;
        pos_ += tok.size();
        return true;
    }

    /// Identifier without consuming it (empty if none).
    std::string peek_identifier() {
        skip_ws();
        std::size_t end = pos_;
        if (end < text_.size() && ident_start(text_[end])) {
            while (end < text_.size() && ident_char(text_[end])) ++end;
        }
        return std::string(text_.substr(pos_, end - pos_));
    }

    bool accept_keyword(std::string_view kw) {
        if (peek_identifier() != kw) return false;
        pos_ += kw.size();
        return true;
    }

    [[noreturn]] void fail(std::vector<std::string> expected) {
        skip_ws();
        std::string found;
        if (pos_ >= text_.size()) {
            found = "end of line";
        } else {
            std::size_t end = pos_;
            while (end < text_.size() && text_[end] != ' ' && text_[end] != '\t' &&
                   end - pos_ < 24)
                ++end;
            found = "'" + std::string(text_.substr(pos_, std::max<std::size_t>(end - pos_, 1))) +
                    "'";
        }
        throw ParseError(ErrorKind::SyntaxError, line_, column(),
                         "expected " + join_expected(expected) + ", found " + found, expected);
    }

    void expect(std::string_view tok) {
        if (!accept(tok)) fail({"'" + std::string(tok) + "'"});
    }

    void expect_keyword(std::string_view kw) {
        if (!accept_keyword(kw)) fail({"'" + std::string(kw) + "'"});
    }

    void expect_end() {
        if (!done()) fail({"end of line"});
    }

    std::string identifier(const std::string& what) {
        std::string id = peek_identifier();
        if (id.empty()) fail({what});
        if (kReserved.contains(id)) {
            throw ParseError(ErrorKind::SyntaxError, line_, column(),
                             "'" + id + "' is a reserved word and cannot be used as " + what,
                             {what});
        }
        pos_ += id.size();
        return id;
    }

    std::string word(const std::string& what) {
        skip_ws();
        std::size_t end = pos_;
        while (end < text_.size() && word_char(text_[end])) ++end;
        if (end == pos_) fail({what});
        std::string w(text_.substr(pos_, end - pos_));
        pos_ = end;
        return w;
    }

    std::string pattern() {
        skip_ws();
        std::size_t end = pos_;
        while (end < text_.size() && (text_[end] == '0' || text_[end] == '1')) ++end;
        if (end == pos_ || (end < text_.size() && ident_char(text_[end]))) {
            fail({"occupation pattern of 0s and 1s"});
        }
        std::string p(text_.substr(pos_, end - pos_));
        pos_ = end;
        return p;
    }

    /// Unsigned decimal: digits [. digits] [e [+-] digits].
    std::optional<double> unsigned_decimal() {
        std::size_t end = pos_;
        while (end < text_.size() && digit(text_[end])) ++end;
        if (end == pos_) return std::nullopt;
        if (end + 1 < text_.size() && text_[end] == '.' && digit(text_[end + 1])) {
            ++end;
            while (end < text_.size() && digit(text_[end])) ++end;
        }
        if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
            std::size_t e = end + 1;
            if (e < text_.size() && (text_[e] == '+' || text_[e] == '-')) ++e;
            if (e < text_.size() && digit(text_[e])) {
                while (e < text_.size() && digit(text_[e])) ++e;
                end = e;
            }
        }
        double value = 0.0;
        auto res = std::from_chars(text_.data() + pos_, text_.data() + end, value);
        if (res.ec != std::errc() || !std::isfinite(value)) return std::nullopt;
        pos_ = end;
        return value;
    }

    double number(const std::string& what) {
        skip_ws();
        const std::size_t start = pos_;
        const bool neg = accept("-");
        skip_ws();
        auto v = unsigned_decimal();
        if (!v) {
            pos_ = start;
            fail({what});
        }
        return neg ? -*v : *v;
    }

    Amplitude coefficient() {
        skip_ws();
        const std::size_t start = pos_;
        const double sign = accept("-") ? -1.0 : 1.0;
        skip_ws();
        auto boundary = [&](std::size_t at) {
            return at >= text_.size() || !ident_char(text_[at]);
        };
        if (pos_ < text_.size() && text_[pos_] == 'i') {
            if (text_.substr(pos_).starts_with("i/sqrt2") && boundary(pos_ + 7)) {
                pos_ += 7;
                return {0.0, sign * kInvSqrt2};
            }
            if (boundary(pos_ + 1)) {
                pos_ += 1;
                return {0.0, sign};
            }
        }
        if (text_.substr(pos_).starts_with("1/sqrt2") && boundary(pos_ + 7)) {
            pos_ += 7;
            return {sign * kInvSqrt2, 0.0};
        }
        auto v = unsigned_decimal();
        if (!v) {
            pos_ = start;
            fail({"coefficient"});
        }
        if (pos_ < text_.size() && text_[pos_] == 'i' && boundary(pos_ + 1)) {
            ++pos_;
            return {0.0, sign * *v};
        }
        if (pos_ < text_.size() && ident_char(text_[pos_])) {
            pos_ = start;
            fail({"coefficient"});
        }
        return {sign * *v, 0.0};
    }

    struct KetEntry {
        ModeLabel mode;
        int occupation;
        int column;
    };

    std::vector<KetEntry> ket() {
        expect("|");
        std::vector<KetEntry> out;
        if (accept(">")) return out;
        do {
            skip_ws();
            const int col = column();
            std::string name = identifier("mode name");
            expect("=");
            skip_ws();
            int occ = -1;
            if (pos_ < text_.size() && (text_[pos_] == '0' || text_[pos_] == '1') &&
                (pos_ + 1 >= text_.size() || !ident_char(text_[pos_ + 1]))) {
                occ = text_[pos_] - '0';
                ++pos_;
            } else {
                fail({"occupation 0 or 1"});
            }
            out.push_back({ModeLabel(name), occ, col});
        } while (accept(","));
        expect(">");
        return out;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    int line_;
};

struct PredicateRef {
    std::string name;
    std::string pattern;
    int line;
    int column;
};

RecordPredicate parse_or(Cursor& c, std::vector<PredicateRef>& refs);

RecordPredicate parse_unary(Cursor& c, std::vector<PredicateRef>& refs) {
    if (c.starts_with("!=")) c.fail({"predicate"});
    if (c.accept("!")) return RecordPredicate::negation(parse_unary(c, refs));
    if (c.accept("(")) {
        auto inner = parse_or(c, refs);
        c.expect(")");
        return inner;
    }
    if (c.accept_keyword("true")) return RecordPredicate::constant(true);
    if (c.accept_keyword("false")) return RecordPredicate::constant(false);
    if (c.peek_identifier().empty()) c.fail({"record name", "'('", "'!'", "'true'", "'false'"});
    c.skip_ws();
    const int col = c.column();
    std::string name = c.identifier("record name");
    c.expect("==");
    std::string pattern = c.pattern();
    refs.push_back({name, pattern, c.line(), col});
    return RecordPredicate::equals(std::move(name), std::move(pattern));
}

RecordPredicate parse_and(Cursor& c, std::vector<PredicateRef>& refs) {
    auto lhs = parse_unary(c, refs);
    while (c.accept("&&")) lhs = RecordPredicate::both(std::move(lhs), parse_unary(c, refs));
    return lhs;
}

RecordPredicate parse_or(Cursor& c, std::vector<PredicateRef>& refs) {
    auto lhs = parse_and(c, refs);
    while (c.accept("||")) lhs = RecordPredicate::either(std::move(lhs), parse_and(c, refs));
    return lhs;
}

// ---------------------------------------------------------------------------

class DocParser {
public:
    ScenarioDoc parse(std::string_view text) {
        int lineno = 0;
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t nl = text.find('\n', start);
            std::string_view line =
                text.substr(start, nl == std::string_view::npos ? text.size() - start : nl - start);
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
            parse_line(Cursor(line, lineno));
            if (nl == std::string_view::npos) break;
            start = nl + 1;
        }
        last_line_ = std::max(lineno, 1);
        finish();
        return std::move(doc_);
    }

private:
    void parse_line(Cursor c) {
        if (c.done()) return;
        const int col = c.column();
        const std::string kw = c.peek_identifier();
        static const std::vector<std::string> directives = {
            "'scenario'", "'modes'", "'state'", "'step'", "'wing'", "'support'", "'audit'"};
        static const std::set<std::string, std::less<>> known = {
            "scenario", "modes", "state", "step", "wing", "support", "audit"};
        if (!known.contains(kw)) c.fail(directives);
        c.accept_keyword(kw);
        if (kw == "scenario") return parse_scenario_name(c, col);
        if (kw == "modes") return parse_modes(c, col);
        if (!have_modes_) semantic(c.line(), col, "'" + kw + "' before the 'modes' declaration");
        if (kw == "state") return parse_state(c, col);
        if (kw == "step") return parse_step(c);
        if (kw == "wing") return parse_wing(c);
        if (kw == "support") return parse_support(c);
        parse_audit(c);
    }

    void parse_scenario_name(Cursor& c, int col) {
        if (have_name_) semantic(c.line(), col, "duplicate 'scenario' line");
        doc_.name = c.word("scenario name");
        c.expect_end();
        have_name_ = true;
    }

    void parse_modes(Cursor& c, int col) {
        if (have_modes_) semantic(c.line(), col, "duplicate 'modes' declaration");
        std::set<ModeLabel> seen;
        do {
            c.skip_ws();
            const int mcol = c.column();
            ModeLabel m(c.identifier("mode name"));
            if (!seen.insert(m).second) semantic(c.line(), mcol, "mode '" + m.str() + "' declared twice");
            doc_.modes.push_back(m);
        } while (!c.done());
        if (doc_.modes.size() > kMaxModes) {
            semantic(c.line(), col, "at most " + std::to_string(kMaxModes) + " modes are supported");
        }
        have_modes_ = true;
        initial_ = ModeSet(doc_.modes);
        current_ = initial_;
        every_.insert(doc_.modes.begin(), doc_.modes.end());
    }

    Ket checked_ket(Cursor& c, const ModeSet& allowed, const char* where) {
        Ket ket;
        std::set<ModeLabel> seen;
        for (auto& e : c.ket()) {
            if (!allowed.contains(e.mode)) {
                semantic(c.line(), e.column, std::string("unknown mode '") + e.mode.str() + "' in " + where);
            }
            if (!seen.insert(e.mode).second) {
                semantic(c.line(), e.column, "mode '" + e.mode.str() + "' listed twice in one ket");
            }
            ket.emplace_back(e.mode, e.occupation);
        }
        return ket;
    }

    void parse_state(Cursor& c, int col) {
        if (have_state_) semantic(c.line(), col, "duplicate 'state' line");
        do {
            Amplitude coeff = c.coefficient();
            Ket ket = checked_ket(c, initial_, "state");
            doc_.state.push_back({coeff, std::move(ket)});
        } while (c.accept("+"));
        c.expect_end();
        have_state_ = true;
        state_line_ = c.line();
        double norm = 0.0;
        try {
            norm = to_initial_state().norm_sq();
        } catch (const Error& e) {
            semantic(c.line(), col, e.what());
        }
        if (std::abs(norm - 1.0) > 1e-9) {
            semantic(c.line(), col, "initial state is not normalized (squared norm " +
                                        std::to_string(norm) + ")");
        }
    }

    PureState to_initial_state() const {
        std::vector<std::pair<BasisConfig, Amplitude>> terms;
        for (const auto& t : doc_.state) {
            BasisConfig cfg;
            for (const auto& m : doc_.modes) cfg.set(m, 0);
            for (const auto& [m, v] : t.ket) cfg.set(m, v);
            terms.emplace_back(std::move(cfg), t.coeff);
        }
        return superpose(terms);
    }

    ModeLabel current_mode(Cursor& c, const std::string& what = "mode name") {
        c.skip_ws();
        const int col = c.column();
        ModeLabel m(c.identifier(what));
        if (!current_.contains(m)) semantic(c.line(), col, "unknown mode '" + m.str() + "'");
        return m;
    }

    Element parse_element(Cursor& c, bool in_conditional) {
        c.skip_ws();
        const int col = c.column();
        if (c.accept_keyword("bs")) {
            ModeLabel a = current_mode(c);
            ModeLabel b = current_mode(c);
            if (a == b) semantic(c.line(), col, "beam splitter needs two distinct modes");
            return BeamSplitter{a, b};
        }
        if (c.accept_keyword("phase")) {
            ModeLabel m = current_mode(c);
            return Phase{m, c.number("phase in radians")};
        }
        if (c.accept_keyword("relabel")) {
            Relabel r;
            do {
                ModeLabel from = current_mode(c);
                c.expect("->");
                ModeLabel to(c.identifier("mode name"));
                r.pairs.emplace_back(from, to);
            } while (!c.done() && !(in_conditional && c.peek_identifier() == "else"));
            if (in_conditional && !preserves_mode_set(r)) {
                semantic(c.line(), col, "a conditional relabel must permute existing modes");
            }
            if (in_conditional) {
                try {
                    (void)element_output_modes(current_, r, Direction::Forward);
                } catch (const Error& err) {
                    semantic(c.line(), col, err.what());
                }
            }
            return r;
        }
        c.fail({"'bs'", "'phase'", "'relabel'"});
    }

    void note_record_ref(const PredicateRef& ref, bool must_precede) {
        auto it = records_.find(ref.name);
        if (it == records_.end()) {
            if (must_precede) pending_.push_back(ref);
            else late_refs_.push_back(ref);
            return;
        }
        check_pattern(ref, it->second.second);
    }

    void check_pattern(const PredicateRef& ref, std::size_t width) {
        if (ref.pattern.size() != width) {
            semantic(ref.line, ref.column,
                     "record '" + ref.name + "' has " + std::to_string(width) +
                         " measured modes but the pattern '" + ref.pattern + "' has " +
                         std::to_string(ref.pattern.size()));
        }
    }

    void parse_step(Cursor& c) {
        c.skip_ws();
        const int col = c.column();
        if (c.accept_keyword("measure")) {
            MeasureStep m;
            std::set<ModeLabel> seen;
            while (c.peek_identifier() != "as") {
                c.skip_ws();
                const int mcol = c.column();
                if (c.done()) c.fail({"mode name", "'as'"});
                ModeLabel mode = current_mode(c);
                if (!seen.insert(mode).second) semantic(c.line(), mcol, "mode '" + mode.str() + "' measured twice");
                m.modes.push_back(mode);
            }
            if (m.modes.empty()) c.fail({"mode name"});
            c.expect_keyword("as");
            c.skip_ws();
            const int ncol = c.column();
            m.name = c.identifier("record name");
            c.expect_end();
            if (records_.contains(m.name)) {
                semantic(c.line(), ncol, "record '" + m.name + "' already written on line " +
                                             std::to_string(records_[m.name].first));
            }
            records_[m.name] = {c.line(), m.modes.size()};
            doc_.steps.push_back(std::move(m));
            return;
        }
        if (c.accept_keyword("if")) {
            std::vector<PredicateRef> refs;
            RecordPredicate cond = parse_or(c, refs);
            c.expect_keyword("then");
            for (const auto& r : refs) note_record_ref(r, true);
            Element then_el = parse_element(c, true);
            std::optional<Element> else_el;
            if (c.accept_keyword("else")) else_el = parse_element(c, true);
            c.expect_end();
            doc_.steps.push_back(ConditionalStep{std::move(cond), std::move(then_el), std::move(else_el)});
            return;
        }
        if (c.accept_keyword("pointer")) {
            ModeLabel watched = current_mode(c);
            ModeLabel pointer = current_mode(c);
            if (watched == pointer) semantic(c.line(), col, "a pointer cannot watch itself");
            c.expect_end();
            doc_.steps.push_back(PointerStep{watched, pointer});
            return;
        }
        if (c.accept_keyword("dephase")) {
            DephaseStep d;
            do {
                d.pointers.push_back(current_mode(c));
            } while (!c.done());
            doc_.steps.push_back(std::move(d));
            return;
        }
        if (const auto id = c.peek_identifier(); id != "bs" && id != "phase" && id != "relabel") {
            c.fail({"'bs'", "'phase'", "'relabel'", "'measure'", "'if'", "'pointer'", "'dephase'"});
        }
        Element e = parse_element(c, false);
        c.expect_end();
        try {
            current_ = element_output_modes(current_, e, Direction::Forward);
        } catch (const Error& err) {
            semantic(c.line(), col, err.what());
        }
        every_.insert(current_.begin(), current_.end());
        doc_.steps.push_back(UnitaryStep{std::move(e)});
    }

    void parse_wing(Cursor& c) {
        Wing w;
        c.skip_ws();
        const int col = c.column();
        w.name = c.identifier("wing name");
        c.expect(":");
        std::vector<std::pair<ModeLabel, int>> located;
        do {
            c.skip_ws();
            const int mcol = c.column();
            ModeLabel m(c.identifier("mode name"));
            located.emplace_back(m, mcol);
            w.modes.push_back(m);
        } while (!c.done());
        wing_refs_.push_back({w.name, c.line(), col, located});
        doc_.wings.push_back(std::move(w));
    }

    void parse_support(Cursor& c) {
        do {
            doc_.support.push_back(checked_ket(c, initial_, "support"));
        } while (!c.done());
    }

    void parse_audit(Cursor& c) {
        c.skip_ws();
        const int col = c.column();
        const std::string kind_word = c.word("audit kind");
        auto kind = audit_kind_from_string(kind_word);
        if (!kind) {
            throw ParseError(ErrorKind::SyntaxError, c.line(), col,
                             "unknown audit kind '" + kind_word + "'",
                             {"no-signaling", "cut-invariance", "consistency",
                              "filter-equivalence", "retro"});
        }
        AuditDirective d;
        d.kind = *kind;
        std::vector<PredicateRef> refs;
        int wing_col = col;
        switch (*kind) {
            case AuditKind::NoSignaling:
                d.other = c.word("scenario name");
                c.skip_ws();
                wing_col = c.column();
                d.wing = c.identifier("wing name");
                break;
            case AuditKind::CutInvariance: {
                c.skip_ws();
                const int rcol = c.column();
                d.record = c.identifier("record name");
                late_refs_.push_back({d.record, "", c.line(), rcol});
                break;
            }
            case AuditKind::Consistency:
                d.event = parse_or(c, refs);
                break;
            case AuditKind::FilterEquivalence:
                d.other = c.word("scenario name");
                d.event = parse_or(c, refs);
                break;
            case AuditKind::Retro:
                for (auto& e : c.ket()) {
                    if (!d.projector.empty() &&
                        std::any_of(d.projector.begin(), d.projector.end(),
                                    [&](const auto& kv) { return kv.first == e.mode; })) {
                        semantic(c.line(), e.column, "mode '" + e.mode.str() + "' listed twice in one ket");
                    }
                    d.projector.emplace_back(e.mode, e.occupation);
                    projector_refs_.push_back({e.mode, c.line(), e.column});
                }
                retro_lines_.push_back(c.line());
                break;
        }
        if (c.accept_keyword("expect")) d.expect = c.number("expected value");
        c.expect_end();
        for (const auto& r : refs) note_record_ref(r, false);
        if (d.kind == AuditKind::NoSignaling) wing_uses_.push_back({d.wing, c.line(), wing_col});
        doc_.audits.push_back(std::move(d));
    }

    void finish() {
        if (!have_modes_) semantic(1, 1, "missing 'modes' declaration");
        if (!have_state_) semantic(last_line_, 1, "missing 'state' line");

        for (const auto& ref : pending_) {
            auto it = records_.find(ref.name);
            if (it == records_.end()) {
                semantic(ref.line, ref.column, "unknown record '" + ref.name + "'");
            }
            throw ParseError(ErrorKind::SemanticError, ref.line, ref.column,
                             "record '" + ref.name + "' is read on line " +
                                 std::to_string(ref.line) + " before it is measured on line " +
                                 std::to_string(it->second.first));
        }
        for (const auto& ref : late_refs_) {
            auto it = records_.find(ref.name);
            if (it == records_.end()) semantic(ref.line, ref.column, "unknown record '" + ref.name + "'");
            if (!ref.pattern.empty()) check_pattern(ref, it->second.second);
        }

        std::set<std::string> wing_names;
        std::set<ModeLabel> claimed;
        for (const auto& w : wing_refs_) {
            const auto& name = w.name;
            if (!wing_names.insert(name).second) semantic(w.line, w.column, "wing '" + name + "' declared twice");
            for (const auto& [m, mcol] : w.modes) {
                if (!every_.contains(m)) semantic(w.line, mcol, "unknown mode '" + m.str() + "'");
                if (!claimed.insert(m).second) {
                    semantic(w.line, mcol, "mode '" + m.str() + "' belongs to more than one wing");
                }
            }
        }
        for (const auto& u : wing_uses_) {
            if (!wing_names.contains(u.name)) semantic(u.line, u.column, "unknown wing '" + u.name + "'");
        }
        for (const auto& p : projector_refs_) {
            if (!every_.contains(p.mode)) semantic(p.line, p.column, "unknown mode '" + p.mode.str() + "'");
        }
        if (!retro_lines_.empty() && doc_.support.empty()) {
            semantic(retro_lines_.front(), 1, "retro audit needs a 'support' declaration");
        }

        try {
            validate(to_protocol(doc_));
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            semantic(state_line_, 1, e.what());
        }
    }

    struct WingRef {
        std::string name;
        int line;
        int column;
        std::vector<std::pair<ModeLabel, int>> modes;
    };
    struct WingUse {
        std::string name;
        int line;
        int column;
    };
    struct ModeRef {
        ModeLabel mode;
        int line;
        int column;
    };

    ScenarioDoc doc_;
    bool have_name_ = false, have_modes_ = false, have_state_ = false;
    int state_line_ = 1, last_line_ = 1;
    ModeSet initial_, current_;
    std::set<ModeLabel> every_;
    std::map<std::string, std::pair<int, std::size_t>> records_;  // name -> (line, width)
    std::vector<PredicateRef> pending_, late_refs_;
    std::vector<WingRef> wing_refs_;
    std::vector<WingUse> wing_uses_;
    std::vector<ModeRef> projector_refs_;
    std::vector<int> retro_lines_;
};

}  // namespace

ScenarioDoc parse_scenario(std::string_view text) {
    try {
        return DocParser().parse(text);
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        // Label or capacity failures raised below the parser.
        throw ParseError(ErrorKind::SemanticError, 1, 1, e.what());
    } catch (const std::exception& e) {
        throw ParseError(ErrorKind::SyntaxError, 1, 1, std::string("malformed input: ") + e.what());
    }
}

RecordPredicate parse_predicate(std::string_view text) {
    Cursor c(text, 1);
    std::vector<PredicateRef> refs;
    auto p = parse_or(c, refs);
    c.expect_end();
    return p;
}

Ket parse_ket(std::string_view text) {
    Cursor c(text, 1);
    Ket out;
    for (auto& e : c.ket()) out.emplace_back(e.mode, e.occupation);
    c.expect_end();
    return out;
}

Protocol to_protocol(const ScenarioDoc& doc) {
    if (doc.state.empty()) throw Error(ErrorKind::SemanticError, "scenario has no initial state");
    ModeSet modes(doc.modes);
    std::vector<std::pair<BasisConfig, Amplitude>> terms;
    for (const auto& t : doc.state) {
        BasisConfig cfg;
        for (const auto& m : modes) cfg.set(m, 0);
        for (const auto& [m, v] : t.ket) {
            if (!modes.contains(m)) throw Error(ErrorKind::SemanticError, "unknown mode '" + m.str() + "' in state");
            cfg.set(m, v);
        }
        terms.emplace_back(std::move(cfg), t.coeff);
    }
    Protocol p;
    p.initial = superpose(terms);
    p.steps = doc.steps;
    p.wings = doc.wings;
    return p;
}

std::optional<SourceSupport> to_support(const ScenarioDoc& doc) {
    if (doc.support.empty()) return std::nullopt;
    ModeSet modes(doc.modes);
    std::vector<BasisConfig> configs;
    for (const auto& ket : doc.support) {
        BasisConfig cfg;
        for (const auto& m : modes) cfg.set(m, 0);
        for (const auto& [m, v] : ket) cfg.set(m, v);
        configs.push_back(std::move(cfg));
    }
    return SourceSupport(std::move(configs));
}

Projector to_projector(const Ket& ket) {
    std::vector<Constraint> cs;
    for (const auto& [m, v] : ket) cs.push_back({m, v});
    return Projector(std::move(cs));
}

std::optional<std::size_t> measure_step_index(const ScenarioDoc& doc, const std::string& record) {
    for (std::size_t i = 0; i < doc.steps.size(); ++i) {
        const auto* m = std::get_if<MeasureStep>(&doc.steps[i]);
        if (m && m->name == record) return i;
    }
    return std::nullopt;
}

}  // namespace qeraser
