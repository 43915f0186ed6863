#include <charconv>
#include <sstream>

#include "qeraser/scenario.hpp"

namespace qeraser {
namespace {

std::string shortest(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_element(const Element& e) {
    return std::visit(
        [](const auto& el) -> std::string {
            using T = std::decay_t<decltype(el)>;
            if constexpr (std::is_same_v<T, BeamSplitter>) {
                return "bs " + el.a.str() + " " + el.b.str();
            } else if constexpr (std::is_same_v<T, Phase>) {
                return "phase " + el.mode.str() + " " + shortest(el.theta);
            } else {
                std::string out = "relabel";
                for (const auto& [from, to] : el.pairs) out += " " + from.str() + "->" + to.str();
                return out;
            }
        },
        e);
}

std::string join_modes(const std::vector<ModeLabel>& modes) {
    std::string out;
    for (const auto& m : modes) {
        if (!out.empty()) out += " ";
        out += m.str();
    }
    return out;
}

std::string format_step(const Step& s) {
    return std::visit(
        [](const auto& st) -> std::string {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, UnitaryStep>) {
                return format_element(st.element);
            } else if constexpr (std::is_same_v<T, MeasureStep>) {
                return "measure " + join_modes(st.modes) + " as " + st.name;
            } else if constexpr (std::is_same_v<T, ConditionalStep>) {
                std::string out = "if " + st.condition.to_string() + " then " +
                                  format_element(st.then_element);
                if (st.else_element) out += " else " + format_element(*st.else_element);
                return out;
            } else if constexpr (std::is_same_v<T, PointerStep>) {
                return "pointer " + st.watched.str() + " " + st.pointer.str();
            } else {
                return "dephase " + join_modes(st.pointers);
            }
        },
        s);
}

std::string format_audit(const AuditDirective& d) {
    std::string out = "audit " + std::string(to_string(d.kind));
    switch (d.kind) {
        case AuditKind::NoSignaling: out += " " + d.other + " " + d.wing; break;
        case AuditKind::CutInvariance: out += " " + d.record; break;
        case AuditKind::Consistency: out += " " + d.event.to_string(); break;
        case AuditKind::FilterEquivalence: out += " " + d.other + " " + d.event.to_string(); break;
        case AuditKind::Retro: out += " " + format_ket(d.projector); break;
    }
    if (d.expect) out += " expect " + shortest(*d.expect);
    return out;
}

}  // namespace

std::string format_coefficient(Amplitude c) {
    if (c.imag() == 0.0) {
        if (c.real() == kInvSqrt2) return "1/sqrt2";
        if (c.real() == -kInvSqrt2) return "-1/sqrt2";
        return shortest(c.real());
    }
    if (c.real() == 0.0) {
        if (c.imag() == kInvSqrt2) return "i/sqrt2";
        if (c.imag() == -kInvSqrt2) return "-i/sqrt2";
        return shortest(c.imag()) + "i";
    }
    throw Error(ErrorKind::SemanticError,
                "coefficient with both real and imaginary parts cannot be written as one term");
}

std::string format_ket(const Ket& ket) {
    std::string out = "|";
    for (std::size_t i = 0; i < ket.size(); ++i) {
        if (i) out += ", ";
        out += ket[i].first.str() + "=" + std::to_string(ket[i].second);
    }
    return out + ">";
}

std::string print_scenario(const ScenarioDoc& doc) {
    std::ostringstream os;
    if (!doc.name.empty()) os << "scenario " << doc.name << "\n";
    os << "modes " << join_modes(doc.modes) << "\n";
    if (!doc.state.empty()) {
        os << "state";
        for (std::size_t i = 0; i < doc.state.size(); ++i) {
            os << (i ? " + " : " ") << format_coefficient(doc.state[i].coeff) << " "
               << format_ket(doc.state[i].ket);
        }
        os << "\n";
    }
    for (const auto& s : doc.steps) os << "step " << format_step(s) << "\n";
    for (const auto& w : doc.wings) os << "wing " << w.name << ": " << join_modes(w.modes) << "\n";
    if (!doc.support.empty()) {
        os << "support";
        for (const auto& k : doc.support) os << " " << format_ket(k);
        os << "\n";
    }
    for (const auto& a : doc.audits) os << format_audit(a) << "\n";
    return os.str();
}

}  // namespace qeraser
