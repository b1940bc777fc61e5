#include "psk/report.hpp"

#include <cstdio>

namespace psk {

std::string fmt_double(double x) {
    if (x == 0.0) return "0"; // normalizes -0
    char buf[40];
    snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string fmt_complex(const Cd& z) {
    if (z.im == 0.0) return fmt_double(z.re);
    if (z.re == 0.0) return fmt_double(z.im) + "i";
    std::string out = fmt_double(z.re);
    out += z.im > 0 ? "+" : "-";
    out += fmt_double(std::abs(z.im)) + "i";
    return out;
}

std::string form_to_text(const Form<Cd>& f, const std::string& letter) {
    if (f.is_zero()) return "0";
    std::string out;
    for (const auto& [mask, c] : f.terms()) {
        std::string mono = letter;
        for (uint32_t mm = mask; mm; mm &= mm - 1) mono += std::to_string(__builtin_ctz(mm) + 1);
        std::string coef;
        bool negate = false;
        if (c.im == 0.0 && c.re < 0.0) {
            negate = true;
            coef = fmt_double(-c.re);
        } else if (c.im == 0.0) {
            coef = fmt_double(c.re);
        } else {
            coef = "(" + fmt_complex(c) + ")";
        }
        if (out.empty())
            out += negate ? "-" : "";
        else
            out += negate ? " - " : " + ";
        if (coef == "1" && mask != 0)
            out += mono;
        else
            out += coef + "*" + mono;
    }
    return out;
}

Doc Doc::object() {
    Doc d;
    d.kind_ = Kind::object_k;
    return d;
}
Doc Doc::array() {
    Doc d;
    d.kind_ = Kind::array_k;
    return d;
}
Doc Doc::str(const std::string& s) {
    Doc d;
    d.kind_ = Kind::string_k;
    d.sval_ = s;
    return d;
}
Doc Doc::num(double v) {
    Doc d;
    d.kind_ = Kind::number_k;
    d.nval_ = v;
    return d;
}
Doc Doc::boolean(bool b) {
    Doc d;
    d.kind_ = Kind::bool_k;
    d.bval_ = b;
    return d;
}

Doc& Doc::set(const std::string& key, Doc v) {
    members_.emplace_back(key, std::move(v));
    return *this;
}
Doc& Doc::push(Doc v) {
    elems_.push_back(std::move(v));
    return *this;
}

namespace {
std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        if (ch == '\n') {
            out += "\\n";
            continue;
        }
        out += ch;
    }
    return out;
}
} // namespace

void Doc::render_to(std::string& out, int depth, int indent) const {
    auto pad = [&](int d) {
        if (indent > 0) out.append(size_t(d) * indent, ' ');
    };
    switch (kind_) {
        case Kind::string_k:
            out += '"' + escape(sval_) + '"';
            break;
        case Kind::number_k:
            out += fmt_double(nval_);
            break;
        case Kind::bool_k:
            out += bval_ ? "true" : "false";
            break;
        case Kind::object_k: {
            if (members_.empty()) {
                out += "{}";
                break;
            }
            out += '{';
            bool first = true;
            for (const auto& [k, v] : members_) {
                if (!first) out += ',';
                first = false;
                if (indent > 0) out += '\n';
                pad(depth + 1);
                out += '"' + escape(k) + "\":";
                if (indent > 0) out += ' ';
                v.render_to(out, depth + 1, indent);
            }
            if (indent > 0) out += '\n';
            pad(depth);
            out += '}';
            break;
        }
        case Kind::array_k: {
            if (elems_.empty()) {
                out += "[]";
                break;
            }
            out += '[';
            bool first = true;
            for (const auto& v : elems_) {
                if (!first) out += ',';
                first = false;
                if (indent > 0) out += '\n';
                pad(depth + 1);
                v.render_to(out, depth + 1, indent);
            }
            if (indent > 0) out += '\n';
            pad(depth);
            out += ']';
            break;
        }
    }
}

std::string Doc::render(int indent) const {
    std::string out;
    render_to(out, 0, indent);
    out += '\n';
    return out;
}

} // namespace psk
