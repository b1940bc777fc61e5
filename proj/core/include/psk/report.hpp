#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "psk/forms.hpp"

namespace psk {

// Fixed 12-significant-digit rendering with negative zero normalized; every
// report surface goes through these so goldens are byte-stable.
std::string fmt_double(double x);
std::string fmt_complex(const Cd& z);

// One alternating form as a signed sum of frame monomials, e.g.
// "-0.5*u4 + 2*u12". `letter` names the frame covectors, 1-based.
std::string form_to_text(const Form<Cd>& f, const std::string& letter = "u");

// Minimal ordered JSON document: objects keep insertion order, numbers render
// through fmt_double. Enough structure for the psk-report/1 schema.
class Doc {
public:
    static Doc object();
    static Doc array();
    static Doc str(const std::string& s);
    static Doc num(double v);
    static Doc boolean(bool b);

    Doc& set(const std::string& key, Doc v);       // object member
    Doc& push(Doc v);                              // array element
    std::string render(int indent = 0) const;      // JSON text

private:
    enum class Kind { object_k, array_k, string_k, number_k, bool_k };
    Kind kind_ = Kind::object_k;
    std::string sval_;
    double nval_ = 0.0;
    bool bval_ = false;
    std::vector<std::pair<std::string, Doc>> members_;
    std::vector<Doc> elems_;

    void render_to(std::string& out, int depth, int indent) const;
};

} // namespace psk
