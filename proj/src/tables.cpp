#include "linkcalc/tables.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace linkcalc {

void SweepSpec::validate() const {
    if (!(start < stop) && points != 1)
        throw DomainError("sweep: start must be < stop");
    if (points < 2 && !(points == 1))
        throw DomainError("sweep: points must be >= 2");
    if (log_scale && !(start > 0.0))
        throw DomainError("sweep: log scale needs start > 0");
}

std::vector<double> SweepSpec::values() const {
    validate();
    std::vector<double> v;
    v.reserve(points);
    if (points == 1) {
        v.push_back(start);
        return v;
    }
    for (int i = 0; i < points; ++i) {
        double t = static_cast<double>(i) / (points - 1);
        if (log_scale)
            v.push_back(start * std::pow(stop / start, t));
        else
            v.push_back(start + (stop - start) * t);
    }
    return v;
}

SweepSpec::Var SweepSpec::var_from_name(const std::string& name) {
    if (name == "gbar_db") return Var::GbarDb;
    if (name == "theta") return Var::Theta;
    if (name == "epsilon") return Var::Epsilon;
    if (name == "gamma_th_db") return Var::GammaThDb;
    throw InputError("unknown sweep variable '" + name +
                     "' (expected gbar_db|theta|epsilon|gamma_th_db)");
}

std::string SweepSpec::var_name(Var v) {
    switch (v) {
        case Var::GbarDb: return "gbar_db";
        case Var::Theta: return "theta";
        case Var::Epsilon: return "epsilon";
        case Var::GammaThDb: return "gamma_th_db";
    }
    return "?";
}

std::string format_g12(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void Table::write_text(std::ostream& os) const {
    for (const auto& [k, v] : meta) os << "# " << k << ": " << v << "\n";
    os << "# columns:";
    for (const auto& c : columns) os << " " << c;
    os << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << "\t";
            os << format_g12(row[i]);
        }
        os << "\n";
    }
}

void Table::write_json(std::ostream& os) const {
    nlohmann::ordered_json j;
    for (const auto& [k, v] : meta) j["meta"][k] = v;
    j["columns"] = columns;
    auto& rws = j["rows"];
    rws = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (double v : row) {
            if (std::isfinite(v))
                r.push_back(v);
            else
                r.push_back(nullptr);
        }
        rws.push_back(r);
    }
    os << j.dump(2) << "\n";
}

} // namespace linkcalc
