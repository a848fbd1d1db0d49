#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "linkcalc/errors.hpp"

namespace linkcalc {

struct SweepSpec {
    enum class Var { GbarDb, Theta, Epsilon, GammaThDb };
    Var variable = Var::GbarDb;
    double start = 0.0;
    double stop = 50.0;
    int points = 26;
    bool log_scale = false;

    void validate() const;
    std::vector<double> values() const;
    static Var var_from_name(const std::string& name);
    static std::string var_name(Var v);
};

// A sweep result: '#'-prefixed metadata lines, column names, numeric rows.
// The text form is byte-stable for fixed inputs (fixed %.12g formatting, no
// timestamps), which is what makes reruns reproducible.
struct Table {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void write_text(std::ostream& os) const;
    void write_json(std::ostream& os) const;
};

std::string format_g12(double v);

} // namespace linkcalc
