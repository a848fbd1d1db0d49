#pragma once

#include <cstdint>
#include <string>

#include "linkcalc/snr.hpp"

namespace linkcalc {

// One fully-specified evaluation scenario: fading parameters for both hops,
// link budget, relay, QoS, and the optional direct average-SNR override that
// mirrors how the reference figures are parameterized.
struct Scenario {
    ShadowedRicianParams sr = shadowed_rician_from_physical(0.25, 2, 0.5);
    FisherFParams ru = fisher_f_normalized(1.1, 2.1);
    LinkBudget budget;
    RelayConfig relay = relay_semi_blind(RelayScheme::DF);
    QosSpec qos;
    double gamma_th_db = 10.0;
    bool snr_override = true;
    double gbar_sr_db = 20.0;
    double gbar_ru_db = 20.0;

    double gbar_sr_linear() const;
    double gbar_ru_linear() const;
    double gamma_th_linear() const;

    SnrDistribution distribution(LinkKind kind) const;

    // canonical text form (stable field order/formatting) and its FNV-1a hash
    std::string canonical() const;
    std::uint64_t hash() const;
};

Scenario default_scenario();

// INI-style scenario file: [section] headers, key = value pairs, '#' comments.
// Unknown sections or keys are a hard error.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text, const std::string& origin);

// Apply a "section.key=value" override (the CLI --set flag).
void apply_override(Scenario& sc, const std::string& assignment);

} // namespace linkcalc
